#pragma once

/* The critical interval (a, b).
 *
 * Let f(t) = -P(t)/t^r.  Its critical points are the roots of
 *     R(t) = t^{2r} f'(t) = r t^{r-1} P(t) - t^r P'(t)
 *          = t^{r-1} * W(t),          W(t) = r P(t) - t P'(t).
 * All roots of R are real (a consequence of root interlacing of P and P').
 * With t_a the smallest positive root of R and t_b its largest nonpositive
 * root (t_b = 0 exactly when r > 1, with multiplicity r-1; for r = 1 it is
 * the unique negative root), the endpoints are
 *     a = f(t_a),    b = (t_b == 0) ? +infinity : f(t_b).
 *
 * Computation is exact end to end: roots of W are either certified rational
 * (then a, b are exact rationals) or certified irrational and delivered as
 * rational enclosures of any requested width, propagated through f with a
 * rigorous derivative bound.
 */

#include <optional>
#include <utility>
#include <vector>

#include "hyperzero/genseq.hpp"
#include "hyperzero/sturm.hpp"

namespace hyperzero {

/* An algebraic number: exactly rational (exact set, lo == hi == *exact) or
 * certified irrational inside [lo, hi]. */
struct CriticalPoint {
    std::optional<Rational> exact;
    Rational lo, hi;
};

struct Endpoint {
    bool is_infinite = false;
    std::optional<Rational> exact;
    Rational lo, hi;  // meaningless when is_infinite
};

struct IntervalReport {
    ProblemInstance instance;
    ExactPolynomial R;  // t^{r-1} (r P - t P')
    CriticalPoint t_a, t_b;
    Endpoint a, b;
};

/* Conservative bounds for open-interval containment tests:
 *   a_lo <= a <= a_hi   and   b_lo <= b <= b_hi  (unless b infinite),
 * with slack widths at most the width passed to the producing call. */
struct ContainmentBounds {
    Rational a_lo, a_hi;
    bool b_infinite = false;
    Rational b_lo, b_hi;
};

/* R(t) = r t^{r-1} P(t) - t^r P'(t) */
inline ExactPolynomial critical_polynomial(const ProblemInstance &inst) {
    ExactPolynomial W = inst.P * Rational(inst.r) - inst.P.derivative().shifted_up(1);
    return W.shifted_up(inst.r - 1);
}

namespace detail {

inline Integer rfloor(const Rational &x) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline Integer rceil(const Rational &x) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

/* The smallest-denominator rational in the closed interval [x, y]
 * (Stern-Brocot / continued-fraction descent). */
inline Rational simplest_in_closed(const Rational &x, const Rational &y) {
    if (x > y) throw validation_error("simplest_in_closed: empty interval");
    if (x <= 0 && y >= 0) return Rational(0);
    if (x > 0) {
        Integer c = rceil(x);
        if (Rational(c) <= y) return Rational(c);
        Rational fr(rfloor(x));  // == floor(y): no integer inside
        return fr + 1 / simplest_in_closed(1 / (y - fr), 1 / (x - fr));
    }
    return -simplest_in_closed(-y, -x);
}

/* Refine an enclosure until it does not straddle zero (valid whenever the
 * polynomial has no root at 0). */
inline RootEnclosure settle_sign(const ExactPolynomial &p, RootEnclosure e) {
    while (e.lo < 0 && e.hi > 0) e = refine(e, p, (e.hi - e.lo) / 4);
    return e;
}

/* Decide rational-vs-irrational for the unique root inside e.  A rational
 * root of the primitive integer form of W has denominator dividing the
 * leading coefficient L; two rationals with denominators <= L are at least
 * 1/L^2 apart, so once the enclosure is narrower than that, the root is
 * rational iff the simplest rational inside is a root. */
inline CriticalPoint certify_point(const ExactPolynomial &W, RootEnclosure e,
                                   const Rational &width) {
    IntPoly wi = intpoly_from_exact(W);
    Integer L = abs(wi.back());
    Rational sep = Rational(1) / Rational(2 * L * L);
    Rational w = width < sep ? width : sep;
    e = refine(e, W, w);
    for (;;) {
        Rational s = simplest_in_closed(e.lo, e.hi);
        if (s > e.lo) {
            if (eval_sign_at(wi, s.get_num(), s.get_den()) == 0)
                return CriticalPoint{s, s, s};
            return CriticalPoint{std::nullopt, e.lo, e.hi};
        }
        /* simplest point sits on the excluded lower endpoint: shrink more */
        e = refine(e, W, (e.hi - e.lo) / 4);
    }
}

/* Rigorous enclosure of f(t) = -P(t)/t^r over a t-range of one sign. */
inline Endpoint map_through_f(const ProblemInstance &inst, const CriticalPoint &t) {
    auto f = [&](const Rational &x) -> Rational {
        return -inst.P.eval(x) / rational_pow(x, (unsigned long)inst.r);
    };
    if (t.exact) {
        Rational v = f(*t.exact);
        return Endpoint{false, v, v, v};
    }
    /* |f'| = |R|/t^{2r} <= sum_i |R_i| hmax^i / hmin^{2r} on the range */
    ExactPolynomial R =
        (inst.P * Rational(inst.r) - inst.P.derivative().shifted_up(1)).shifted_up(inst.r - 1);
    Rational alo = abs(t.lo), ahi = abs(t.hi);
    Rational hmax = alo > ahi ? alo : ahi;
    Rational hmin = alo < ahi ? alo : ahi;
    Rational num(0), hp(1);
    for (const auto &c : R.coeffs) {
        num += abs(c) * hp;
        hp *= hmax;
    }
    Rational M = num / rational_pow(hmin, (unsigned long)(2 * inst.r));
    Rational w = t.hi - t.lo;
    Rational flo = f(t.lo), fhi = f(t.hi);
    Rational big = flo > fhi ? flo : fhi;
    Rational small = flo < fhi ? flo : fhi;
    return Endpoint{false, std::nullopt, big - M * w, small + M * w};
}

}  // namespace detail

/* Tighten the a/b enclosures of a report until their widths are at most
 * `width` (no-op for exact or infinite endpoints). */
inline IntervalReport tighten_endpoints(IntervalReport rep, const Rational &width) {
    if (width <= 0) throw validation_error("tighten_endpoints: width must be positive");
    ExactPolynomial W =
        rep.instance.P * Rational(rep.instance.r) - rep.instance.P.derivative().shifted_up(1);
    auto tighten = [&](CriticalPoint &t, Endpoint &e) {
        if (e.is_infinite || e.exact) return;
        while (e.hi - e.lo > width) {
            Rational tw = (t.hi - t.lo) * width / (e.hi - e.lo) / 4;
            RootEnclosure enc = refine({t.lo, t.hi}, W, tw);
            t.lo = enc.lo;
            t.hi = enc.hi;
            e = detail::map_through_f(rep.instance, t);
        }
    };
    tighten(rep.t_a, rep.a);
    tighten(rep.t_b, rep.b);
    return rep;
}

/* Bounds as currently stored in the report, without further tightening. */
inline ContainmentBounds current_bounds(const IntervalReport &rep) {
    ContainmentBounds cb;
    if (rep.a.exact) {
        cb.a_lo = cb.a_hi = *rep.a.exact;
    } else {
        cb.a_lo = rep.a.lo;
        cb.a_hi = rep.a.hi;
    }
    if (rep.b.is_infinite) {
        cb.b_infinite = true;
    } else if (rep.b.exact) {
        cb.b_lo = cb.b_hi = *rep.b.exact;
    } else {
        cb.b_lo = rep.b.lo;
        cb.b_hi = rep.b.hi;
    }
    return cb;
}

inline ContainmentBounds containment_bounds(const IntervalReport &rep, const Rational &width) {
    return current_bounds(tighten_endpoints(rep, width));
}

/* The safe inner pair: a_hi >= a and b_lo <= b with slack at most `width`;
 * counting roots in the open interval (a_hi, b_lo) can only undercount
 * containment in (a, b), never overcount. */
inline std::pair<Rational, std::optional<Rational>> endpoint_bounds(const IntervalReport &rep,
                                                                    const Rational &width) {
    ContainmentBounds cb = containment_bounds(rep, width);
    if (cb.b_infinite) return {cb.a_hi, std::nullopt};
    return {cb.a_hi, cb.b_lo};
}

inline IntervalReport interval_report(const ProblemInstance &inst,
                                      const Rational &width = Rational(1, Integer(1) << 40)) {
    if (width <= 0) throw validation_error("interval_report: width must be positive");
    IntervalReport rep;
    rep.instance = inst;
    rep.R = critical_polynomial(inst);
    ExactPolynomial W = inst.P * Rational(inst.r) - inst.P.derivative().shifted_up(1);

    /* all roots of R are real; verify the nontrivial factor W exactly */
    if (sturm_count_real_line(W) != squarefree_part(W).degree())
        throw numeric_error("critical polynomial has a nonreal root");

    std::vector<RootEnclosure> encs = isolate_real_roots(W);
    std::vector<CriticalPoint> neg, pos;
    for (auto &e : encs) {
        RootEnclosure s = detail::settle_sign(W, e);
        CriticalPoint cp = detail::certify_point(W, s, width);
        if (cp.hi <= 0)
            neg.push_back(cp);
        else
            pos.push_back(cp);
    }
    if (pos.empty()) throw numeric_error("no positive critical point found");
    rep.t_a = pos.front();
    rep.a = detail::map_through_f(inst, rep.t_a);

    if (inst.r > 1) {
        rep.t_b = CriticalPoint{Rational(0), Rational(0), Rational(0)};
        rep.b.is_infinite = true;
    } else {
        if (neg.size() != 1) throw numeric_error("expected exactly one negative critical point");
        rep.t_b = neg.back();
        rep.b = detail::map_through_f(inst, rep.t_b);
    }
    return tighten_endpoints(std::move(rep), width);
}

}  // namespace hyperzero
