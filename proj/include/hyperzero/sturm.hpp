#pragma once

/* Exact real-root counting and isolation via Sturm chains.
 *
 * The chain is the classical negated-remainder sequence of (p, p').  Each
 * element is kept as a primitive integer polynomial: pseudo-remainders use
 * a guaranteed-positive multiplier |lc|^k and every element is divided by
 * its (positive) integer content.  Positive scaling preserves the Sturm
 * sign structure, so the stored chain is a genuine Sturm sequence.
 *
 * For non-squarefree p the sequence is the generalized chain ending in
 * ~gcd(p,p'); sign-variation differences then count *distinct* roots.
 * Counting queries go through the squarefree chain, where the skip-zeros
 * variation count V is right-continuous, giving the clean half-open rule
 *   #roots in (c, d]  =  V(c) - V(d)
 * with no precondition on whether c or d are themselves roots.
 */

#include <cassert>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hyperzero/polynomial.hpp"

namespace hyperzero {

namespace detail {

using IntPoly = std::vector<Integer>;  // index = exponent, no trailing zero

inline void itrim(IntPoly &p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int ideg(const IntPoly &p) { return (int)p.size() - 1; }

inline IntPoly iderivative(const IntPoly &p) {
    if (p.size() <= 1) return {};
    IntPoly d(p.size() - 1);
    for (size_t i = 1; i < p.size(); i++) d[i - 1] = p[i] * (long)i;
    return d;
}

/* positive gcd of all coefficients (1 for the zero polynomial) */
inline Integer icontent(const IntPoly &p) {
    Integer g = 0;
    for (const auto &c : p) {
        if (c == 0) continue;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) return g;
    }
    return g == 0 ? Integer(1) : g;
}

inline void idivexact(IntPoly &p, const Integer &g) {
    if (g == 1) return;
    for (auto &c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

inline void make_primitive(IntPoly &p) { idivexact(p, icontent(p)); }

/* Pseudo-remainder of a by b with multiplier |lc(b)|^(deg a - deg b + 1).
 * The positive multiplier keeps the result a positive-scalar multiple of
 * the true remainder, which is what the Sturm sign bookkeeping needs. */
inline IntPoly prem_pos(IntPoly a, const IntPoly &b) {
    int da = ideg(a), db = ideg(b);
    assert(db >= 0 && da >= db);
    const Integer &l = b.back();
    Integer labs = abs(l);
    for (int k = da; k >= db; k--) {
        for (auto &c : a) c *= labs;
        Integer q = a[k] / l;  // exact: a[k] was just scaled by |l|
        for (int j = 0; j <= db; j++) a[k - db + j] -= q * b[j];
        a[k] = 0;
    }
    itrim(a);
    return a;
}

/* Clear denominators and strip content: the unique primitive integer
 * polynomial that is a positive rational multiple of p. */
inline IntPoly intpoly_from_exact(const ExactPolynomial &p) {
    Integer L = 1;
    for (const auto &c : p.coeffs) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.get_den().get_mpz_t());
    IntPoly out(p.coeffs.size());
    for (size_t i = 0; i < out.size(); i++) {
        Integer t;
        mpz_divexact(t.get_mpz_t(), L.get_mpz_t(), p.coeffs[i].get_den().get_mpz_t());
        out[i] = p.coeffs[i].get_num() * t;
    }
    itrim(out);
    make_primitive(out);
    return out;
}

inline ExactPolynomial exact_from_intpoly(const IntPoly &p) {
    std::vector<Rational> c(p.size());
    for (size_t i = 0; i < p.size(); i++) c[i] = Rational(p[i]);
    return ExactPolynomial(std::move(c));
}

/* sign of p(num/den), den > 0, via the homogenized integer form
 * sum_i c_i num^i den^(deg-i) */
inline int eval_sign_at(const IntPoly &p, const Integer &num, const Integer &den) {
    if (p.empty()) return 0;
    Integer acc = p.back(), vp = 1;
    for (size_t i = p.size() - 1; i-- > 0;) {
        vp *= den;
        acc = acc * num + p[i] * vp;
    }
    return sgn(acc);
}

inline int eval_sign_pos_inf(const IntPoly &p) { return p.empty() ? 0 : sgn(p.back()); }

inline int eval_sign_neg_inf(const IntPoly &p) {
    if (p.empty()) return 0;
    int s = sgn(p.back());
    return (ideg(p) % 2 == 0) ? s : -s;
}

/* Walk the chain of (p0, p1) element by element without storing it; fn is
 * called on p0, p1, then each primitive negated pseudo-remainder.  Returns
 * the final nonzero element (~gcd of p0 and p1, primitive). */
inline IntPoly prs_walk(IntPoly p0, IntPoly p1,
                        const std::function<void(const IntPoly &)> &fn) {
    assert(!p0.empty());
    fn(p0);
    if (p1.empty()) return p0;
    fn(p1);
    for (;;) {
        IntPoly rem = prem_pos(p0, p1);
        if (rem.empty()) return p1;
        for (auto &c : rem) c = -c;
        make_primitive(rem);
        fn(rem);
        p0 = std::move(p1);
        p1 = std::move(rem);
    }
}

/* Sign-variation accumulator for one query point, fed chain elements in
 * order.  Zero signs are skipped (the standard convention; on a squarefree
 * chain this makes V right-continuous). */
struct var_counter {
    int prev = 0;
    long vars = 0;
    void feed(int s) {
        if (s == 0) return;
        if (prev != 0 && s != prev) vars++;
        prev = s;
    }
};

}  // namespace detail

/* Contains exactly one real root of the polynomial it was produced for,
 * located in the half-open interval (lo, hi]. */
struct RootEnclosure {
    Rational lo, hi;
};

/* One endpoint of a counting query. */
struct Bound {
    enum Kind { neg_inf, finite, pos_inf } kind = finite;
    Rational value;

    Bound() = default;
    Bound(Rational q) : kind(finite), value(std::move(q)) {}  // NOLINT: implicit by design
    Bound(Kind k, Rational q) : kind(k), value(std::move(q)) {}

    static Bound ninf() { return {neg_inf, Rational(0)}; }
    static Bound pinf() { return {pos_inf, Rational(0)}; }
    static Bound at(Rational q) { return {finite, std::move(q)}; }
};

struct SturmChain {
    std::vector<ExactPolynomial> chain;        // primitive integer elements
    std::vector<detail::IntPoly> ichain;       // same data, integer mirror
    bool squarefree_input = false;             // true iff last element is constant

    int size() const { return (int)ichain.size(); }

    long variations(const Bound &b) const {
        detail::var_counter v;
        for (const auto &e : ichain) {
            switch (b.kind) {
                case Bound::neg_inf: v.feed(detail::eval_sign_neg_inf(e)); break;
                case Bound::pos_inf: v.feed(detail::eval_sign_pos_inf(e)); break;
                case Bound::finite:
                    v.feed(detail::eval_sign_at(e, b.value.get_num(), b.value.get_den()));
                    break;
            }
        }
        return v.vars;
    }
};

inline SturmChain sturm_chain(const ExactPolynomial &p) {
    if (p.is_zero()) throw validation_error("sturm_chain: zero polynomial");
    SturmChain out;
    detail::IntPoly p0 = detail::intpoly_from_exact(p);
    detail::IntPoly last = detail::prs_walk(p0, detail::iderivative(p0),
                                            [&](const detail::IntPoly &e) { out.ichain.push_back(e); });
    out.squarefree_input = detail::ideg(last) <= 0;
    out.chain.reserve(out.ichain.size());
    for (const auto &e : out.ichain) out.chain.push_back(detail::exact_from_intpoly(e));
    return out;
}

namespace detail {

/* Exact division of integer polynomials (remainder must vanish). */
inline IntPoly idivide_exact(const IntPoly &a, const IntPoly &b) {
    assert(!b.empty());
    IntPoly rem = a, q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    int db = ideg(b);
    while (ideg(rem) >= db) {
        int k = ideg(rem);
        Integer qc;
        mpz_divexact(qc.get_mpz_t(), rem[k].get_mpz_t(), b.back().get_mpz_t());
        q[k - db] = qc;
        for (int j = 0; j <= db; j++) rem[k - db + j] -= qc * b[j];
        itrim(rem);
    }
    assert(rem.empty());
    return q;
}

/* Primitive squarefree part with positive leading coefficient. */
inline IntPoly squarefree_int(const IntPoly &p) {
    if (ideg(p) <= 0) return {Integer(1)};
    IntPoly g = prs_walk(p, iderivative(p), [](const IntPoly &) {});
    IntPoly sf;
    if (ideg(g) <= 0) {
        sf = p;
    } else {
        make_primitive(g);
        sf = idivide_exact(p, g);
        make_primitive(sf);
    }
    if (sf.back() < 0)
        for (auto &c : sf) c = -c;
    return sf;
}

}  // namespace detail

/* p / gcd(p, p'), monic-normalized. */
inline ExactPolynomial squarefree_part(const ExactPolynomial &p) {
    if (p.is_zero()) throw validation_error("squarefree_part: zero polynomial");
    ExactPolynomial sf =
        detail::exact_from_intpoly(detail::squarefree_int(detail::intpoly_from_exact(p)));
    return sf * (1 / sf.coeffs.back());
}

/* Number of distinct real roots of p in the open interval (lo, hi); either
 * bound may be infinite.  Exact. */
inline long sturm_count(const ExactPolynomial &p, const Bound &lo, const Bound &hi) {
    if (p.is_zero()) throw validation_error("sturm_count: zero polynomial");
    if (p.degree() == 0) return 0;
    detail::IntPoly sf = detail::squarefree_int(detail::intpoly_from_exact(p));
    SturmChain ch;
    detail::prs_walk(sf, detail::iderivative(sf),
                     [&](const detail::IntPoly &e) { ch.ichain.push_back(e); });
    long count = ch.variations(lo) - ch.variations(hi);
    /* (lo, hi] -> (lo, hi): drop a root sitting exactly at the upper bound */
    if (hi.kind == Bound::finite &&
        detail::eval_sign_at(sf, hi.value.get_num(), hi.value.get_den()) == 0)
        count--;
    return count;
}

inline long sturm_count_real_line(const ExactPolynomial &p) {
    return sturm_count(p, Bound::ninf(), Bound::pinf());
}

/* Enclosures for all distinct real roots of p, pairwise disjoint, each of
 * the form (lo, hi] with dyadic endpoints.  Bisection on the squarefree
 * Sturm chain starting from the Cauchy bound. */
inline std::vector<RootEnclosure> isolate_real_roots(const ExactPolynomial &p) {
    if (p.is_zero()) throw validation_error("isolate_real_roots: zero polynomial");
    std::vector<RootEnclosure> out;
    if (p.degree() == 0) return out;
    detail::IntPoly sf = detail::squarefree_int(detail::intpoly_from_exact(p));
    SturmChain ch;
    detail::prs_walk(sf, detail::iderivative(sf),
                     [&](const detail::IntPoly &e) { ch.ichain.push_back(e); });

    /* |root| < 1 + max|c_i| / |c_d|, rounded up to a power of two */
    Rational bound(2);
    {
        Integer mx = 0;
        for (const auto &c : sf) {
            Integer a = abs(c);
            if (a > mx) mx = a;
        }
        Integer lead = abs(sf.back());
        Integer q = mx / lead + 2;
        while (bound.get_num() < q) bound *= 2;
    }

    struct Node {
        Rational lo, hi;
        long vlo, vhi;
    };
    long vneg = ch.variations(Bound::at(-bound));
    long vpos = ch.variations(Bound::at(bound));
    std::vector<Node> stack;
    if (vneg - vpos > 0) stack.push_back({-bound, bound, vneg, vpos});
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        long k = nd.vlo - nd.vhi;
        if (k == 0) continue;
        if (k == 1) {
            out.push_back({nd.lo, nd.hi});
            continue;
        }
        Rational mid = (nd.lo + nd.hi) / 2;
        long vmid = ch.variations(Bound::at(mid));
        /* push right first so output comes out sorted ascending */
        stack.push_back({mid, nd.hi, vmid, nd.vhi});
        stack.push_back({nd.lo, mid, nd.vlo, vmid});
    }
    return out;
}

/* Shrink an enclosure of a single root of p below the requested width by
 * exact-sign bisection.  The invariant "exactly one root in (lo, hi]" is
 * preserved at every step. */
inline RootEnclosure refine(RootEnclosure e, const ExactPolynomial &p, const Rational &width) {
    if (p.is_zero()) throw validation_error("refine: zero polynomial");
    if (width <= 0) throw validation_error("refine: width must be positive");
    detail::IntPoly sf = detail::squarefree_int(detail::intpoly_from_exact(p));
    auto sign_at = [&](const Rational &x) {
        return detail::eval_sign_at(sf, x.get_num(), x.get_den());
    };
    int s_hi = sign_at(e.hi);
    if (s_hi == 0) {
        /* the root is exactly the upper endpoint */
        Rational lo = e.hi - width / 2;
        if (lo < e.lo) lo = e.lo;
        return {lo, e.hi};
    }
    while (e.hi - e.lo > width) {
        Rational mid = (e.lo + e.hi) / 2;
        int s_mid = sign_at(mid);
        if (s_mid == 0) {
            Rational lo = mid - width / 2;
            if (lo < e.lo) lo = e.lo;
            return {lo, mid};
        }
        if (s_mid == s_hi)
            e.hi = mid;
        else
            e.lo = mid;
    }
    return e;
}

}  // namespace hyperzero
