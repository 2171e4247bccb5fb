#pragma once

/* Exact hyperbolicity certification and zero-distribution metrics.
 *
 * certify(m): decides, in exact rational arithmetic, whether every root of
 * H_m is real and lies in the open critical interval (a, b).  The engine is
 * one Sturm-chain walk per m: sign-variation counts V(x) on the squarefree
 * chain obey #roots in (c, d] = V(c) − V(d) unconditionally, so bucket
 * counts (inside / below a / above b) come from variations at conservative
 * rational bounds for a and b, refined until nothing is left indeterminate
 * or a width floor of 2^−64 is reached.
 *
 * density_profile: aggregates the zeros of all H_m up to m_max by sweeping
 * the angle parametrization — H(θ; m) changes sign exactly where z(θ)
 * crosses a root — which stays cheap at degrees where exact isolation is
 * hopeless.  Each m is validated by matching the count of located zeros to
 * deg H_m, with an exact-isolation fallback at small degree.
 *
 * conjecture2_scan: per-m realness table for the generalized denominator
 * P(t) + C t^s + z t^r (same recurrence with one extra term). */

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "hyperzero/interval.hpp"
#include "hyperzero/parallel.hpp"
#include "hyperzero/theta.hpp"

namespace hyperzero {

enum class Verdict { HYPERBOLIC_IN_AB, REAL_NOT_CONTAINED, NOT_ALL_REAL, INDETERMINATE };

inline const char *verdict_name(Verdict v) {
    switch (v) {
        case Verdict::HYPERBOLIC_IN_AB: return "HYPERBOLIC_IN_AB";
        case Verdict::REAL_NOT_CONTAINED: return "REAL_NOT_CONTAINED";
        case Verdict::NOT_ALL_REAL: return "NOT_ALL_REAL";
        case Verdict::INDETERMINATE: return "INDETERMINATE";
    }
    return "?";
}

struct HyperbolicityCertificate {
    int m = 0;
    int degree = 0;
    int distinct_real_roots = 0;
    bool is_squarefree = true;
    int roots_in_interval = 0;
    int roots_outside = 0;
    int indeterminate = 0;
    Verdict verdict = Verdict::HYPERBOLIC_IN_AB;
};

namespace detail {

inline Rational dyadic_floor(const Rational &x, unsigned long bits) {
    Rational scaled;
    mpq_mul_2exp(scaled.get_mpq_t(), x.get_mpq_t(), bits);
    Rational out(rfloor(scaled));
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), bits);
    return out;
}

inline Rational dyadic_ceil(const Rational &x, unsigned long bits) {
    Rational scaled;
    mpq_mul_2exp(scaled.get_mpq_t(), x.get_mpq_t(), bits);
    Rational out(rceil(scaled));
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), bits);
    return out;
}

/* Squarefree Sturm chain of p, built with a single remainder walk when p is
 * already squarefree (the common case), plus the degree of p's squarefree
 * part and whether p itself was squarefree. */
struct SquarefreeChain {
    SturmChain chain;   // ichain only; exact mirrors are not materialized
    IntPoly sf;         // primitive squarefree part
    bool input_squarefree = false;
};

inline SquarefreeChain squarefree_chain(const ExactPolynomial &p) {
    SquarefreeChain out;
    IntPoly ip = intpoly_from_exact(p);
    std::vector<IntPoly> elems;
    IntPoly last = prs_walk(ip, iderivative(ip), [&](const IntPoly &e) { elems.push_back(e); });
    if (ideg(last) <= 0) {
        out.input_squarefree = true;
        out.sf = std::move(ip);
        out.chain.ichain = std::move(elems);
    } else {
        out.input_squarefree = false;
        make_primitive(last);
        out.sf = idivide_exact(ip, last);
        make_primitive(out.sf);
        if (out.sf.back() < 0)
            for (auto &c : out.sf) c = -c;
        prs_walk(out.sf, iderivative(out.sf),
                 [&](const IntPoly &e) { out.chain.ichain.push_back(e); });
    }
    out.chain.squarefree_input = true;
    return out;
}

/* Exact alternation fast path: evaluate H_m at dyadic approximations of the
 * analytically predicted interleaving points z(hπ/(m+r)), plus two endpoint
 * probes.  deg-many exact sign changes at points strictly inside the
 * certified interval bounds pin the whole certificate — every root real,
 * simple, and contained — with no chain work.  The float parametrization only
 * chooses the evaluation points; every sign decision is exact rational
 * arithmetic, so a miss simply returns false and the chain path decides. */
inline bool alternation_certificate(const ProblemInstance &inst, const IntPoly &Hi, int degree,
                                    int m, const ContainmentBounds &cb) {
    if (degree < 8 || m < 1) return false;
    const double pi = std::numbers::pi;
    const int K = (m + inst.r - 1) / inst.r;  // nodes below π/r
    std::vector<double> thetas;
    thetas.reserve((std::size_t)K + 2);
    thetas.push_back(pi / (4.0 * (m + inst.r)));
    for (int h = 1; h <= K; ++h) thetas.push_back(h * pi / (m + inst.r));
    thetas.push_back(pi / inst.r - pi / (4.0 * (m + inst.r)));

    int changes = 0, prev = 0;
    std::optional<ThetaSolution> sol;
    for (double th : thetas) {
        try {
            sol = sol ? solve_theta_warm(inst, th, *sol) : solve_theta(inst, th);
        } catch (const numeric_error &) {
            sol.reset();
            continue;
        }
        Rational zhat = rational_from_double(sol->z);
        if (!(zhat > cb.a_hi)) continue;
        if (!cb.b_infinite && !(zhat < cb.b_lo)) continue;
        int s = eval_sign_at(Hi, zhat.get_num(), zhat.get_den());
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
        if (changes == degree) return true;  // cannot exceed deg many roots
    }
    return false;
}

}  // namespace detail

/* Certify one H_m against the critical interval of `report`. */
inline HyperbolicityCertificate certify(const ProblemInstance &instance,
                                        const GeneratedSequence &seq, const IntervalReport &report,
                                        int m) {
    const ExactPolynomial &H = seq.at(m);
    if (H.is_zero()) throw numeric_error("certify: H_m is the zero polynomial");

    HyperbolicityCertificate cert;
    cert.m = m;
    cert.degree = H.degree();
    if (cert.degree == 0) return cert;  // vacuously hyperbolic

    {
        ContainmentBounds cb = containment_bounds(report, Rational(1, Integer(1) << 40));
        detail::IntPoly Hi = detail::intpoly_from_exact(H);
        if (detail::alternation_certificate(instance, Hi, cert.degree, m, cb)) {
            cert.distinct_real_roots = cert.degree;
            cert.is_squarefree = true;
            cert.roots_in_interval = cert.degree;
            cert.roots_outside = 0;
            cert.indeterminate = 0;
            cert.verdict = Verdict::HYPERBOLIC_IN_AB;
            return cert;
        }
    }

    detail::SquarefreeChain sc = detail::squarefree_chain(H);
    cert.is_squarefree = sc.input_squarefree;
    const int sf_degree = detail::ideg(sc.sf);
    long v_ninf = sc.chain.variations(Bound::ninf());
    long v_pinf = sc.chain.variations(Bound::pinf());
    cert.distinct_real_roots = (int)(v_ninf - v_pinf);

    auto sf_zero_at = [&](const Rational &x) {
        return detail::eval_sign_at(sc.sf, x.get_num(), x.get_den()) == 0;
    };

    IntervalReport work = report;
    Rational width = Rational(1, Integer(1) << 40);
    const Rational floor_width = Rational(1, Integer(1) << 64);
    for (;;) {
        work = tighten_endpoints(std::move(work), width);
        ContainmentBounds cb = current_bounds(work);

        /* Conservative query points: rounding a_lo/b_lo down and a_hi/b_hi up
         * keeps a_lo <= a <= a_hi and b_lo <= b <= b_hi while making the
         * chain evaluations cheap.  Skipped for exact endpoints and once the
         * requested width outruns the rounding grid. */
        const unsigned long grid_bits = 45;
        bool round_ok = width > Rational(1, Integer(1) << 44);
        bool a_exact = work.a.exact.has_value();
        bool b_exact = !cb.b_infinite && work.b.exact.has_value();
        Rational a_lo = (!a_exact && round_ok) ? detail::dyadic_floor(cb.a_lo, grid_bits) : cb.a_lo;
        Rational a_hi = (!a_exact && round_ok) ? detail::dyadic_ceil(cb.a_hi, grid_bits) : cb.a_hi;
        Rational b_lo, b_hi;
        if (!cb.b_infinite) {
            b_lo = (!b_exact && round_ok) ? detail::dyadic_floor(cb.b_lo, grid_bits) : cb.b_lo;
            b_hi = (!b_exact && round_ok) ? detail::dyadic_ceil(cb.b_hi, grid_bits) : cb.b_hi;
        }

        long v_alo = sc.chain.variations(Bound::at(a_lo));
        long v_ahi = a_exact ? v_alo : sc.chain.variations(Bound::at(a_hi));

        long in, out_low, out_high;
        out_low = v_ninf - v_alo;  // roots in (−∞, a_lo], all ≤ a
        if (cb.b_infinite) {
            in = v_ahi - v_pinf;  // roots in (a_hi, ∞), all in (a, b)
            out_high = 0;
        } else if (b_exact) {
            long v_b = sc.chain.variations(Bound::at(b_lo));
            bool root_at_b = sf_zero_at(b_lo);
            in = v_ahi - v_b - (root_at_b ? 1 : 0);  // (a_hi, b) open at b
            out_high = v_b - v_pinf + (root_at_b ? 1 : 0);  // [b, ∞)
        } else {
            long v_blo = sc.chain.variations(Bound::at(b_lo));
            long v_bhi = sc.chain.variations(Bound::at(b_hi));
            in = v_ahi - v_blo;  // (a_hi, b_lo], all < b since b_lo < b
            out_high = v_bhi - v_pinf + (sf_zero_at(b_hi) ? 1 : 0);  // [b_hi, ∞)
        }

        cert.roots_in_interval = (int)in;
        cert.roots_outside = (int)(out_low + out_high);
        cert.indeterminate = cert.distinct_real_roots - cert.roots_in_interval - cert.roots_outside;

        if (cert.indeterminate == 0 || width <= floor_width) break;
        width /= Integer(1) << 8;
        if (width < floor_width) width = floor_width;
    }

    if (cert.distinct_real_roots < sf_degree)
        cert.verdict = Verdict::NOT_ALL_REAL;
    else if (cert.roots_outside > 0)
        cert.verdict = Verdict::REAL_NOT_CONTAINED;
    else if (cert.indeterminate > 0)
        cert.verdict = Verdict::INDETERMINATE;
    else
        cert.verdict = Verdict::HYPERBOLIC_IN_AB;
    return cert;
}

struct OnsetResult {
    std::optional<int> m0;  // least m with every m' in [m, m_max] certified; nullopt if none
    std::vector<std::pair<int, Verdict>> violations;
    std::vector<HyperbolicityCertificate> certificates;  // indexed by m
};

inline OnsetResult onset(const ProblemInstance &instance, int m_max, int jobs_requested = 1) {
    if (m_max < 0) throw validation_error("onset: m_max must be >= 0");
    GeneratedSequence seq = generate(instance, m_max);
    IntervalReport report = interval_report(instance);

    OnsetResult res;
    res.certificates.resize((size_t)m_max + 1);
    unsigned jobs = resolve_jobs(jobs_requested);
    parallel_for_chunks((size_t)m_max + 1, jobs, [&](size_t begin, size_t end, unsigned) {
        for (size_t m = begin; m < end; ++m)
            res.certificates[m] = certify(instance, seq, report, (int)m);
    });

    int first_bad_from_top = -1;
    for (int m = m_max; m >= 0; --m) {
        if (res.certificates[(size_t)m].verdict != Verdict::HYPERBOLIC_IN_AB) {
            first_bad_from_top = m;
            break;
        }
    }
    if (first_bad_from_top == m_max)
        res.m0 = std::nullopt;
    else
        res.m0 = first_bad_from_top + 1;
    for (int m = 0; m <= m_max; ++m)
        if (res.certificates[(size_t)m].verdict != Verdict::HYPERBOLIC_IN_AB)
            res.violations.emplace_back(m, res.certificates[(size_t)m].verdict);
    return res;
}

struct DensityProfile {
    int m_start = 0;
    int m_max = 0;
    double lo = 0, hi = 0;  // binning window (a, min(b, b_cap))
    std::vector<double> zero_multiset;
    double max_gap = 0;
    double coverage_fraction = 0;
};

namespace detail {

struct ThetaSample {
    double theta = 0;
    ThetaSolution sol;
    HEval val;
    bool is_zero = false;
};

inline ThetaSample make_sample(const HThetaEvaluator &ev, const ProblemInstance &inst, double theta,
                               int m, const ThetaSolution *warm) {
    ThetaSample s;
    s.theta = theta;
    s.sol = warm ? solve_theta_warm(inst, theta, *warm) : solve_theta(inst, theta);
    s.val = ev.evaluate_scaled(s.sol, m);
    s.is_zero = std::abs(s.val.value) <= 1e-9 * s.val.scale;
    return s;
}

/* Locate the zeros of H_m in z-space by sign changes of H(θ; m) over the
 * node grid θ_h = hπ/(m+r) plus endpoint probes, bisecting each bracket.
 * The count is validated against deg H_m; on deficit the grid is midpoint-
 * refined, then (at small degree) exact isolation takes over. */
inline std::vector<double> theta_zeros_for_m(const HThetaEvaluator &ev, int m, int bisect_iters) {
    const ProblemInstance &inst = ev.instance();
    const int d_m = ev.sequence().at(m).degree();
    std::vector<double> zeros;
    if (d_m <= 0) return zeros;

    const double pi = std::numbers::pi;
    const int nodes = m / inst.r;
    std::vector<ThetaSample> samples;
    samples.reserve((size_t)nodes + 2);
    const ThetaSolution *warm = nullptr;
    auto push_theta = [&](double theta) {
        samples.push_back(make_sample(ev, inst, theta, m, warm));
        warm = &samples.back().sol;
    };
    push_theta(pi / (2.0 * (m + inst.r)));
    for (int h = 1; h <= nodes; ++h) push_theta(h * pi / (m + inst.r));
    push_theta(pi / inst.r - pi / (2.0 * (m + inst.r)));

    auto collect = [&]() {
        zeros.clear();
        for (const auto &s : samples)
            if (s.is_zero) zeros.push_back(s.sol.z);
        for (size_t i = 0; i + 1 < samples.size(); ++i) {
            const ThetaSample *lo = &samples[i], *hi = &samples[i + 1];
            if (lo->is_zero || hi->is_zero) continue;
            if ((lo->val.value > 0) == (hi->val.value > 0)) continue;
            ThetaSample a = *lo, b = *hi;
            std::optional<double> hit;
            for (int it = 0; it < bisect_iters; ++it) {
                ThetaSample mid = make_sample(ev, inst, (a.theta + b.theta) / 2, m, &a.sol);
                if (mid.is_zero) {
                    hit = mid.sol.z;
                    break;
                }
                if ((mid.val.value > 0) == (a.val.value > 0))
                    a = mid;
                else
                    b = mid;
            }
            zeros.push_back(hit ? *hit : (a.sol.z + b.sol.z) / 2);
        }
    };

    collect();
    for (int round = 0; round < 3 && (int)zeros.size() < d_m; ++round) {
        std::vector<ThetaSample> refined;
        refined.reserve(samples.size() * 2 - 1);
        for (size_t i = 0; i < samples.size(); ++i) {
            refined.push_back(samples[i]);
            if (i + 1 < samples.size()) {
                double mid_theta = (samples[i].theta + samples[i + 1].theta) / 2;
                refined.push_back(make_sample(ev, inst, mid_theta, m, &samples[i].sol));
            }
        }
        samples = std::move(refined);
        collect();
    }

    if ((int)zeros.size() != d_m) {
        if (d_m <= 64) {
            /* small degree: exact isolation is affordable and authoritative */
            zeros.clear();
            const ExactPolynomial &H = ev.sequence().at(m);
            for (auto &e : isolate_real_roots(H)) {
                RootEnclosure t = refine(e, H, Rational(1, Integer(1) << 40));
                zeros.push_back(to_double((t.lo + t.hi) / 2));
            }
        } else {
            std::ostringstream msg;
            msg << "density: located " << zeros.size() << " zeros of H_" << m << " but degree is "
                << d_m;
            throw numeric_error(msg.str());
        }
    }
    return zeros;
}

}  // namespace detail

inline double default_b_cap(const IntervalReport &report) {
    double a_d = to_double(report.a.exact ? *report.a.exact : (report.a.lo + report.a.hi) / 2);
    return a_d + 10 * std::max(1.0, a_d);
}

inline DensityProfile density_profile(const ProblemInstance &instance, const GeneratedSequence &seq,
                                      const IntervalReport &report, int m_max, int bins,
                                      double b_cap, int m_start = 0) {
    if (bins < 10) throw validation_error("density_profile: need at least 10 bins");
    if (m_max > seq.m_max()) throw validation_error("density_profile: m_max exceeds sequence");
    if (m_start < 0) m_start = 0;

    DensityProfile prof;
    prof.m_start = m_start;
    prof.m_max = m_max;
    prof.lo = to_double(report.a.exact ? *report.a.exact : (report.a.lo + report.a.hi) / 2);
    double b_d = report.b.is_infinite
                     ? b_cap
                     : to_double(report.b.exact ? *report.b.exact : (report.b.lo + report.b.hi) / 2);
    prof.hi = std::min(b_d, b_cap);
    if (!(prof.hi > prof.lo))
        throw validation_error("density_profile: binning window is empty (raise b_cap)");

    HThetaEvaluator ev(seq);
    for (int m = std::max(1, m_start); m <= m_max; ++m) {
        for (double z : detail::theta_zeros_for_m(ev, m, 26))
            if (z > prof.lo && z < prof.hi) prof.zero_multiset.push_back(z);
    }
    std::sort(prof.zero_multiset.begin(), prof.zero_multiset.end());
    if (prof.zero_multiset.empty())
        throw numeric_error("density_profile: no zeros fell inside the binning window");

    double gap = prof.zero_multiset.front() - prof.lo;
    for (size_t i = 0; i + 1 < prof.zero_multiset.size(); ++i)
        gap = std::max(gap, prof.zero_multiset[i + 1] - prof.zero_multiset[i]);
    gap = std::max(gap, prof.hi - prof.zero_multiset.back());
    prof.max_gap = gap;

    std::vector<char> occupied((size_t)bins, 0);
    for (double z : prof.zero_multiset) {
        int idx = (int)((z - prof.lo) / (prof.hi - prof.lo) * bins);
        idx = std::clamp(idx, 0, bins - 1);
        occupied[(size_t)idx] = 1;
    }
    int filled = 0;
    for (char o : occupied) filled += o;
    prof.coverage_fraction = (double)filled / bins;
    return prof;
}

struct Conjecture2Row {
    int m = 0;
    int degree = 0;
    int distinct_real_roots = 0;
    bool all_real = true;
};

struct Conjecture2Result {
    bool hypothesis_holds = false;  // C·(s−r) ≥ 0
    std::vector<Conjecture2Row> rows;
    std::optional<int> first_nonreal_m;
};

/* Per-m realness table for H_m generated by 1/(denominator(t) + z t^r). */
inline Conjecture2Result conjecture2_scan_core(const std::vector<Rational> &denominator, int r,
                                               int m_max, bool hypothesis_holds) {
    Conjecture2Result res;
    res.hypothesis_holds = hypothesis_holds;
    std::vector<ExactPolynomial> H = generate_from_denominator(denominator, r, m_max);
    res.rows.reserve(H.size());
    for (int m = 0; m <= m_max; ++m) {
        Conjecture2Row row;
        row.m = m;
        row.degree = H[(size_t)m].degree();
        if (row.degree > 0) {
            detail::SquarefreeChain sc = detail::squarefree_chain(H[(size_t)m]);
            row.distinct_real_roots =
                (int)(sc.chain.variations(Bound::ninf()) - sc.chain.variations(Bound::pinf()));
            row.all_real = row.distinct_real_roots == detail::ideg(sc.sf);
        }
        if (!row.all_real && !res.first_nonreal_m) res.first_nonreal_m = m;
        res.rows.push_back(row);
    }
    return res;
}

/* Conjecture-2 wrapper: denominator P(t) + C t^s + z t^r with P given by its
 * positive real roots.  The conjecture's hypothesis C(s−r) ≥ 0 is recorded,
 * not enforced, so counterexample hunts outside it stay possible. */
inline Conjecture2Result conjecture2_scan(const std::vector<Rational> &P_roots,
                                          const Rational &leading, const Rational &C, int s, int r,
                                          int m_max) {
    if (s < 0) throw validation_error("conjecture2_scan: s must be >= 0");
    if (r < 1) throw validation_error("conjecture2_scan: r must be >= 1");
    for (const auto &t : P_roots)
        if (t <= 0) throw validation_error("conjecture2_scan: P roots must be positive");
    if (leading <= 0) throw validation_error("conjecture2_scan: leading must be positive");
    ExactPolynomial P = poly_from_roots(P_roots, leading);
    std::vector<Rational> den = P.coeffs;
    if ((int)den.size() < s + 1) den.resize((size_t)s + 1, Rational(0));
    den[(size_t)s] += C;
    bool hypothesis = sign(C) * (s - r) >= 0;
    return conjecture2_scan_core(den, r, m_max, hypothesis);
}

}  // namespace hyperzero
