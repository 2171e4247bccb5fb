#pragma once

/* Angle parametrization of real z-values.
 *
 * For θ ∈ (0, π/r) there is (per branch l) a unique tuple (θ_1..θ_n, τ) with
 *     θ_k ∈ (θ, π),   τ_k sinθ_k = τ sin(θ_k − θ),   Σθ_k = rθ + lπ,
 * which makes t_0 = τe^{−iθ} a root of P(t) + z t^r for the real value
 * z = −P(t_0)/t_0^r.  The default branch l = n−1 sweeps z monotonically
 * across the whole critical interval (a, b) as θ runs over (0, π/r).
 *
 * Root-side apparatus: the denominator P(t) + z t^r has exactly the two
 * roots τe^{±iθ} on the circle |t| = τ; the rescaled roots ζ_k = t_k/τ
 * (the other max{n,r} − 2 of them strictly outside the unit disk) are the
 * roots of
 *     Q(ζ) = ∏_j (sin(θ_j−θ)/sinθ − ζ sinθ_j/sinθ) + ζ^r,
 * and the oscillating kernel
 *     H(θ; m) = Σ_k 1/(ζ_k^{m+1} Q′(ζ_k))
 * vanishes exactly at the θ whose z(θ) is a root of H_m.  Near ζ-collisions
 * (θ → 0 or π/r) the direct sum is ill-conditioned and is replaced by the
 * exact continuation −z·τ^{m+r}·H_m(z(θ)) evaluated in rational arithmetic
 * (sign calibrated empirically once per instance; the calibration result is
 * reported, not assumed). */

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "hyperzero/genseq.hpp"
#include "hyperzero/parallel.hpp"
#include "hyperzero/roots.hpp"

namespace hyperzero {

struct ThetaSolution {
    ProblemInstance instance;
    double theta = 0;             // in (0, π/r)
    int l = 0;                    // branch, in [0, n)
    std::vector<double> angles;   // θ_1..θ_n, each in (θ, π)
    double tau = 0;               // > 0
    double z = 0;                 // −P(t_0)/t_0^r at t_0 = τe^{−iθ}, real
    double residual = 0;          // final Newton residual (max norm)
};

struct SpectralFrame {
    ThetaSolution solution;
    std::complex<double> t0;                  // τe^{−iθ}
    std::vector<std::complex<double>> zetas;  // ζ_0 = e^{−iθ}, ζ_1 = e^{iθ}, rest |ζ| > 1
    double c = 0;                             // leading coefficient of P(t) + z t^r
    std::vector<std::complex<double>> qprimes;
};

/* Real normalization of S(τ) = P(τe^{iθ}) − e^{2irθ}P(τe^{−iθ}): since
 * e^{ikθ} − e^{i(2r−k)θ} = 2i e^{irθ} sin((k−r)θ), dividing S by the nonzero
 * constant 2i e^{irθ} leaves the real-coefficient polynomial
 *     Σ_k a_k sin((k−r)θ) τ^k
 * with the same roots (all real and distinct for admissible θ). */
inline FloatPolynomial s_polynomial(const ProblemInstance &inst, double theta) {
    if (std::abs(std::remainder(theta, std::numbers::pi)) < 1e-12)
        throw validation_error("s_polynomial: theta congruent to 0 mod pi is degenerate");
    std::vector<std::complex<double>> coeffs(inst.P.coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        coeffs[k] = to_double(inst.P.coeffs[k]) * std::sin(((double)k - inst.r) * theta);
    return FloatPolynomial(std::move(coeffs));
}

namespace detail {

inline std::complex<double> cpow_int(std::complex<double> b, int e) {
    std::complex<double> acc{1.0, 0.0};
    for (; e > 0; e >>= 1) {
        if (e & 1) acc *= b;
        b *= b;
    }
    return acc;
}

/* Angles induced by a candidate τ: θ_k = π − arg(τ_k − τe^{−iθ}) ∈ (0, π)
 * (the argument lies in (0, π) because Im(τ_k − τe^{−iθ}) = τ sinθ > 0). */
inline std::vector<double> induced_angles(const ProblemInstance &inst, double theta, double tau) {
    std::complex<double> t = tau * std::exp(std::complex<double>(0.0, -theta));
    std::vector<double> th(inst.roots.size());
    for (std::size_t k = 0; k < th.size(); ++k)
        th[k] = std::numbers::pi - std::arg(std::complex<double>(to_double(inst.roots[k]), 0.0) - t);
    return th;
}

/* Newton on f_k = τ_k sinθ_k / sin(θ_k − θ) − τ (k = 1..n) and
 * f_{n+1} = Σθ_k − rθ − lπ.  The Jacobian is diagonal in the θ_k with
 * entries c_k = −τ_k sinθ / sin²(θ_k − θ) plus a τ border, so each step is a
 * closed-form bordered solve.  Steps are damped to keep θ_k ∈ (θ, π), τ > 0.
 * Returns nullopt on non-convergence or when z comes out non-real. */
inline std::optional<ThetaSolution> newton_polish(const ProblemInstance &inst, double theta, int l,
                                                  std::vector<double> th, double tau) {
    const int n = inst.n;
    const double pi = std::numbers::pi;
    std::vector<double> taus(n);
    for (int k = 0; k < n; ++k) taus[k] = to_double(inst.roots[k]);

    for (double &a : th) a = std::clamp(a, theta + 1e-12, pi - 1e-12);
    if (!(tau > 0)) return std::nullopt;

    std::vector<double> f(n);
    double flast = 0, res = std::numeric_limits<double>::infinity();
    auto compute_residual = [&]() {
        res = 0;
        for (int k = 0; k < n; ++k) {
            f[k] = taus[k] * std::sin(th[k]) / std::sin(th[k] - theta) - tau;
            res = std::max(res, std::abs(f[k]));
        }
        flast = -inst.r * theta - l * pi;
        for (int k = 0; k < n; ++k) flast += th[k];
        res = std::max(res, std::abs(flast));
    };

    bool converged = false;
    for (int iter = 0; iter < 60; ++iter) {
        compute_residual();
        if (!std::isfinite(res)) return std::nullopt;
        if (res <= 1e-12 * (1 + std::abs(tau)) && std::abs(flast) <= 1e-12) {
            converged = true;
            break;
        }
        double s_fc = 0, s_c = 0;
        std::vector<double> c(n);
        for (int k = 0; k < n; ++k) {
            double s = std::sin(th[k] - theta);
            c[k] = -taus[k] * std::sin(theta) / (s * s);
            s_fc += f[k] / c[k];
            s_c += 1.0 / c[k];
        }
        if (!std::isfinite(s_fc) || !std::isfinite(s_c) || s_c == 0) return std::nullopt;
        double dtau = (s_fc - flast) / s_c;
        std::vector<double> dth(n);
        for (int k = 0; k < n; ++k) dth[k] = (dtau - f[k]) / c[k];

        double lambda = 1.0;
        bool feasible = false;
        for (int halving = 0; halving < 60; ++halving) {
            feasible = tau + lambda * dtau > 0;
            for (int k = 0; feasible && k < n; ++k) {
                double nth = th[k] + lambda * dth[k];
                feasible = nth > theta && nth < pi;
            }
            if (feasible) break;
            lambda *= 0.5;
        }
        if (!feasible) return std::nullopt;
        tau += lambda * dtau;
        for (int k = 0; k < n; ++k) th[k] += lambda * dth[k];
    }
    if (!converged) {
        compute_residual();
        if (!(res <= 1e-12 * (1 + std::abs(tau)) && std::abs(flast) <= 1e-12)) return std::nullopt;
    }

    std::complex<double> t0 = tau * std::exp(std::complex<double>(0.0, -theta));
    std::complex<double> zc = -to_float(inst.P).eval(t0) / cpow_int(t0, inst.r);
    if (!(std::abs(zc.imag()) <= 1e-9 * (1 + std::abs(zc)))) return std::nullopt;

    ThetaSolution sol;
    sol.instance = inst;
    sol.theta = theta;
    sol.l = l;
    sol.angles = std::move(th);
    sol.tau = tau;
    sol.z = zc.real();
    sol.residual = res;
    return sol;
}

}  // namespace detail

/* Solve for the angle tuple at branch l (default n−1).  Seeds from the real
 * positive roots of s_polynomial, selecting the root whose induced angle sum
 * matches rθ + lπ, then polishes by Newton. */
inline ThetaSolution solve_theta(const ProblemInstance &inst, double theta, int l = -1) {
    const double pi = std::numbers::pi;
    if (l < 0) l = inst.n - 1;
    if (!(theta > 0 && theta < pi / inst.r))
        throw validation_error("solve_theta: theta must lie in (0, pi/r)");
    if (l >= inst.n) throw validation_error("solve_theta: branch index must lie in [0, deg P)");

    FloatPolynomial S = s_polynomial(inst, theta);
    std::vector<std::complex<double>> sroots = complex_roots(S);
    for (const auto &w : sroots)
        if (!(std::abs(w.imag()) <= 1e-7 * std::abs(w)))
            throw numeric_error("solve_theta: seed polynomial produced a non-real root");

    std::vector<int> available;
    for (const auto &w : sroots) {
        double taustar = w.real();
        if (!(taustar > 0)) continue;
        std::vector<double> th = detail::induced_angles(inst, theta, taustar);
        double sum = 0;
        for (double a : th) sum += a;
        double excess = sum - inst.r * theta;
        long lhat = std::lround(excess / pi);
        if (std::abs(excess - (double)lhat * pi) > 1e-6) continue;
        available.push_back((int)lhat);
        if ((int)lhat != l) continue;
        if (auto sol = detail::newton_polish(inst, theta, l, std::move(th), taustar)) return *sol;
        std::ostringstream msg;
        msg << "solve_theta: Newton failed to converge at theta=" << theta << ", branch l=" << l
            << " (seed tau=" << taustar << ")";
        throw numeric_error(msg.str());
    }
    std::ostringstream msg;
    msg << "solve_theta: branch l=" << l << " unavailable at theta=" << theta << " (available:";
    if (available.empty()) msg << " none";
    for (int a : available) msg << ' ' << a;
    msg << ")";
    throw numeric_error(msg.str());
}

/* Continuation step for grid sweeps: warm-start Newton from a neighboring
 * solution on the same branch; fall back to fresh seeding. */
inline ThetaSolution solve_theta_warm(const ProblemInstance &inst, double theta,
                                      const ThetaSolution &prev) {
    if (theta > 0 && theta < std::numbers::pi / inst.r)
        if (auto sol = detail::newton_polish(inst, theta, prev.l, prev.angles, prev.tau))
            return *sol;
    return solve_theta(inst, theta, prev.l);
}

inline double z_of_theta(const ProblemInstance &inst, double theta) {
    return solve_theta(inst, theta).z;
}

/* A(θ) = r − Σ_k sinθ_k cos(θ_k−θ)/sinθ and B(θ) = Σ_k sinθ_k sin(θ_k−θ)/sinθ,
 * the coefficients of the leading oscillation cos((m+r)θ), sin((m+r)θ) in
 * H(θ; m). */
inline std::pair<double, double> a_b_functions(const ThetaSolution &sol) {
    double s = std::sin(sol.theta);
    double A = sol.instance.r, B = 0;
    for (double th : sol.angles) {
        A -= std::sin(th) * std::cos(th - sol.theta) / s;
        B += std::sin(th) * std::sin(th - sol.theta) / s;
    }
    return {A, B};
}

/* Q(ζ) = ∏_j (sin(θ_j−θ)/sinθ − ζ sinθ_j/sinθ) + ζ^r, real coefficients,
 * degree max{n, r}; e^{±iθ} are roots by construction. */
inline FloatPolynomial q_polynomial(const ThetaSolution &sol) {
    double s = std::sin(sol.theta);
    FloatPolynomial q = FloatPolynomial::constant(1.0);
    for (double th : sol.angles) {
        FloatPolynomial factor({std::sin(th - sol.theta) / s, -std::sin(th) / s});
        q = q * factor;
    }
    std::vector<std::complex<double>> coeffs = q.coeffs;
    if ((int)coeffs.size() < sol.instance.r + 1) coeffs.resize(sol.instance.r + 1, 0.0);
    coeffs[sol.instance.r] += 1.0;
    return FloatPolynomial(std::move(coeffs));
}

/* All roots of the denominator P(t) + z t^r, rescaled by τ and reordered so
 * ζ_0 = e^{−iθ}, ζ_1 = e^{iθ} (snapped after verification); the remaining
 * ζ_k sorted by (Re, Im).  Errors if the root count or the on-circle pair
 * does not match the theory. */
inline SpectralFrame denominator_roots(const ThetaSolution &sol) {
    const ProblemInstance &inst = sol.instance;
    const int deg = std::max(inst.n, inst.r);
    std::vector<std::complex<double>> dcoeffs(std::max<std::size_t>(inst.P.coeffs.size(), deg + 1),
                                              0.0);
    for (std::size_t i = 0; i < inst.P.coeffs.size(); ++i) dcoeffs[i] = to_double(inst.P.coeffs[i]);
    dcoeffs[inst.r] += sol.z;
    FloatPolynomial D(dcoeffs);
    if (D.degree() != deg)
        throw numeric_error("denominator_roots: leading coefficient of P + z t^r vanished");

    std::vector<std::complex<double>> ts = complex_roots(D);
    if ((int)ts.size() != deg) throw numeric_error("denominator_roots: root count mismatch");

    std::complex<double> t0 = sol.tau * std::exp(std::complex<double>(0.0, -sol.theta));
    std::vector<std::complex<double>> inside, outside;
    for (const auto &t : ts) {
        if (std::abs(t) <= sol.tau * (1 + 1e-9))
            inside.push_back(t);
        else
            outside.push_back(t);
    }
    if (inside.size() != 2)
        throw numeric_error("denominator_roots: expected exactly two roots on the circle |t| = tau");
    if (inside[0].imag() > inside[1].imag()) std::swap(inside[0], inside[1]);
    double tol = 1e-6 * std::max(1.0, sol.tau);
    if (std::abs(inside[0] - t0) > tol || std::abs(inside[1] - std::conj(t0)) > tol)
        throw numeric_error("denominator_roots: on-circle roots do not match tau*exp(-i theta)");

    SpectralFrame fr;
    fr.solution = sol;
    fr.t0 = t0;
    fr.zetas.reserve(deg);
    fr.zetas.push_back(std::exp(std::complex<double>(0.0, -sol.theta)));
    fr.zetas.push_back(std::exp(std::complex<double>(0.0, sol.theta)));
    for (const auto &t : outside) fr.zetas.push_back(t / sol.tau);

    fr.c = D.coeffs.back().real();

    /* Q′(ζ) at a root ζ of Q: since ∏_j(α_j − β_j ζ) = −ζ^r there,
     * Q′(ζ) = ζ^r Σ_j sinθ_j / (sin(θ_j−θ) − ζ sinθ_j) + r ζ^{r−1}. */
    fr.qprimes.reserve(deg);
    for (const auto &zeta : fr.zetas) {
        std::complex<double> acc = 0;
        for (double th : sol.angles)
            acc += std::sin(th) / (std::sin(th - sol.theta) - zeta * std::sin(th));
        std::complex<double> qp =
            detail::cpow_int(zeta, inst.r) * acc +
            (double)inst.r * detail::cpow_int(zeta, inst.r - 1);
        fr.qprimes.push_back(qp);
    }
    return fr;
}

/* One H(θ; m) evaluation together with its natural magnitude scale
 * Σ_k |term_k| (used to decide whether a computed value is a genuine zero or
 * just cancellation noise). */
struct HEval {
    double value = 0;
    double scale = 0;
};

/* Direct partial-fraction sum Σ_k 1/(ζ_k^{m+1} Q′(ζ_k)), evaluated in
 * log-space so the outside-disk terms underflow gracefully.  Returns nullopt
 * when roots are too close (ζ-collision regime) or the result fails the
 * realness check. */
inline std::optional<HEval> h_theta_direct_eval(const SpectralFrame &fr, int m) {
    for (std::size_t i = 0; i < fr.zetas.size(); ++i)
        for (std::size_t j = i + 1; j < fr.zetas.size(); ++j)
            if (std::abs(fr.zetas[i] - fr.zetas[j]) <= 1e-6) return std::nullopt;
    std::complex<double> H = 0;
    double scale = 0;
    for (std::size_t k = 0; k < fr.zetas.size(); ++k) {
        std::complex<double> term =
            std::exp(-(double)(m + 1) * std::log(fr.zetas[k]) - std::log(fr.qprimes[k]));
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) return std::nullopt;
        H += term;
        scale += std::abs(term);
    }
    if (!(std::abs(H.imag()) <= 1e-8 * (std::abs(H) + 1))) return std::nullopt;
    return HEval{H.real(), scale};
}

inline std::optional<double> h_theta_direct(const ThetaSolution &sol, int m) {
    try {
        SpectralFrame fr = denominator_roots(sol);
        if (auto v = h_theta_direct_eval(fr, m)) return v->value;
    } catch (const numeric_error &) {
    }
    return std::nullopt;
}

/* Analytic-continuation value −z · τ^{m+r} · H_m(z(θ)), computed in sign +
 * log2-magnitude space with H_m evaluated exactly at a rational approximant
 * of z(θ).
 *
 * The prefactor follows from the denominator/Q correspondence: with
 * D(t) = P(t) + z t^r and ζ = t/τ, the root identity τ_j sinθ_j =
 * τ sin(θ_j−θ) gives α_j = β_j τ_j / τ, hence ∏(α_j − β_j ζ) =
 * (∏β_j) τ^{−n} P(τζ) / leading and D(τζ) = z τ^r Q(ζ).  Partial fractions
 * of 1/D then yield Σ_k 1/(ζ_k^{m+1} Q′(ζ_k)) = −z τ^{m+r} H_m(z) for every
 * n, r.  The overall sign convention is still calibrated against the direct
 * sum by HThetaEvaluator as a cross-check. */
inline double h_theta_fallback(const ThetaSolution &sol, int m, const GeneratedSequence &seq) {
    const ProblemInstance &inst = sol.instance;
    Rational zhat = rational_from_double(sol.z);
    Rational Hm = seq.at(m).eval(zhat);
    int s = sign(Hm);
    if (s == 0 || sol.z == 0) return 0.0;
    double sgn = (sol.z > 0 ? -1.0 : 1.0) * s;
    double lg =
        std::log2(std::abs(sol.z)) + (double)(m + inst.r) * std::log2(sol.tau) + log2_abs(Hm);
    lg = std::clamp(lg, -1020.0, 1020.0);
    return sgn * std::exp2(lg);
}

inline double h_theta(const ThetaSolution &sol, int m) {
    if (m < 0) throw validation_error("h_theta: m must be >= 0");
    if (auto v = h_theta_direct(sol, m)) return *v;
    GeneratedSequence seq = generate(sol.instance, m);
    return h_theta_fallback(sol, m, seq);
}

/* Caches the exact sequence once and serves calibrated H(θ; m) values: the
 * direct sum where it is well-conditioned, otherwise the continuation
 * fallback multiplied by the empirically determined sign. */
class HThetaEvaluator {
  public:
    HThetaEvaluator(const ProblemInstance &inst, int m_max)
        : inst_(inst), seq_(generate(inst, m_max)) {
        calibrate();
    }

    explicit HThetaEvaluator(GeneratedSequence seq)
        : inst_(seq.instance), seq_(std::move(seq)) {
        calibrate();
    }

    HEval evaluate_scaled(const ThetaSolution &sol, int m) const {
        try {
            SpectralFrame fr = denominator_roots(sol);
            if (auto v = h_theta_direct_eval(fr, m)) return *v;
        } catch (const numeric_error &) {
        }
        double v = sign_ * h_theta_fallback(sol, m, seq_);
        return HEval{v, std::abs(v)};
    }

    double evaluate(const ThetaSolution &sol, int m) const { return evaluate_scaled(sol, m).value; }

    int calibration_sign() const { return sign_; }
    const std::string &calibration_note() const { return note_; }
    const GeneratedSequence &sequence() const { return seq_; }
    const ProblemInstance &instance() const { return inst_; }

  private:
    void calibrate() {
        const double pi_r = std::numbers::pi / inst_.r;
        for (double frac : {0.37, 0.49, 0.61}) {
            double theta = frac * pi_r;
            ThetaSolution sol;
            try {
                sol = solve_theta(inst_, theta);
            } catch (const numeric_error &) {
                continue;
            }
            for (int m : {std::min(seq_.m_max(), 9), std::min(seq_.m_max(), 17)}) {
                auto direct = h_theta_direct(sol, m);
                if (!direct || std::abs(*direct) < 1e-250) continue;
                double fb = h_theta_fallback(sol, m, seq_);
                if (fb == 0) continue;
                sign_ = ((*direct > 0) == (fb > 0)) ? 1 : -1;
                std::ostringstream note;
                note << "h_sign_calibration=" << (sign_ > 0 ? "+1" : "-1") << " (theta=" << theta
                     << ", m=" << m << ")";
                note_ = note.str();
                return;
            }
        }
        sign_ = 1;
        note_ = "h_sign_calibration=+1 (default; no calibration point available)";
    }

    ProblemInstance inst_;
    GeneratedSequence seq_;
    int sign_ = 1;
    std::string note_;
};

struct ThetaGridRow {
    double theta = 0, tau = 0, z = 0, A = 0, B = 0;
    double min_excess = 0;  // min_{k>=2} |ζ_k| − 1; +inf when there is no k >= 2
    std::optional<double> h;
};

struct ThetaGrid {
    std::vector<ThetaGridRow> rows;
    std::optional<int> h_calibration;  // set when h values were requested
    std::string calibration_note;
};

/* Sweep θ over [theta_min, theta_max] with N points.  Every point is solved
 * independently (no warm chaining) so the output is bit-identical no matter
 * how the work is split across jobs. */
inline ThetaGrid theta_grid(const ProblemInstance &inst, int N, double theta_min, double theta_max,
                            int l = -1, std::optional<int> m = std::nullopt, int jobs_requested = 1) {
    if (N < 1) throw validation_error("theta_grid: need at least one point");
    if (!(theta_min > 0 && theta_max < std::numbers::pi / inst.r && theta_min <= theta_max))
        throw validation_error("theta_grid: range must satisfy 0 < min <= max < pi/r");

    std::optional<HThetaEvaluator> ev;
    ThetaGrid grid;
    if (m) {
        if (*m < 0) throw validation_error("theta_grid: m must be >= 0");
        ev.emplace(inst, *m);
        grid.h_calibration = ev->calibration_sign();
        grid.calibration_note = ev->calibration_note();
    }

    grid.rows.resize(N);
    unsigned jobs = resolve_jobs(jobs_requested);
    parallel_for_chunks((std::size_t)N, jobs, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            double theta = N == 1 ? theta_min
                                  : theta_min + (theta_max - theta_min) * (double)i / (N - 1);
            ThetaSolution sol = solve_theta(inst, theta, l);
            ThetaGridRow row;
            row.theta = theta;
            row.tau = sol.tau;
            row.z = sol.z;
            std::tie(row.A, row.B) = a_b_functions(sol);
            SpectralFrame fr = denominator_roots(sol);
            row.min_excess = std::numeric_limits<double>::infinity();
            for (std::size_t k = 2; k < fr.zetas.size(); ++k)
                row.min_excess = std::min(row.min_excess, std::abs(fr.zetas[k]) - 1);
            if (ev) row.h = ev->evaluate(sol, *m);
            grid.rows[i] = std::move(row);
        }
    });
    return grid;
}

}  // namespace hyperzero
