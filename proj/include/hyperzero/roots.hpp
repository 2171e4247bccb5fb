#pragma once

/* Simultaneous complex root finding (Aberth-Ehrlich iteration) for
 * double-precision polynomials.  Deterministic: fixed initial configuration,
 * fixed update order, lexicographic output ordering.
 *
 * Callers with exact coefficients too large for doubles should convert via
 * to_float_scaled(), which preserves roots.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "hyperzero/polynomial.hpp"

namespace hyperzero {

namespace detail {

inline std::complex<double> horner(const std::vector<std::complex<double>> &c,
                                   std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

/* sum_i |c_i| |z|^i — the natural scale for a backward-error stopping rule */
inline double horner_mag(const std::vector<std::complex<double>> &c, double az) {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * az + std::abs(c[i]);
    return acc;
}

}  // namespace detail

/* All complex roots of p (degree >= 0), repeated per multiplicity, sorted
 * lexicographically by (re, im).  Convergence criterion is backward error:
 * |p(z)| <= tol * sum_i |c_i||z|^i at every root.  Throws numeric_error if
 * the iteration cap is reached without convergence. */
inline std::vector<std::complex<double>> complex_roots(const FloatPolynomial &p,
                                                       double tol = 1e-13,
                                                       int max_iter = 500) {
    if (p.is_zero()) throw validation_error("complex_roots: zero polynomial");
    std::vector<std::complex<double>> c = p.coeffs;

    /* drop leading coefficients that are negligible relative to the largest */
    double maxmag = 0.0;
    for (const auto &x : c) maxmag = std::max(maxmag, std::abs(x));
    if (!(maxmag > 0.0) || !std::isfinite(maxmag))
        throw validation_error("complex_roots: coefficients must be finite and not all ~0");
    while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * maxmag) c.pop_back();

    std::vector<std::complex<double>> roots;

    /* exact zero roots: strip trailing zero coefficients */
    size_t nz = 0;
    while (nz < c.size() - 1 && std::abs(c[nz]) == 0.0) nz++;
    for (size_t i = 0; i < nz; i++) roots.push_back({0.0, 0.0});
    if (nz) c.erase(c.begin(), c.begin() + nz);

    int d = (int)c.size() - 1;
    if (d >= 1) {
        std::vector<std::complex<double>> z(d);
        double cauchy = 0.0;
        for (int i = 0; i < d; i++) cauchy = std::max(cauchy, std::abs(c[i] / c[d]));
        cauchy += 1.0;
        double r0 = std::pow(std::abs(c[0] / c[d]), 1.0 / d);
        r0 = std::min(std::max(r0, 1e-3), cauchy);
        const double pi = 3.14159265358979323846;
        for (int k = 0; k < d; k++) {
            double ang = 2.0 * pi * k / d + 0.4;
            z[k] = std::polar(r0, ang);
        }

        std::vector<std::complex<double>> dc(d);
        for (int i = 1; i <= d; i++) dc[i - 1] = c[i] * (double)i;

        bool converged = (d == 0);
        for (int iter = 0; iter < max_iter && !converged; iter++) {
            double max_step = 0.0;
            for (int k = 0; k < d; k++) {
                std::complex<double> pv = detail::horner(c, z[k]);
                std::complex<double> dv = detail::horner(dc, z[k]);
                if (std::abs(dv) == 0.0) {
                    z[k] += std::complex<double>(1e-8 * (1.0 + std::abs(z[k])), 1e-8);
                    max_step = 1.0;
                    continue;
                }
                std::complex<double> w = pv / dv;
                std::complex<double> s = 0.0;
                for (int j = 0; j < d; j++) {
                    if (j == k) continue;
                    std::complex<double> diff = z[k] - z[j];
                    if (std::abs(diff) == 0.0) diff = {1e-12, 1e-12};
                    s += 1.0 / diff;
                }
                std::complex<double> denom = 1.0 - w * s;
                std::complex<double> corr = (std::abs(denom) == 0.0) ? w : w / denom;
                z[k] -= corr;
                max_step = std::max(max_step, std::abs(corr) / (1.0 + std::abs(z[k])));
            }
            converged = true;
            for (int k = 0; k < d && converged; k++) {
                double scale = detail::horner_mag(c, std::abs(z[k]));
                if (std::abs(detail::horner(c, z[k])) > tol * scale) converged = false;
            }
            if (!converged && max_step < 1e-16) {
                /* stagnated: accept only if backward error is merely loose */
                for (int k = 0; k < d; k++) {
                    double scale = detail::horner_mag(c, std::abs(z[k]));
                    if (std::abs(detail::horner(c, z[k])) > 1e3 * tol * scale)
                        throw numeric_error("complex_roots: iteration stagnated");
                }
                converged = true;
            }
        }
        if (!converged) throw numeric_error("complex_roots: did not converge");
        roots.insert(roots.end(), z.begin(), z.end());
    }

    std::sort(roots.begin(), roots.end(), [](const auto &a, const auto &b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

}  // namespace hyperzero
