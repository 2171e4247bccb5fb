#pragma once

/* Dense univariate polynomials over an arbitrary coefficient ring.
 *
 * Representation: coefficients[i] multiplies x^i; the vector carries no
 * trailing zero (normalize() enforces it), so degree() == size()-1 and the
 * zero polynomial has an empty vector with degree() == -1.
 *
 * The same template serves the exact layer (Rational coefficients) and the
 * float layer (complex<double>).  Zero-testing is ring-specific: exact
 * equality for rationals, a 1e-300 magnitude floor for doubles so that
 * underflow noise cannot masquerade as a leading coefficient.
 */

#include <algorithm>
#include <complex>
#include <vector>

#include "hyperzero/rational.hpp"

namespace hyperzero {

namespace detail {

inline bool coeff_is_zero(const Rational &c) { return c == 0; }
inline bool coeff_is_zero(const Integer &c) { return c == 0; }
inline bool coeff_is_zero(const std::complex<double> &c) { return std::abs(c) <= 1e-300; }
inline bool coeff_is_zero(double c) { return std::abs(c) <= 1e-300; }

}  // namespace detail

template <typename T>
struct polynomial {
    std::vector<T> coeffs;  // coeffs[i] * x^i, no trailing zero

    polynomial() = default;
    explicit polynomial(std::vector<T> c) : coeffs(std::move(c)) { normalize(); }

    static polynomial zero() { return polynomial(); }
    static polynomial constant(T c) { return polynomial(std::vector<T>{std::move(c)}); }

    int degree() const { return (int)coeffs.size() - 1; }
    bool is_zero() const { return coeffs.empty(); }

    const T &leading() const { return coeffs.back(); }

    const T &operator[](size_t i) const { return coeffs[i]; }

    void normalize() {
        while (!coeffs.empty() && detail::coeff_is_zero(coeffs.back())) coeffs.pop_back();
    }

    polynomial &operator+=(const polynomial &o) {
        if (o.coeffs.size() > coeffs.size()) coeffs.resize(o.coeffs.size(), T(0));
        for (size_t i = 0; i < o.coeffs.size(); i++) coeffs[i] += o.coeffs[i];
        normalize();
        return *this;
    }
    polynomial &operator-=(const polynomial &o) {
        if (o.coeffs.size() > coeffs.size()) coeffs.resize(o.coeffs.size(), T(0));
        for (size_t i = 0; i < o.coeffs.size(); i++) coeffs[i] -= o.coeffs[i];
        normalize();
        return *this;
    }
    friend polynomial operator+(polynomial a, const polynomial &b) { return a += b; }
    friend polynomial operator-(polynomial a, const polynomial &b) { return a -= b; }

    friend polynomial operator*(const polynomial &a, const polynomial &b) {
        if (a.is_zero() || b.is_zero()) return zero();
        std::vector<T> c(a.coeffs.size() + b.coeffs.size() - 1, T(0));
        for (size_t i = 0; i < a.coeffs.size(); i++)
            for (size_t j = 0; j < b.coeffs.size(); j++) c[i + j] += a.coeffs[i] * b.coeffs[j];
        return polynomial(std::move(c));
    }

    polynomial &operator*=(const T &s) {
        for (auto &c : coeffs) c *= s;
        normalize();
        return *this;
    }
    friend polynomial operator*(polynomial a, const T &s) { return a *= s; }

    polynomial operator-() const {
        polynomial out(*this);
        for (auto &c : out.coeffs) c = -c;
        return out;
    }

    friend bool operator==(const polynomial &a, const polynomial &b) {
        return a.coeffs == b.coeffs;
    }

    polynomial derivative() const {
        if (coeffs.size() <= 1) return zero();
        std::vector<T> d(coeffs.size() - 1);
        for (size_t i = 1; i < coeffs.size(); i++) d[i - 1] = coeffs[i] * T((long)i);
        return polynomial(std::move(d));
    }

    /* Horner evaluation; the point type may widen the coefficient type
     * (rational poly at a rational point, real poly at a complex point). */
    template <typename U>
    U eval(const U &x) const {
        U acc(0);
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + U(coeffs[i]);
        return acc;
    }

    /* p(x) * x^k */
    polynomial shifted_up(int k) const {
        if (is_zero()) return zero();
        std::vector<T> c(coeffs.size() + k, T(0));
        std::copy(coeffs.begin(), coeffs.end(), c.begin() + k);
        return polynomial(std::move(c));
    }
};

using ExactPolynomial = polynomial<Rational>;
using FloatPolynomial = polynomial<std::complex<double>>;

/* leading * prod_k (roots[k] - x).  Note the factor convention: the roots
 * appear with positive sign and x negated, so the constant term is
 * leading * prod(roots) and the degree-n coefficient is leading * (-1)^n. */
inline ExactPolynomial poly_from_roots(const std::vector<Rational> &roots,
                                       const Rational &leading) {
    ExactPolynomial p = ExactPolynomial::constant(leading);
    for (const auto &r : roots) {
        ExactPolynomial factor(std::vector<Rational>{r, Rational(-1)});
        p = p * factor;
    }
    return p;
}

/* Cast with per-coefficient rounding; intended for well-scaled inputs. */
inline FloatPolynomial to_float(const ExactPolynomial &p) {
    std::vector<std::complex<double>> c(p.coeffs.size());
    for (size_t i = 0; i < c.size(); i++) c[i] = to_double(p.coeffs[i]);
    return FloatPolynomial(std::move(c));
}

/* Cast after scaling by 2^-e with e chosen so the largest coefficient has
 * magnitude near 1.  Scaling by a power of two preserves roots exactly and
 * keeps huge exact coefficients inside double range. */
inline FloatPolynomial to_float_scaled(const ExactPolynomial &p) {
    if (p.is_zero()) return FloatPolynomial();
    double maxlog = -std::numeric_limits<double>::infinity();
    for (const auto &c : p.coeffs)
        if (c != 0) maxlog = std::max(maxlog, log2_abs(c));
    long shift = (long)maxlog;
    std::vector<std::complex<double>> c(p.coeffs.size());
    for (size_t i = 0; i < c.size(); i++) {
        if (p.coeffs[i] == 0) { c[i] = 0.0; continue; }
        Rational scaled = p.coeffs[i];
        if (shift >= 0)
            mpq_div_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), (unsigned long)shift);
        else
            mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), (unsigned long)(-shift));
        c[i] = to_double(scaled);
    }
    return FloatPolynomial(std::move(c));
}

}  // namespace hyperzero
