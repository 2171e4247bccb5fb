#pragma once

/* Exact scalar types and parsing/formatting helpers.
 *
 * All exact arithmetic in the library runs on GMP rationals.  mpq_class
 * keeps values in canonical form (reduced, positive denominator), which is
 * also the serialization contract: "p/q" with gcd(p,q)=1, q>0, and plain
 * "p" when q=1.
 */

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperzero {

using Rational = mpq_class;
using Integer = mpz_class;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string to_string(const Rational &q) {
    return q.get_str();  // canonical "p/q" or "p"
}

inline std::string to_string(const Integer &z) {
    return z.get_str();
}

/* Accepts an optional sign, digits, and an optional "/digits" part, with
 * surrounding whitespace ignored.  Anything else (empty string, zero
 * denominator, inner garbage) is a parse_error.  The result is
 * canonicalized. */
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] {
        throw parse_error("invalid rational literal: '" + std::string(text) + "'");
    };
    while (!text.empty() && std::isspace((unsigned char)text.front())) text.remove_prefix(1);
    while (!text.empty() && std::isspace((unsigned char)text.back())) text.remove_suffix(1);
    if (text.empty()) fail();
    size_t i = 0;
    auto scan_digits = [&](size_t start) {
        size_t j = start;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) j++;
        size_t digits_begin = j;
        while (j < text.size() && text[j] >= '0' && text[j] <= '9') j++;
        if (j == digits_begin) fail();
        return j;
    };
    i = scan_digits(0);
    size_t slash = std::string_view::npos;
    if (i < text.size()) {
        if (text[i] != '/') fail();
        slash = i;
        i = scan_digits(i + 1);
        if (i != text.size()) fail();
    }
    Rational q;
    if (slash == std::string_view::npos) {
        q = Rational(Integer(std::string(text), 10));
    } else {
        Integer num(std::string(text.substr(0, slash)), 10);
        Integer den(std::string(text.substr(slash + 1)), 10);
        if (den == 0) throw parse_error("zero denominator in '" + std::string(text) + "'");
        q = Rational(num, den);
    }
    q.canonicalize();
    return q;
}

/* Exact conversion: every finite double is a dyadic rational. */
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x))
        throw validation_error("rational_from_double: value is not finite");
    Rational q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

inline double to_double(const Rational &q) { return q.get_d(); }

inline int sign(const Rational &q) { return sgn(q); }
inline int sign(const Integer &z) { return sgn(z); }

inline Rational rational_pow(Rational base, unsigned long e) {
    Rational out(1);
    while (e) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

/* log2 of |q| with a few ulps of slack; exact -inf is mapped to the most
 * negative double.  Used when a value's magnitude overflows double range
 * but its size is still needed (sign-and-magnitude evaluations). */
inline double log2_abs(const Rational &q) {
    if (q == 0) return -std::numeric_limits<double>::infinity();
    long nexp, dexp;
    double nd = mpz_get_d_2exp(&nexp, q.get_num().get_mpz_t());
    double dd = mpz_get_d_2exp(&dexp, q.get_den().get_mpz_t());
    return (std::log2(std::fabs(nd)) + (double)nexp) - (std::log2(std::fabs(dd)) + (double)dexp);
}

}  // namespace hyperzero
