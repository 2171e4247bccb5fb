#pragma once

/* Exact generation of the polynomial sequence H_m(z) defined by
 *     sum_m H_m(z) t^m = 1 / (P(t) + z t^r).
 * Expanding and matching powers of t gives H_0 = 1/a_0 and, for m >= 1,
 *     H_m = -(1/a_0) * ( sum_{k=1}^{min(n,m)} a_k H_{m-k}
 *                        + [m >= r] z H_{m-r} ).
 * All arithmetic is exact rational; deg H_m <= floor(m/r) is enforced as an
 * internal invariant.
 */

#include <utility>
#include <vector>

#include "hyperzero/instance.hpp"

namespace hyperzero {

struct GeneratedSequence {
    ProblemInstance instance;
    std::vector<ExactPolynomial> H;  // H[m] for m = 0..m_max

    int m_max() const { return (int)H.size() - 1; }
    const ExactPolynomial &at(int m) const {
        if (m < 0 || m >= (int)H.size())
            throw validation_error("sequence index out of range");
        return H[(size_t)m];
    }
};

/* Core recurrence for an arbitrary denominator base(t) + z t^r with
 * base(0) != 0.  The same degree bound deg H_m <= floor(m/r) holds by
 * induction for any such base. */
inline std::vector<ExactPolynomial> generate_from_denominator(const std::vector<Rational> &base,
                                                              int r, int m_max) {
    if (m_max < 0) throw validation_error("generate: m_max must be >= 0");
    if (r < 1) throw validation_error("generate: r must be >= 1");
    if (base.empty() || base[0] == 0)
        throw validation_error("generate: denominator needs a nonzero constant term");
    const Rational &a0 = base[0];
    const int n = (int)base.size() - 1;

    std::vector<ExactPolynomial> H;
    H.reserve((size_t)m_max + 1);
    H.push_back(ExactPolynomial::constant(1 / a0));
    for (int m = 1; m <= m_max; m++) {
        ExactPolynomial acc;
        int kmax = std::min(n, m);
        for (int k = 1; k <= kmax; k++) {
            if (base[(size_t)k] == 0) continue;
            acc += H[(size_t)(m - k)] * base[(size_t)k];
        }
        if (m >= r) acc += H[(size_t)(m - r)].shifted_up(1);
        acc *= Rational(-1) / a0;
        if (acc.degree() > m / r)
            throw numeric_error("generate: degree bound floor(m/r) violated");
        H.push_back(std::move(acc));
    }
    return H;
}

inline GeneratedSequence generate(const ProblemInstance &inst, int m_max) {
    GeneratedSequence seq;
    seq.instance = inst;
    seq.H = generate_from_denominator(inst.P.coeffs, inst.r, m_max);
    return seq;
}

/* deg H_m for m = 0..m_max (degree of the zero polynomial reported as -1;
 * it never occurs for valid instances). */
inline std::vector<int> degree_profile(const GeneratedSequence &seq) {
    std::vector<int> d;
    d.reserve(seq.H.size());
    for (const auto &h : seq.H) d.push_back(h.degree());
    return d;
}

}  // namespace hyperzero
