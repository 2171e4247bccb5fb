#pragma once

/* Problem instance: a polynomial P with all roots real, positive, and
 * given exactly, plus the shift exponent r.  P is represented as
 *     P(t) = leading * prod_k (tau_k - t),   leading > 0,
 * so P(0) > 0 automatically.  The pair must satisfy max(deg P, r) > 1.
 */

#include <algorithm>
#include <vector>

#include "hyperzero/polynomial.hpp"

namespace hyperzero {

struct ProblemInstance {
    std::vector<Rational> roots;  // sorted ascending, all > 0
    Rational leading;             // > 0
    int r = 1;
    int n = 0;    // deg P = roots.size()
    int rho = 1;  // multiplicity of the smallest root
    ExactPolynomial P;            // expanded coefficients a_0..a_n
};

inline ProblemInstance make_instance(std::vector<Rational> roots, Rational leading, int r) {
    if (roots.empty()) throw validation_error("instance: need at least one root");
    for (const auto &t : roots)
        if (t <= 0) throw validation_error("instance: all roots must be positive");
    if (leading <= 0) throw validation_error("instance: leading factor must be positive");
    if (r < 1) throw validation_error("instance: r must be a positive integer");
    int n = (int)roots.size();
    if (n <= 1 && r <= 1)
        throw validation_error("instance: hypothesis max(deg P, r) > 1 violated (deg P = 1, r = 1)");
    std::sort(roots.begin(), roots.end());
    int rho = 1;
    while (rho < n && roots[rho] == roots[0]) rho++;
    ProblemInstance inst;
    inst.P = poly_from_roots(roots, leading);
    inst.roots = std::move(roots);
    inst.leading = std::move(leading);
    inst.r = r;
    inst.n = n;
    inst.rho = rho;
    return inst;
}

}  // namespace hyperzero
