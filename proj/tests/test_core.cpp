// Rational parsing, polynomial arithmetic, instance validation, and the
// generating recurrence, checked against hand-expanded low-order cases and
// the structural invariants of the sequence.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hyperzero/genseq.hpp"

using namespace hyperzero;

namespace {

ExactPolynomial poly(std::vector<long> c) {
    std::vector<Rational> r(c.begin(), c.end());
    return ExactPolynomial(std::move(r));
}

}  // namespace

TEST_CASE("rational parsing round-trips canonical forms") {
    CHECK(to_string(parse_rational("3/4")) == "3/4");
    CHECK(to_string(parse_rational("-7")) == "-7");
    CHECK(to_string(parse_rational("0")) == "0");
    CHECK(to_string(parse_rational("2/4")) == "1/2");
    CHECK(to_string(parse_rational(" -6/4 ")) == "-3/2");
    CHECK(parse_rational("10/5") == Rational(2));
    CHECK_THROWS_AS(parse_rational("1/0"), parse_error);
    CHECK_THROWS_AS(parse_rational("abc"), parse_error);
    CHECK_THROWS_AS(parse_rational(""), parse_error);
    CHECK_THROWS_AS(parse_rational("1.5"), parse_error);
}

TEST_CASE("rational_from_double is exact on representable values") {
    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(-3.25) == Rational(-13, 4));
    CHECK(to_double(rational_from_double(0.1)) == 0.1);
    CHECK_THROWS_AS(rational_from_double(std::numeric_limits<double>::infinity()),
                    validation_error);
}

TEST_CASE("log2_abs and rational_pow agree with direct computation") {
    CHECK(log2_abs(Rational(8)) == Catch::Approx(3.0));
    CHECK(log2_abs(Rational(1, 1024)) == Catch::Approx(-10.0));
    CHECK(log2_abs(Rational(-32)) == Catch::Approx(5.0));
    CHECK(rational_pow(Rational(3, 2), 4) == Rational(81, 16));
    CHECK(rational_pow(Rational(5), 0) == Rational(1));
}

TEST_CASE("polynomial arithmetic basics") {
    ExactPolynomial one_plus = poly({1, 1});
    ExactPolynomial one_minus = poly({1, -1});
    CHECK(one_plus * one_minus == poly({1, 0, -1}));
    CHECK((one_plus + one_minus) == poly({2}));
    CHECK((one_plus - one_plus).is_zero());
    CHECK(poly({1, 0, -1}).degree() == 2);
    CHECK(poly({3, 2, 1}).derivative() == poly({2, 2}));
    CHECK(poly({1, 2, 3}).eval(Rational(2)) == Rational(17));
    CHECK(poly({1, 1}).shifted_up(2) == poly({0, 0, 1, 1}));
    // trailing zeros trim: degree reflects the true leading term
    CHECK(ExactPolynomial(std::vector<Rational>{Rational(1), Rational(0)}).degree() == 0);
}

TEST_CASE("poly_from_roots expands the factored form") {
    // (1-t)(2-t)(3-t) = 6 - 11 t + 6 t^2 - t^3
    auto P = poly_from_roots({Rational(1), Rational(2), Rational(3)}, Rational(1));
    CHECK(P == poly({6, -11, 6, -1}));
    auto Q = poly_from_roots({Rational(1, 2)}, Rational(4));
    CHECK(Q == poly({2, -4}));
}

TEST_CASE("instance validation enforces the standing hypotheses") {
    CHECK_THROWS_AS(make_instance({}, 1, 1), validation_error);
    CHECK_THROWS_AS(make_instance({Rational(-1)}, 1, 2), validation_error);
    CHECK_THROWS_AS(make_instance({Rational(0)}, 1, 2), validation_error);
    CHECK_THROWS_AS(make_instance({Rational(1)}, 0, 2), validation_error);
    CHECK_THROWS_AS(make_instance({Rational(1)}, 1, 0), validation_error);
    CHECK_THROWS_WITH(make_instance({Rational(1)}, 1, 1),
                      Catch::Matchers::ContainsSubstring("hypothesis"));

    auto inst = make_instance({Rational(3), Rational(1), Rational(1)}, 2, 2);
    CHECK(inst.n == 3);
    CHECK(inst.rho == 2);  // smallest root 1 has multiplicity 2
    CHECK(inst.roots == std::vector<Rational>{1, 1, 3});
    // P = 2(1-t)^2(3-t) = 6 - 14t + 10t^2 - 2t^3
    CHECK(inst.P == poly({6, -14, 10, -2}));
}

TEST_CASE("coefficients of a positive-root denominator alternate in sign") {
    auto inst = make_instance({Rational(1, 2), Rational(3), Rational(3)}, Rational(5, 2), 1);
    for (int k = 0; k <= inst.P.degree(); k++) {
        CAPTURE(k);
        CHECK(sign(inst.P.coeffs[(size_t)k]) == (k % 2 == 0 ? 1 : -1));
    }
    CHECK(inst.P.coeffs.back() == inst.leading * ((inst.n % 2 == 0) ? 1 : -1));
}

TEST_CASE("generated sequence matches the hand-expanded repeated-root case") {
    // denominator (1-t)^2 + z t
    auto inst = make_instance({Rational(1), Rational(1)}, 1, 1);
    auto seq = generate(inst, 3);
    CHECK(seq.at(0) == poly({1}));
    CHECK(seq.at(1) == poly({2, -1}));
    CHECK(seq.at(2) == poly({3, -4, 1}));
    CHECK(seq.at(3) == poly({4, -10, 6, -1}));
    CHECK(degree_profile(seq) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("generated sequence matches the hand-expanded linear case with r=2") {
    // denominator (1-t) + z t^2
    auto inst = make_instance({Rational(1)}, 1, 2);
    auto seq = generate(inst, 3);
    CHECK(degree_profile(seq) == std::vector<int>{0, 0, 1, 1});
    CHECK(seq.at(2) == poly({1, -1}));
    CHECK(seq.at(3) == poly({1, -2}));
}

TEST_CASE("generate rejects bad arguments") {
    auto inst = make_instance({Rational(1)}, 1, 2);
    CHECK_THROWS_AS(generate(inst, -1), validation_error);
    CHECK_THROWS_AS(generate_from_denominator({Rational(0), Rational(1)}, 1, 3),
                    validation_error);
    CHECK_THROWS_AS(generate_from_denominator({}, 1, 3), validation_error);
    CHECK_THROWS_AS(generate_from_denominator({Rational(1)}, 0, 3), validation_error);
}

TEST_CASE("sequence satisfies the defining convolution identity") {
    // sum_{k=0}^{min(n,m)} a_k H_{m-k} + [m>=r] z H_{m-r} = 0 for m >= 1,
    // as an identity of polynomials in z.
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> halves(1, 10), rs(1, 3), ns(1, 4);
    for (int trial = 0; trial < 6; trial++) {
        int n = ns(rng), r = rs(rng);
        if (n == 1 && r == 1) r = 2;
        std::vector<Rational> roots;
        for (int i = 0; i < n; i++) roots.push_back(Rational(halves(rng)) / 2);
        auto inst = make_instance(roots, Rational(halves(rng)) / 2, r);
        auto seq = generate(inst, 18);
        for (int m = 1; m <= 18; m++) {
            ExactPolynomial acc;
            for (int k = 0; k <= std::min(inst.n, m); k++)
                acc += seq.at(m - k) * inst.P.coeffs[(size_t)k];
            if (m >= r) acc += seq.at(m - r).shifted_up(1);
            CAPTURE(trial, m);
            CHECK(acc.is_zero());
        }
    }
}

TEST_CASE("degree bound and positivity at z=0 hold along the sequence") {
    auto inst = make_instance({Rational(1, 2), Rational(2), Rational(5)}, Rational(3), 2);
    auto seq = generate(inst, 40);
    for (int m = 0; m <= 40; m++) {
        CAPTURE(m);
        CHECK(seq.at(m).degree() <= m / inst.r);
        // H_m(0) is a coefficient of the everywhere-positive series 1/P(t)
        CHECK(seq.at(m).eval(Rational(0)) > 0);
    }
}

TEST_CASE("specializing z to a rational reproduces the scalar power series") {
    // With z fixed, h_m = H_m(z0) are the series coefficients of
    // 1/(P(t) + z0 t^r); check the scalar convolution directly.
    auto inst = make_instance({Rational(1), Rational(3)}, 1, 1);
    auto seq = generate(inst, 25);
    Rational z0(7, 3);
    std::vector<Rational> den = inst.P.coeffs;
    den[(size_t)inst.r] += z0;
    for (int m = 1; m <= 25; m++) {
        Rational acc(0);
        for (int k = 0; k <= std::min((int)den.size() - 1, m); k++)
            acc += den[(size_t)k] * seq.at(m - k).eval(z0);
        CAPTURE(m);
        CHECK(acc == 0);
    }
}
