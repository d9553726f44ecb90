#include <doctest.h>

#include <cmath>

#include "cribmac/prob.hpp"
#include "cribmac/rng.hpp"
#include "helpers.hpp"

using namespace cribmac;
using namespace testutil;

TEST_CASE("probability vectors validate at construction") {
    CHECK_THROWS_AS(ProbVector({0.5, 0.6}), Error);
    CHECK_THROWS_AS(ProbVector({-0.1, 1.1}), Error);
    CHECK_THROWS_AS(ProbVector(std::vector<double>{}), Error);
    CHECK(ProbVector({0.5, 0.5}).size() == 2);
    // boundary: 1e-12 deviation accepted, more rejected
    CHECK_NOTHROW(ProbVector({0.5, 0.5 + 0.9e-12}));
    CHECK_THROWS_AS(ProbVector({0.5, 0.5 + 1e-11}), Error);
}

TEST_CASE("entropy basics") {
    CHECK(entropy(ProbVector::uniform(2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy(ProbVector::point_mass(0, 3)) == 0.0);
    double expected = oracle_entropy({0.75, 0.25});
    CHECK(entropy(ProbVector({0.75, 0.25})) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(entropy(ProbVector({0.75, 0.25})) == doctest::Approx(0.8112781245).epsilon(1e-9));
}

TEST_CASE("kl divergence") {
    ProbVector p({0.5, 0.5}), q({0.25, 0.75});
    CHECK(kl_divergence(p, p) == 0.0);
    CHECK(kl_divergence(p, q) == doctest::Approx(oracle_kl({0.5, 0.5}, {0.25, 0.75}))
                                      .epsilon(1e-12));
    CHECK(kl_divergence(p, q) == doctest::Approx(0.2075187496).epsilon(1e-9));
    CHECK_THROWS_AS(kl_divergence(p, ProbVector({1.0, 0.0})), AbsoluteContinuityViolation);
    CHECK_THROWS_AS(kl_divergence(p, ProbVector({0.5, 0.25, 0.25})), DimensionMismatch);
}

TEST_CASE("kl nonnegativity, zero only at equality") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        ProbVector p(dirichlet(rng, 4));
        ProbVector q(dirichlet(rng, 4));
        double d = kl_divergence(p, q);
        CHECK(d >= 0.0);
        double v = variational_distance(p, q);
        if (v > 1e-6) CHECK(d > 0.0);
        CHECK(kl_divergence(p, p) <= 1e-12);
        // Pinsker in bits
        CHECK(v * v / (2.0 * std::log(2.0)) <= d + 1e-12);
    }
}

TEST_CASE("variational distance") {
    ProbVector p({0.5, 0.5}), q({0.25, 0.75});
    CHECK(variational_distance(p, p) == 0.0);
    CHECK(variational_distance(ProbVector::point_mass(0, 2), ProbVector::point_mass(1, 2)) ==
          2.0);
    CHECK(variational_distance(p, q) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("minimum-mass divergence bound") {
    ProbVector p({0.5, 0.5}), q({0.25, 0.75});
    auto [v0, b0] = pinsker_and_min_mass_bounds(p, p);
    CHECK(v0 == 0.0);
    CHECK(b0 == 0.0);
    auto [v, bound] = pinsker_and_min_mass_bounds(p, q);
    CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bound == doctest::Approx(1.0).epsilon(1e-12));  // log2(1/0.25) * 0.5
    CHECK(kl_divergence(p, q) <= bound);

    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        ProbVector a(dirichlet(rng, 5));
        ProbVector b(dirichlet(rng, 5));
        CHECK_NOTHROW(pinsker_and_min_mass_bounds(a, b));  // verifies D <= log2(1/mu) V inside
    }
}

TEST_CASE("mutual information from joint tables") {
    // independent uniform bits
    JointTable indep({"A", "B"}, {2, 2}, {0.25, 0.25, 0.25, 0.25});
    CHECK(mutual_information(indep, {"A"}, {"B"}) == doctest::Approx(0.0).epsilon(1e-12));
    // identity coupling
    JointTable eq({"A", "B"}, {2, 2}, {0.5, 0.0, 0.0, 0.5});
    CHECK(mutual_information(eq, {"A"}, {"B"}) == doctest::Approx(1.0).epsilon(1e-12));

    // XOR triple brute-forced over the 8 outcomes
    std::vector<double> t(8, 0.0);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) t[(a * 2 + b) * 2 + (a ^ b)] = 0.25;
    JointTable xor_triple({"A", "B", "C"}, {2, 2, 2}, t);
    CHECK(mutual_information(xor_triple, {"A"}, {"C"}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mutual_information(xor_triple, {"A", "B"}, {"C"}) ==
          doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(mutual_information(xor_triple, {"A"}, {"A"}), AxisError);
    CHECK_THROWS_AS(mutual_information(xor_triple, {"A"}, {"D"}), AxisError);
}

TEST_CASE("mutual information symmetry and nonnegativity") {
    Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        JointTable j({"A", "B", "C"}, {2, 3, 2}, dirichlet(rng, 12));
        double ab = mutual_information(j, {"A"}, {"B"}, {"C"});
        double ba = mutual_information(j, {"B"}, {"A"}, {"C"});
        CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
        CHECK(ab >= 0.0);
        CHECK(mutual_information(j, {"A"}, {"B"}) >= 0.0);
    }
}

TEST_CASE("block decomposition identity for divergence against product laws") {
    // D(P || Q^{(x) rB}) = sum_b D(P_b || Q^{(x) r}) + sum_b I(Z_b ; Z_{b+1..B})
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        JointTable p({"Z1", "Z2"}, {4, 4}, dirichlet(rng, 16));  // two blocks of length 2, |Z|=2
        std::vector<double> qsym = dirichlet(rng, 2);
        std::vector<double> q2(4), q4(16);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) q2[a * 2 + b] = qsym[a] * qsym[b];
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) q4[a * 4 + b] = q2[a] * q2[b];

        double lhs = kl_divergence(p.to_prob_vector(), ProbVector(q4));
        double rhs = kl_divergence(p.marginal({"Z1"}).to_prob_vector(), ProbVector(q2)) +
                     kl_divergence(p.marginal({"Z2"}).to_prob_vector(), ProbVector(q2)) +
                     mutual_information(p, {"Z1"}, {"Z2"});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("strong typicality") {
    TypicalityParams tp(0.1, 4);
    std::vector<Symbol> constant{1, 1, 1, 1};
    CHECK(is_strongly_typical(constant, ProbVector::point_mass(1, 2), tp));

    std::vector<Symbol> balanced{0, 1, 0, 1};
    CHECK(is_strongly_typical(balanced, ProbVector::uniform(2), tp));

    std::vector<Symbol> skewed{0, 0, 0, 1};
    CHECK_FALSE(is_strongly_typical(skewed, ProbVector::uniform(2), tp));

    CHECK_THROWS_AS(is_strongly_typical(std::span<const Symbol>(constant.data(), 3),
                                        ProbVector::uniform(2), tp),
                    LengthMismatch);
    // symbols with zero mass may not occur at all
    std::vector<Symbol> stray{0, 0, 0, 1};
    CHECK_FALSE(is_strongly_typical(stray, ProbVector::point_mass(0, 2), tp));
}

TEST_CASE("joint strong typicality") {
    JointTable j({"A", "B"}, {2, 2}, {0.5, 0.0, 0.0, 0.5});
    TypicalityParams tp(0.2, 4);
    std::vector<Symbol> a{0, 1, 0, 1}, same{0, 1, 0, 1}, diff{0, 1, 1, 1};
    CHECK(is_strongly_typical({std::span<const Symbol>(a), std::span<const Symbol>(same)}, j, tp));
    CHECK_FALSE(
        is_strongly_typical({std::span<const Symbol>(a), std::span<const Symbol>(diff)}, j, tp));
}

TEST_CASE("joint table marginals") {
    JointTable j({"A", "B", "C"}, {2, 2, 2},
                 {0.1, 0.05, 0.1, 0.05, 0.2, 0.1, 0.25, 0.15});
    JointTable ab = j.marginal({"A", "B"});
    CHECK(ab.rank() == 2);
    CHECK(ab.at(std::vector<std::size_t>{0, 0}) == doctest::Approx(0.15));
    JointTable c = j.marginal({"C"});
    CHECK(c.flat(0) == doctest::Approx(0.65));
    CHECK_THROWS_AS(j.marginal({"Q"}), AxisError);
}
