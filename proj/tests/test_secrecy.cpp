#include <doctest.h>

#include <cmath>

#include "cribmac/resolvability.hpp"
#include "cribmac/secrecy.hpp"
#include "helpers.hpp"

using namespace cribmac;
using namespace testutil;

namespace {

SecrecyCodeConfig degraded_cfg(std::size_t n, double r1, double r2, double r1p, double r2p,
                               std::uint64_t seed) {
    SecrecyCodeConfig cfg;
    cfg.scenario = CribbingScenario::DegradedMessageSets;
    cfg.n = n;
    cfg.secret_r1 = r1;
    cfg.secret_r2 = r2;
    cfg.dither_r1 = r1p;
    cfg.dither_r2 = r2p;
    cfg.law = uniform_joint_law();
    cfg.seed = seed;
    cfg.typ_epsilon = 0.5;
    return cfg;
}

// substitute a witness back into the pre-elimination system, test-side
bool witness_satisfies(const WiretapMac& w, const InputLaw& law, CribbingScenario sc,
                       RatePoint pt, const WitnessRates& wit) {
    JointTable j = full_joint(w, law);
    double iy2 = mutual_information(j, {"X2"}, {"Y"}, {"X1"});
    double iy = mutual_information(j, {"X1", "X2"}, {"Y"});
    double iz1 = mutual_information(j, {"X1"}, {"Z"});
    double iz = mutual_information(j, {"X1", "X2"}, {"Z"});
    bool ok = pt.r2 + wit.r2p < iy2 && pt.r1 + wit.r1p + pt.r2 + wit.r2p < iy &&
              wit.r1p > iz1 && wit.r1p + wit.r2p > iz && wit.r1p >= 0 && wit.r2p >= 0;
    if (sc == CribbingScenario::NonCausal || sc == CribbingScenario::Causal) {
        double h1 = entropy(j, {"X1"});
        ok = ok && pt.r1 + wit.r1p < h1 && wit.r2p > iz - h1;
    }
    return ok;
}

}  // namespace

TEST_CASE("secrecy codebook shapes") {
    // zero dither rates give a plain reliability codebook
    SecrecyCodeConfig plain = degraded_cfg(2, 0.5, 0.5, 0.0, 0.0, 1);
    SecrecyCodebook cb = build_secrecy_codebook(plain);
    CHECK(cb.m1p_count == 1);
    CHECK(cb.m2p_count == 1);
    CHECK(cb.x1_words.size() == cb.m1_count);

    // degraded: one x2 book per (m1, m1') tuple
    SecrecyCodeConfig layered = degraded_cfg(2, 0.5, 0.5, 0.5, 0.5, 2);
    SecrecyCodebook lb = build_secrecy_codebook(layered);
    CHECK(lb.x2_books.size() == lb.m1_count * lb.m1p_count);
    CHECK(lb.x2_books[0].size() == lb.m2_count * lb.m2p_count);

    // non-causal: books keyed on the realized word
    SecrecyCodeConfig nc = layered;
    nc.scenario = CribbingScenario::NonCausal;
    nc.law = joint_law({0.5, 0.5, 0.0, 0.0});  // deterministic X1 -> one shared book
    SecrecyCodebook nb = build_secrecy_codebook(nc);
    CHECK(nb.x2_books.size() == 1);

    // strictly-causal block structure: cloud and satellite spaces agree
    SecrecyCodeConfig sc;
    sc.scenario = CribbingScenario::StrictlyCausal;
    sc.r = 1;
    sc.B = 2;
    sc.secret_r1 = 1.0;
    sc.secret_r2 = 1.0;
    sc.rho1p = 0.5;
    sc.rho1pp = 0.5;
    sc.rho2 = 0.5;
    sc.law = product_aux_law({0.5, 0.5}, {0.5, 0.5});
    sc.seed = 3;
    SecrecyCodebook scb = build_secrecy_codebook(sc);
    CHECK(scb.cloud_count() == scb.c1 * scb.c1p * scb.c1pp);
    CHECK(scb.u_words[0].size() == scb.cloud_count());
    CHECK(scb.x1_words_b[1][0].size() == scb.cloud_count());  // satellites mirror clouds
}

TEST_CASE("no leakage through a constant eavesdropper output") {
    SecrecyCodeConfig cfg = degraded_cfg(2, 0.5, 0.5, 0.5, 0.5, 7);
    SecrecyReport rep = simulate_secrecy(cfg, z_constant_wiretap());
    CHECK(rep.leakage_bits == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.resolvability_bound_bits == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.p_error >= 0.0);
    CHECK(rep.p_error <= 1.0);
}

TEST_CASE("eavesdropper equal to the decoder learns everything it can") {
    // Y = Z = (X1, X2) noiselessly; with all codeword tuples distinct the
    // leakage equals the full secret-message entropy
    std::vector<ProbVector> rows;
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2) {
            std::vector<double> yz(16, 0.0);
            std::size_t v = x1 * 2 + x2;
            yz[v * 4 + v] = 1.0;
            rows.emplace_back(std::move(yz));
        }
    WiretapMac both(2, 2, 4, 4, Kernel(std::move(rows)));

    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        SecrecyCodeConfig cfg = degraded_cfg(3, 1.0 / 3.0, 1.0 / 3.0, 0.0, 0.0, seed);
        SecrecyCodebook cb = build_secrecy_codebook(cfg);
        bool distinct = true;
        for (std::size_t a = 0; a < cb.m1_count && distinct; ++a)
            for (std::size_t b = 0; b < cb.m2_count && distinct; ++b)
                for (std::size_t c = 0; c < cb.m1_count; ++c)
                    for (std::size_t d = 0; d < cb.m2_count; ++d) {
                        if (a == c && b == d) continue;
                        if (cb.x1(a, 0) == cb.x1(c, 0) && cb.x2(a, 0, b, 0) == cb.x2(c, 0, d, 0)) {
                            distinct = false;
                            break;
                        }
                    }
        if (!distinct) continue;
        SecrecyReport rep = simulate_secrecy(cfg, both);
        CHECK(rep.leakage_bits == doctest::Approx(rep.message_entropy_bits).epsilon(1e-9));
        return;
    }
    FAIL("no seed produced distinct codeword tuples");
}

TEST_CASE("leakage stays below the per-message divergence bound") {
    Rng rng(101);
    for (int i = 0; i < 20; ++i) {
        WiretapMac w = random_wiretap(rng);
        SecrecyCodeConfig cfg = degraded_cfg(1 + i % 3, 0.5, 0.5, 0.4, 0.4,
                                             900 + static_cast<std::uint64_t>(i));
        cfg.law = joint_law(dirichlet(rng, 4));
        SecrecyReport rep = simulate_secrecy(cfg, w);  // the bound is asserted inside
        CHECK(rep.leakage_bits <= rep.resolvability_bound_bits + 1e-9);
        CHECK(rep.leakage_bits <= rep.message_entropy_bits + 1e-9);
    }
}

TEST_CASE("secrecy reports are deterministic") {
    SecrecyCodeConfig cfg = degraded_cfg(3, 0.4, 0.4, 0.3, 0.3, 77);
    WiretapMac w = xor_wiretap(0.2);
    SecrecyReport a = simulate_secrecy(cfg, w);
    SecrecyReport b = simulate_secrecy(cfg, w);
    CHECK(a.p_error == b.p_error);
    CHECK(a.leakage_bits == b.leakage_bits);
}

TEST_CASE("dither growth drives mean leakage down with n") {
    WiretapMac w = xor_wiretap(0.1);
    // dithers above I(X1;Z) and I(X1,X2;Z): resolvability inside the wiretap
    std::vector<double> means;
    for (std::size_t n : {2, 3, 4}) {
        double acc = 0.0;
        const int draws = 12;
        for (int s = 0; s < draws; ++s) {
            SecrecyCodeConfig cfg = degraded_cfg(n, 0.2, 0.2, 0.4, 1.0,
                                                 300 + static_cast<std::uint64_t>(s));
            acc += simulate_secrecy(cfg, w).leakage_bits;
        }
        means.push_back(acc / draws);
    }
    CHECK(means[2] <= means[0] + 0.05);  // trend check with slack for tiny n
}

TEST_CASE("strictly-causal block secrecy") {
    WiretapMac w = xor_wiretap(0.2);
    SecrecyCodeConfig cfg;
    cfg.scenario = CribbingScenario::StrictlyCausal;
    cfg.r = 1;
    cfg.B = 2;
    cfg.secret_r1 = 1.0;   // c1 = 2 per block
    cfg.secret_r2 = 1.0;   // c2 = 2
    cfg.rho1p = 0.5;
    cfg.rho1pp = 0.5;
    cfg.rho2 = 0.5;
    cfg.law = product_aux_law({0.5, 0.5}, {0.5, 0.5});
    cfg.seed = 11;
    cfg.typ_epsilon = 0.9;
    SecrecyReport rep = simulate_secrecy(cfg, w);
    CHECK(rep.leakage_bits >= 0.0);
    CHECK(rep.leakage_bits <= rep.resolvability_bound_bits + 1e-9);
    CHECK(rep.message_entropy_bits == doctest::Approx(2.0));  // one (m1, m2) payload block
    CHECK(rep.p_error >= 0.0);
    CHECK(rep.p_error <= 1.0);
    CHECK(rep.coupling_gap_bound >= 0.0);

    SecrecyReport again = simulate_secrecy(cfg, w);
    CHECK(rep.leakage_bits == again.leakage_bits);
    CHECK(rep.p_error == again.p_error);
}

TEST_CASE("strictly-causal leakage matches a direct two-block oracle") {
    // all dither spaces collapsed to one index: the payload is block-1's m1
    // and the chained law is small enough to rebuild by hand
    WiretapMac w = xor_wiretap(0.3);
    SecrecyCodeConfig cfg;
    cfg.scenario = CribbingScenario::StrictlyCausal;
    cfg.r = 1;
    cfg.B = 2;
    cfg.secret_r1 = 1.0;  // c1 = 2
    cfg.secret_r2 = 0.0;
    cfg.rho1p = 0.0;
    cfg.rho1pp = 0.0;
    cfg.rho2 = 0.0;
    cfg.law = product_aux_law({0.5, 0.5}, {0.5, 0.5});
    cfg.seed = 19;
    cfg.typ_epsilon = 0.9;
    SecrecyReport rep = simulate_secrecy(cfg, w);

    SecrecyCodebook cb = build_secrecy_codebook(cfg);
    REQUIRE(cb.cloud_count() == 2);
    MacChannel z = w.z_channel();
    std::vector<double> joint(2 * 4, 0.0);  // (m1; z1 z2)
    for (std::size_t c1 = 0; c1 < 2; ++c1)
        for (std::size_t s1 = 0; s1 < 2; ++s1)
            for (std::size_t s2 = 0; s2 < 2; ++s2) {
                const Word& a1 = cb.x1_words_b[0][c1][s1];
                const Word& a2 = cb.x2_words_b[0][c1][0];
                const Word& b1 = cb.x1_words_b[1][s1][s2];  // block-2 cloud = block-1 satellite
                const Word& b2 = cb.x2_words_b[1][s1][0];
                for (std::size_t z1 = 0; z1 < 2; ++z1)
                    for (std::size_t z2 = 0; z2 < 2; ++z2)
                        joint[s1 * 4 + z1 * 2 + z2] +=
                            (1.0 / 8.0) *
                            z.row(static_cast<std::size_t>(a1[0]),
                                  static_cast<std::size_t>(a2[0]))[z1] *
                            z.row(static_cast<std::size_t>(b1[0]),
                                  static_cast<std::size_t>(b2[0]))[z2];
            }
    JointTable jt({"M", "ZZ"}, {2, 4}, joint);
    double oracle = mutual_information(jt, {"M"}, {"ZZ"});
    CHECK(rep.leakage_bits == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("secrecy witnesses: degraded") {
    WiretapMac w = z_constant_wiretap();
    InputLaw law = uniform_joint_law();
    // inside: dithers must still clear the (zero) eavesdropper thresholds
    auto wit = secrecy_witness(w, law, CribbingScenario::DegradedMessageSets, {0.2, 0.3});
    REQUIRE(wit);
    CHECK(wit->r1p > 0.0);
    CHECK(witness_satisfies(w, law, CribbingScenario::DegradedMessageSets, {0.2, 0.3}, *wit));

    // outside the sum bound: no witness, cross-checked by an auxiliary grid
    WiretapMac noisy = xor_wiretap(0.25);
    RatePoint outside{0.6, 0.5};  // sum bound is 1 - (1 - h(1/4)) ~ 0.811
    CHECK_FALSE(contains(secrecy_region(noisy, law, CribbingScenario::DegradedMessageSets),
                         outside, 1e-9));
    auto nw = secrecy_witness(noisy, law, CribbingScenario::DegradedMessageSets, outside);
    CHECK_FALSE(nw);
    {
        JointTable j = full_joint(noisy, law);
        double iy2 = mutual_information(j, {"X2"}, {"Y"}, {"X1"});
        double iy = mutual_information(j, {"X1", "X2"}, {"Y"});
        double iz1 = mutual_information(j, {"X1"}, {"Z"});
        double iz = mutual_information(j, {"X1", "X2"}, {"Z"});
        bool any = false;
        for (double r1p = 0.0; r1p <= 2.0; r1p += 0.01)
            for (double r2p = 0.0; r2p <= 2.0; r2p += 0.01)
                if (outside.r2 + r2p < iy2 && outside.r1 + r1p + outside.r2 + r2p < iy &&
                    r1p > iz1 && r1p + r2p > iz)
                    any = true;
        CHECK_FALSE(any);
    }

    // interior points of a nontrivial region admit sound witnesses
    RatePoint inside{0.1, 0.3};
    auto iw = secrecy_witness(noisy, law, CribbingScenario::DegradedMessageSets, inside);
    REQUIRE(iw);
    CHECK(witness_satisfies(noisy, law, CribbingScenario::DegradedMessageSets, inside, *iw));

    auto nc = secrecy_witness(noisy, law, CribbingScenario::NonCausal, inside);
    REQUIRE(nc);
    CHECK(witness_satisfies(noisy, law, CribbingScenario::NonCausal, inside, *nc));
}

TEST_CASE("secrecy witnesses: strictly-causal corner assignment") {
    WiretapMac w = xor_wiretap(0.25);
    InputLaw law = product_aux_law({0.5, 0.5}, {0.5, 0.5});
    JointTable j = full_joint(w, law);
    double h1u = entropy(j, {"U", "X1"}) - entropy(j, {"U"});
    double i_ux1_z = mutual_information(j, {"U", "X1"}, {"Z"});
    double i_u_z = mutual_information(j, {"U"}, {"Z"});
    double i_x1_z_u = mutual_information(j, {"X1"}, {"Z"}, {"U"});
    double i_x2_z_x1u = mutual_information(j, {"X2"}, {"Z"}, {"X1", "U"});
    double eps = 0.02;

    // the corner assignment drives R1 up to H(X1|U) - I(U,X1;Z) - 2 eps with
    // the decodability constraint binding there exactly
    double r1_corner = h1u - i_ux1_z - 2 * eps;
    double lhs = r1_corner + (i_x1_z_u + eps) + (i_u_z + eps);
    CHECK(lhs == doctest::Approx(h1u).epsilon(1e-12));
    // and every secrecy inequality holds strictly at the assignment
    CHECK(i_u_z + eps > i_u_z);
    CHECK(i_x1_z_u + eps + i_u_z + eps > i_ux1_z);
    CHECK(i_x1_z_u + i_u_z + i_x2_z_x1u + 3 * eps >
          mutual_information(j, {"X1", "X2"}, {"Z"}));

    // an interior point (both sum bounds have slack) gets a sound block witness
    RatePoint pt{0.5, 0.2};
    CHECK(contains(secrecy_region(w, law, CribbingScenario::StrictlyCausal), pt, 1e-9));
    auto wit = secrecy_witness(w, law, CribbingScenario::StrictlyCausal, pt);
    REQUIRE(wit);
    CHECK(wit->block_structure);
    double i_ux2_z = mutual_information(j, {"U", "X2"}, {"Z"});
    double i_x1x2_z = mutual_information(j, {"X1", "X2"}, {"Z"});
    double i_x2_y_x1u = mutual_information(j, {"X2"}, {"Y"}, {"X1", "U"});
    double i_x1x2_y = mutual_information(j, {"X1", "X2"}, {"Y"});
    CHECK(pt.r1 + wit->rho1p + wit->rho1pp < h1u);
    CHECK(pt.r2 + wit->rho2 < i_x2_y_x1u);
    CHECK(pt.r1 + wit->rho1p + wit->rho1pp + pt.r2 + wit->rho2 < i_x1x2_y);
    CHECK(wit->rho1pp > i_u_z);
    CHECK(wit->rho1p + wit->rho1pp > i_ux1_z);
    CHECK(wit->rho1p + wit->rho1pp + wit->rho2 > i_x1x2_z);
    CHECK(wit->rho1pp + wit->rho2 > i_ux2_z);

    // far outside: no witness
    CHECK_FALSE(secrecy_witness(w, law, CribbingScenario::StrictlyCausal, {5.0, 5.0}));
}

TEST_CASE("merged strictly-causal sum bound matches the information inequality") {
    // H(X1|U) <=> I(U,X1;Y)  implies  H(X1|U) + I(X2;Y|X1,U) <=> I(X1,X2;Y)
    Rng rng(111);
    for (int i = 0; i < 50; ++i) {
        WiretapMac w = random_wiretap(rng);
        std::vector<ProbVector> r1{ProbVector(dirichlet(rng, 2)), ProbVector(dirichlet(rng, 2))};
        std::vector<ProbVector> r2{ProbVector(dirichlet(rng, 2)), ProbVector(dirichlet(rng, 2))};
        InputLaw law = InputLaw::with_aux(ProbVector(dirichlet(rng, 2)), Kernel(r1), Kernel(r2));
        JointTable j = full_joint(w, law);
        double h1u = entropy(j, {"U", "X1"}) - entropy(j, {"U"});
        double i_ux1_y = mutual_information(j, {"U", "X1"}, {"Y"});
        double i_x2_y_x1u = mutual_information(j, {"X2"}, {"Y"}, {"X1", "U"});
        double i_x1x2_y = mutual_information(j, {"X1", "X2"}, {"Y"});
        double lhs = h1u - i_ux1_y;
        double rhs = (h1u + i_x2_y_x1u) - i_x1x2_y;
        if (std::abs(lhs) < 1e-9 || std::abs(rhs) < 1e-9) {
            CHECK(std::abs(lhs - rhs) < 1e-8);
        } else {
            CHECK(lhs * rhs > 0.0);  // same sign
        }
    }
}
