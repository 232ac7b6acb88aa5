#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "late/adversarial.hpp"
#include "late/dgp.hpp"
#include "late/errors.hpp"
#include "late/rng.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace late;
using namespace late::testing;

namespace {

const DiscreteDist kUniform4 = DiscreteDist::from_atoms(
    {{-0.9, 0.25}, {-0.3, 0.25}, {0.3, 0.25}, {0.9, 0.25}});

// k1 = 0.5, k2 = 0.3, beta = mu1 = -0.01, no defiers
Theta spec_example_theta() {
    const DiscreteDist g10 = DiscreteDist::point_mass(0.0);
    const DiscreteDist f10 = DiscreteDist::point_mass(-0.01);
    const DiscreteDist unused = DiscreteDist::point_mass(0.0);
    return Theta::make(0.3, 0.2, 0.0, 0.5, 1.0, kUniform4, f10, unused, unused, unused,
                       g10, unused, kUniform4);
}

ForgeConfig spec_example_config() {
    ForgeConfig config;
    config.eps1 = 0.3;
    config.eps2 = 0.3;
    config.M = 1.0;
    config.eta = 0.05;
    config.delta_rule = 0.5;
    return config;
}

}  // namespace

TEST_CASE("continuous forge on the worked example") {
    const Theta theta = spec_example_theta();
    const ForgeConfig config = spec_example_config();
    const ForgeResult result = forge_continuous(theta, config);

    CHECK(result.beta_base == doctest::Approx(-0.01));
    CHECK(result.equivalence_distance <= 1e-12);
    CHECK(result.mu1_twin > 0.01);   // > -beta
    CHECK(result.mu2_twin > 0.01);
    CHECK(result.membership.all());
    CHECK(result.c_tilde == 0.05);

    // delta sits mid-interval: cap = eps2 - 3(k1-k2)|beta|/eta = 0.18
    CHECK(result.delta == doctest::Approx(0.09));
    CHECK(result.b1 == doctest::Approx(0.3 - 0.09));
    CHECK(result.b2 == doctest::Approx(-0.3));

    // twin defier laws are the truncated tails: means 0.6 and -0.6
    CHECK(result.twin.f01.mean() == doctest::Approx(0.6));
    CHECK(result.twin.g01.mean() == doctest::Approx(-0.6));
    CHECK(result.mu2_twin == doctest::Approx(1.2));
    CHECK(result.mu1_twin == doctest::Approx((0.2 * -0.01 + 0.05 * 1.2) / 0.25));

    // re-fed through the observed-law algebra, the twin is indistinguishable
    const ObservedLaw base_law = observed_law(theta);
    const ObservedLaw twin_law = observed_law(result.twin);
    for (int d = 0; d < 2; ++d) {
        for (int z = 0; z < 2; ++z) {
            REQUIRE(base_law.y_given(d, z).has_value() == twin_law.y_given(d, z).has_value());
            if (base_law.y_given(d, z))
                CHECK(DiscreteDist::tv_distance(*base_law.y_given(d, z),
                                                *twin_law.y_given(d, z)) <= 1e-12);
        }
    }
    // and the enumeration oracle agrees
    CHECK(enumeration_mismatch(enumerate_observed(result.twin), base_law) <= 1e-12);
}

TEST_CASE("continuous forge preconditions are named") {
    const Theta theta = spec_example_theta();

    ForgeConfig config = spec_example_config();
    config.eps1 = 0.2;  // eta cap becomes 0.04 < eta
    try {
        forge_continuous(theta, config);
        FAIL("expected PreconditionViolated");
    } catch (const PreconditionViolated& e) {
        CHECK(e.condition() == "eta < eps1*min{k2, 1-k1, k1-k2}");
    }

    config = spec_example_config();
    config.eps2 = 0.01;  // rate condition fails
    try {
        forge_continuous(theta, config);
        FAIL("expected PreconditionViolated");
    } catch (const PreconditionViolated& e) {
        CHECK(e.condition() == "3*|beta|/eta < eps2/(k1-k2)");
    }

    Theta with_defiers = theta;
    with_defiers.c = 0.05;
    with_defiers.a = 0.25;
    try {
        forge_continuous(with_defiers, spec_example_config());
        FAIL("expected PreconditionViolated");
    } catch (const PreconditionViolated& e) {
        CHECK(e.condition() == "c == 0");
    }

    Theta harmless = theta;
    std::swap(harmless.f10, harmless.g10);  // beta = +0.01
    try {
        forge_continuous(harmless, spec_example_config());
        FAIL("expected PreconditionViolated");
    } catch (const PreconditionViolated& e) {
        CHECK(e.condition() == "beta < 0");
    }

    // overlap-class violation: f11 and g00 concentrated at the same point
    Theta no_overlap = theta;
    no_overlap.f11 = DiscreteDist::point_mass(0.1);
    no_overlap.g00 = DiscreteDist::point_mass(0.1);
    try {
        forge_continuous(no_overlap, spec_example_config());
        FAIL("expected PreconditionViolated");
    } catch (const PreconditionViolated& e) {
        CHECK(e.condition() == "Q1(1-eps1) - Q2(eps1) > eps2");
    }
}

TEST_CASE("continuous forge: randomized soundness") {
    Rng rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        ForgeConfig config;
        const Theta theta = random_forgeable_theta(rng, config);
        const ForgeResult result = forge_continuous(theta, config);
        CHECK(result.equivalence_distance <= 1e-12);
        CHECK(result.mu1_twin > -result.beta_base);
        CHECK(result.mu2_twin > -result.beta_base);
        CHECK(result.membership.all());
        for (const DiscreteDist* dist :
             {&result.twin.f11, &result.twin.f10, &result.twin.f01, &result.twin.f00,
              &result.twin.g11, &result.twin.g10, &result.twin.g01, &result.twin.g00}) {
            CHECK(dist->supported_within(config.M));
        }
        // the flip preserves the IV identity: mu1 b - mu2 c = beta (k1 - k2)
        const double lhs = result.mu1_twin * result.twin.b - result.mu2_twin * result.twin.c;
        CHECK(std::abs(lhs - result.beta_base * (result.twin.b - result.twin.c)) <= 1e-12);
    }
}

TEST_CASE("truncated always-taker law is a valid distribution exactly on-condition") {
    // the signed mixture (k2 f11 - c F01~) / (k2 - c) keeps positive masses
    // exactly when F11(B1) < 1 - c/k2
    const double k2 = 0.3;
    const double c = 0.2;  // 1 - c/k2 = 1/3
    const DiscreteDist heavy_below =
        DiscreteDist::from_atoms({{0.0, 0.95}, {1.0, 0.05}});  // F(B1) = 0.95 >= 1/3
    const DiscreteDist tail = heavy_below.condition_greater(0.5);
    std::vector<std::pair<const DiscreteDist*, double>> parts = {
        {&heavy_below, k2 / (k2 - c)}, {&tail, -c / (k2 - c)}};
    CHECK_THROWS_AS(DiscreteDist::linear_combination(parts), ConstructionDegenerate);

    const DiscreteDist light_below =
        DiscreteDist::from_atoms({{0.0, 0.2}, {1.0, 0.8}});  // F(B1) = 0.2 < 1/3
    const DiscreteDist tail2 = light_below.condition_greater(0.5);
    parts = {{&light_below, k2 / (k2 - c)}, {&tail2, -c / (k2 - c)}};
    const DiscreteDist valid = DiscreteDist::linear_combination(parts);
    CHECK(std::abs(valid.cdf(1.0) - 1.0) <= 1e-12);
}

TEST_CASE("continuous forge is deterministic bit for bit") {
    Rng rng(103);
    ForgeConfig config;
    const Theta theta = random_forgeable_theta(rng, config);
    const ForgeResult a = forge_continuous(theta, config);
    const ForgeResult b = forge_continuous(theta, config);
    CHECK(a.delta == b.delta);
    CHECK(a.mu1_twin == b.mu1_twin);
    CHECK(a.mu2_twin == b.mu2_twin);
    CHECK(a.equivalence_distance == b.equivalence_distance);
    CHECK(a.twin.f11 == b.twin.f11);
    CHECK(a.twin.f10 == b.twin.f10);
    CHECK(a.twin.f01 == b.twin.f01);
    CHECK(a.twin.g00 == b.twin.g00);
}

TEST_CASE("binary interior forge on the worked example") {
    const BinaryTheta theta =
        BinaryTheta::make(0.3, 0.2, 0.0, 0.5, 0.5, 0.495, 0.0, 0.0, 0.0, 0.505, 0.0, 0.4);
    CHECK(iv_beta(theta) == doctest::Approx(-0.01));
    const BinaryForgeResult result = forge_binary_interior(theta, 0.05);

    CHECK(result.c_tilde == doctest::Approx(0.05));
    CHECK(result.twin.r01 == 1.0);   // transfer saturates the defier Y(1) mean
    CHECK(result.twin.t01 == 0.0);
    CHECK(result.mu1_twin ==
          doctest::Approx((-0.01 * 0.2 + (1.0 - 0.0) * 0.05) / 0.25));
    CHECK(result.mu1_twin >= 0.0);
    CHECK(result.equivalence_distance <= 1e-12);
    CHECK(result.membership.all());

    // observed conditional means preserved cell by cell
    for (int d = 0; d < 2; ++d) {
        for (int z = 0; z < 2; ++z) {
            const auto base_mean = theta.observed_mean(d, z);
            const auto twin_mean = result.twin.observed_mean(d, z);
            REQUIRE(base_mean.has_value() == twin_mean.has_value());
            if (base_mean) CHECK(std::abs(*base_mean - *twin_mean) <= 1e-12);
        }
    }
}

TEST_CASE("binary interior forge: safe-side inputs are refused by name") {
    const BinaryTheta theta =
        BinaryTheta::make(0.3, 0.2, 0.0, 0.5, 0.5, 0.495, 0.0, 0.0, 0.0, 0.505, 0.0, 0.4);
    // eta below the boundary 0.002: safe side, nothing to forge
    try {
        forge_binary_interior(theta, 0.001);
        FAIL("expected PreconditionViolated");
    } catch (const PreconditionViolated& e) {
        CHECK(e.condition() == "beta*(k1-k2) + eta >= 0");
    }
    CHECK_THROWS_AS(forge_binary_interior(theta, 0.5), PreconditionViolated);  // eta > k2
}

TEST_CASE("binary interior forge: randomized flip identity") {
    Rng rng(107);
    for (int trial = 0; trial < 300; ++trial) {
        double eta = 0.0;
        const BinaryTheta theta = random_dangerside_interior(rng, eta);
        const BinaryForgeResult result = forge_binary_interior(theta, eta);
        CHECK(result.mu1_twin >= 0.0);
        CHECK(result.c_tilde <= eta + 1e-15);
        CHECK(result.equivalence_distance <= 1e-12);
        CHECK(result.membership.all());
        // Wald identity preserved by the transfer
        const double lhs =
            result.mu1_twin * result.twin.b - result.mu2_twin * result.twin.c;
        const double rhs = result.beta_base * (result.twin.b - result.twin.c);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("binary interior forge: c~ = k2 empties the always-taker cell") {
    // feasible only when every treated z=0 observation has y = 1
    const BinaryTheta theta =
        BinaryTheta::make(0.1, 0.4, 0.0, 0.5, 1.0, 0.495, 0.0, 0.0, 0.0, 0.505, 0.0, 0.4);
    const BinaryForgeResult result = forge_binary_interior(theta, 0.1);
    CHECK(result.c_tilde == 0.1);
    CHECK(result.twin.a == 0.0);
    CHECK(result.twin.r11 == 0.0);  // unconstrained; pinned for determinism
    CHECK(result.twin.r01 == 1.0);
    CHECK(result.mu1_twin >= 0.0);
    CHECK(result.equivalence_distance <= 1e-12);
}

TEST_CASE("binary one-sided forge: job-training-shaped instance") {
    // k1, k2 as in the one-sided study; beta shrunk until the observable
    // cell sits above the boundary, which is exactly when forging is possible
    const double k1 = 0.6228;
    const double k2 = 0.0112;
    const double r11 = 0.9;
    const double cell = r11 * k2;  // 0.01008
    const double beta = -0.01;     // boundary = 0.0061 < cell
    const BinaryTheta theta = BinaryTheta::make(k2, k1 - k2, 0.0, 0.6662, r11, 0.4 + beta,
                                                0.0, 0.0, 0.0, 0.4, 0.0, 0.4);
    const BinaryForgeResult result = forge_binary_onesided(theta);
    CHECK(result.c_tilde == doctest::Approx(cell));
    CHECK(result.twin.r01 == 1.0);  // min{1, rho10 k2 / c~} with c~ = rho10 k2
    CHECK(result.mu1_twin >= 0.0);
    CHECK(result.equivalence_distance <= 1e-12);

    // with the study's own beta the cell is below the boundary: refusal
    const BinaryTheta safe = BinaryTheta::make(k2, k1 - k2, 0.0, 0.6662, r11, 0.4 - 0.0363,
                                               0.0, 0.0, 0.0, 0.4, 0.0, 0.4);
    try {
        forge_binary_onesided(safe);
        FAIL("expected PreconditionViolated");
    } catch (const PreconditionViolated& e) {
        CHECK(e.condition() == "beta*(k1-k2) + P(Y=1,D=1|Z=0) >= 0");
    }
}

TEST_CASE("binary one-sided forge: randomized soundness") {
    Rng rng(109);
    for (int trial = 0; trial < 300; ++trial) {
        const BinaryTheta theta = random_dangerside_onesided(rng);
        const BinaryForgeResult result = forge_binary_onesided(theta);
        CHECK(result.mu1_twin >= 0.0);
        CHECK(result.c_tilde <= theta.k2() + 1e-15);
        CHECK(result.equivalence_distance <= 1e-12);
        CHECK(result.twin.r01 == 1.0);
        CHECK(result.membership.all());
    }
}

TEST_CASE("verify_equivalence: identity, forged pairs, perturbations") {
    Rng rng(113);
    const Theta theta = random_theta(rng);
    CHECK(verify_equivalence(theta, theta) == 0.0);

    // moving 0.01 mass inside the complier Y(1) law shows up at order 0.01
    Theta perturbed = theta;
    perturbed.a = 0.1;
    perturbed.b = 0.6;
    perturbed.c = 0.1;
    Theta base = perturbed;
    std::vector<Atom> atoms = base.f10.atoms();
    if (atoms.size() < 2) {
        base.f10 = DiscreteDist::from_atoms({{-0.5, 0.5}, {0.5, 0.5}});
        atoms = base.f10.atoms();
    }
    atoms.front().mass -= 0.01;
    atoms.back().mass += 0.01;
    Theta moved = base;
    moved.f10 = DiscreteDist::from_atoms(atoms);
    // weight of f10 inside Y|(D=1,Z=1) is b/(a+b) = 6/7
    CHECK(verify_equivalence(base, moved) >= 0.004);
    CHECK(verify_equivalence(base, moved) == doctest::Approx(0.01 * 6.0 / 7.0));
}

TEST_CASE("verify_membership flags individual clause failures") {
    const Theta theta = spec_example_theta();
    const ForgeConfig config = spec_example_config();
    const ForgeResult result = forge_continuous(theta, config);
    CHECK(verify_membership(result.twin, config, result.beta_base, 0.5, 0.3).all());

    // defier share beyond the tolerance
    ForgeConfig tight = config;
    tight.eta = result.c_tilde - 0.01;
    const MembershipFlags c_fail =
        verify_membership(result.twin, tight, result.beta_base, 0.5, 0.3);
    CHECK(!c_fail.c_within_eta);
    CHECK(c_fail.k1_match);

    // twin with mu1 and mu2 of opposite signs fails the sign clause
    Theta disagreeing = result.twin;
    disagreeing.f01 = DiscreteDist::point_mass(-0.9);
    disagreeing.g01 = DiscreteDist::point_mass(0.9);  // mu2 < 0 while mu1 > 0
    const MembershipFlags sign_fail =
        verify_membership(disagreeing, config, result.beta_base, 0.5, 0.3);
    CHECK(!sign_fail.sign_agreement);

    // wrong take-up rate
    const MembershipFlags k_fail =
        verify_membership(result.twin, config, result.beta_base, 0.52, 0.3);
    CHECK(!k_fail.k1_match);
}

TEST_CASE("alternative non-truncated defier law is surfaced for diagnostics") {
    const ForgeResult result = forge_continuous(spec_example_theta(), spec_example_config());
    // under the discarded reading the defier Y(0) law would be g00 itself
    CHECK(result.mu2_twin_alt_g00 == doctest::Approx(0.6 - 0.0));
    CHECK(result.mu2_twin_alt_g00 != result.mu2_twin);
}
