// Acceptance suite: one line per criterion, exit code = number of failures.
// Each criterion pins its tolerance in code; tolerances are not configurable.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "late/adversarial.hpp"
#include "late/boundary.hpp"
#include "late/dgp.hpp"
#include "late/errors.hpp"
#include "late/estimation.hpp"
#include "late/rng.hpp"
#include "late/simulation.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace late;
using namespace late::testing;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// 1. interior-study boundary arithmetic
void criterion_1() {
    const double boundary = binary_boundary(-0.0950, 0.4105, 0.3557);
    const bool ok = std::abs(boundary - 0.0052) <= 5e-5;
    report(1, "interior-study boundary 0.0052 within 5e-5", ok, "got " + fmt(boundary));
}

// 2. one-sided-study boundary arithmetic + safe-side verdict
void criterion_2() {
    const double boundary = binary_boundary(-0.0363, 0.6228, 0.0112);
    const bool arithmetic_ok = std::abs(boundary - 0.0222) <= 5e-5;
    const BoundaryReport verdict = classify_one_sided(-0.0363, 0.6228, 0.0112, 0.0157);
    const bool verdict_ok = verdict.verdict == Verdict::SafeSide;
    report(2, "one-sided-study boundary 0.0222 within 5e-5 and cell 0.0157 -> safe side",
           arithmetic_ok && verdict_ok,
           "boundary " + fmt(boundary) + ", verdict " + verdict_name(verdict.verdict));
}

// 3. magnitude lower bound over 1000 random DGPs + 100 tightness certificates
void criterion_3() {
    Rng rng(3001);
    int bound_violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Theta theta = random_theta(rng);
        const double k1 = theta.a + theta.b;
        const double k2 = theta.a + theta.c;
        const double bound = std::abs(iv_beta(theta)) * std::abs(k1 - k2) / (k1 + k2);
        const double biggest =
            std::max(std::abs(late_complier(theta)), std::abs(late_defier(theta)));
        if (biggest < bound - 1e-10) ++bound_violations;
    }
    int cert_failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double beta = (rng.bernoulli(0.5) ? -1.0 : 1.0) * rng.uniform(0.05, 2.0);
        const double k2 = rng.uniform(0.0, 0.5);
        const double k1 = k2 + rng.uniform(0.05, 0.45);
        const TightnessCertificate cert =
            lower_bound_tightness_certificate(beta, k1, k2, 401);
        if (std::abs(cert.minimum - cert.closed_form) > 2.0 * cert.mu2_step)
            ++cert_failures;
    }
    report(3, "max{|mu1|,|mu2|} >= |beta|(k1-k2)/(k1+k2) - 1e-10 on 1000 DGPs; "
              "100 tightness certificates within 2x grid spacing",
           bound_violations == 0 && cert_failures == 0,
           fmt(bound_violations) + " bound violations, " + fmt(cert_failures) +
               " certificate misses");
}

// 4. dominance restriction identifies the sign: 1000 DGPs, zero violations
void criterion_4() {
    Rng rng(4001);
    int violations = 0;
    int accepted = 0;
    while (accepted < 1000) {
        const Theta theta = random_theta(rng);
        if (theta.b <= theta.c) continue;  // cov(D,Z) > 0
        const double mu1 = late_complier(theta);
        const double mu2 = late_defier(theta);
        if (std::abs(mu1) < std::abs(mu2)) continue;
        const double beta = iv_beta(theta);
        if (beta == 0.0) continue;
        ++accepted;
        const int sign_mu1 = mu1 > 0.0 ? 1 : (mu1 < 0.0 ? -1 : 0);
        if (sign_mu1 != sign_under_dominance(beta, 1)) ++violations;
    }
    report(4, "sign(mu1) = sign(beta) under |mu1| >= |mu2| and cov(D,Z) > 0, 1000 DGPs",
           violations == 0, fmt(violations) + " violations");
}

// 5. continuous forge soundness over 1000 overlap-class members
void criterion_5() {
    Rng rng(5001);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        ForgeConfig config;
        const Theta theta = random_forgeable_theta(rng, config);
        try {
            const ForgeResult result = forge_continuous(theta, config);
            bool ok = result.equivalence_distance <= 1e-12;
            ok = ok && result.mu1_twin > -result.beta_base;
            ok = ok && result.mu2_twin > -result.beta_base;
            ok = ok && result.membership.all();
            for (const DiscreteDist* dist :
                 {&result.twin.f11, &result.twin.f10, &result.twin.f01, &result.twin.f00,
                  &result.twin.g11, &result.twin.g10, &result.twin.g01,
                  &result.twin.g00}) {
                ok = ok && dist->supported_within(config.M);
            }
            if (!ok) ++bad;
        } catch (const Error&) {
            ++bad;
        }
    }
    report(5, "1000 forged twins: equivalence <= 1e-12, mu1,mu2 > -beta, full membership",
           bad == 0, fmt(bad) + " failures");
}

// 6. binary forges: danger-side soundness, safe-side refusal, safe-side sign guarantee
void criterion_6() {
    Rng rng(6001);
    int interior_bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        double eta = 0.0;
        const BinaryTheta theta = random_dangerside_interior(rng, eta);
        try {
            const BinaryForgeResult result = forge_binary_interior(theta, eta);
            if (!(result.mu1_twin >= 0.0 && result.equivalence_distance <= 1e-12 &&
                  result.c_tilde <= eta && result.membership.all()))
                ++interior_bad;
        } catch (const Error&) {
            ++interior_bad;
        }
    }
    int onesided_bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const BinaryTheta theta = random_dangerside_onesided(rng);
        try {
            const BinaryForgeResult result = forge_binary_onesided(theta);
            if (!(result.mu1_twin >= 0.0 && result.equivalence_distance <= 1e-12 &&
                  result.c_tilde <= theta.k2() && result.membership.all()))
                ++onesided_bad;
        } catch (const Error&) {
            ++onesided_bad;
        }
    }

    // safe-side inputs must be refused
    int refusal_bad = 0;
    const BinaryTheta safe_base =
        BinaryTheta::make(0.3, 0.2, 0.0, 0.5, 0.5, 0.495, 0.0, 0.0, 0.0, 0.505, 0.0, 0.4);
    try {
        forge_binary_interior(safe_base, 0.001);
        ++refusal_bad;
    } catch (const PreconditionViolated&) {
    }
    const BinaryTheta safe_onesided = BinaryTheta::make(
        0.0112, 0.6116, 0.0, 0.6662, 0.9, 0.4 - 0.0363, 0.0, 0.0, 0.0, 0.4, 0.0, 0.4);
    try {
        forge_binary_onesided(safe_onesided);
        ++refusal_bad;
    } catch (const PreconditionViolated&) {
    }

    // safe-side sign guarantee, 1000 draws per regime
    int sign_bad = 0;
    int accepted = 0;
    while (accepted < 1000) {
        double eta = 0.0;
        const auto theta = try_safeside_interior(rng, eta);
        if (!theta) continue;
        ++accepted;
        if (!(late_complier(*theta) < 0.0)) ++sign_bad;
    }
    accepted = 0;
    while (accepted < 1000) {
        const auto theta = try_safeside_onesided(rng);
        if (!theta) continue;
        ++accepted;
        if (!(late_complier(*theta) < 0.0)) ++sign_bad;
    }

    report(6, "binary forges sound on 1000+1000 danger-side draws, refuse safe side, "
              "safe-side sign guarantee holds on 1000+1000 draws",
           interior_bad == 0 && onesided_bad == 0 && refusal_bad == 0 && sign_bad == 0,
           fmt(interior_bad) + "/" + fmt(onesided_bad) + " forge failures, " +
               fmt(refusal_bad) + " missed refusals, " + fmt(sign_bad) +
               " sign violations");
}

// 7. indistinguishability of forged pairs for every built-in procedure
void criterion_7() {
    const BinaryTheta base =
        BinaryTheta::make(0.3, 0.2, 0.0, 0.5, 0.5, 0.495, 0.0, 0.0, 0.0, 0.505, 0.0, 0.4);
    const Theta theta = base.to_theta();
    const Theta twin = forge_binary_interior(base, 0.05).twin.to_theta();

    bool ok = true;
    std::string detail;
    for (const char* name : {"plug-in-sign", "t-test-sign", "always-ambiguous"}) {
        ExperimentConfig config;
        config.n = 5000;
        config.replications = 400;
        config.alpha = 0.05;
        config.seed = 7001;
        config.procedure = name;
        const TwinCalibrationReport calibration =
            run_twin_calibration(theta, twin, config, 50);
        const bool proc_ok = calibration.rejects <= 5 && calibration.all_ledgers_ok;
        ok = ok && proc_ok;
        if (!detail.empty()) detail += ", ";
        detail += std::string(name) + ": " + fmt(double(calibration.rejects)) +
                  "/50 rejects, ledgers " + (calibration.all_ledgers_ok ? "ok" : "BAD");
    }
    report(7, "equality test rejects in <= 5 of 50 seeds per procedure "
              "(n=5000, 400 replications); coverage ledger exact in every tally",
           ok, detail);
}

// 8. estimator consistency: larger samples win in >= 90% of 50 estimand draws
void criterion_8() {
    Rng rng(8001);
    int better = 0;
    const int draws = 50;
    for (int i = 0; i < draws; ++i) {
        const Theta theta = random_theta(rng);
        const ConsistencyReport sweep =
            run_consistency_sweep(theta, {1000, 100000}, 10, 8100 + i);
        if (sweep.rows[1].mae_beta < sweep.rows[0].mae_beta) ++better;
    }
    report(8, "mean |beta_hat - beta| at n=1e5 below its n=1e3 value in >= 90% of 50 draws",
           better >= 45, fmt(better) + "/50 draws improved");
}

// 9. observed law vs full-joint enumeration, exact at 1e-12
void criterion_9() {
    std::vector<Theta> fixtures;
    const DiscreteDist point0 = DiscreteDist::point_mass(0.0);
    const DiscreteDist point1 = DiscreteDist::point_mass(1.0);
    const DiscreteDist spread = DiscreteDist::from_atoms(
        {{-0.9, 0.25}, {-0.3, 0.25}, {0.3, 0.25}, {0.9, 0.25}});
    fixtures.push_back(Theta::make(0.3, 0.2, 0.0, 0.5, 1.0, spread,
                                   DiscreteDist::point_mass(-0.01), point0, point0,
                                   point0, point0, point0, spread));
    fixtures.push_back(Theta::make(1.0, 0.0, 0.0, 0.5, 1.0, point1, point0, point0,
                                   point0, point0, point0, point0, point0));
    fixtures.push_back(BinaryTheta::make(0.25, 0.45, 0.05, 0.5, 0.7, 0.6, 0.5, 0.5, 0.4,
                                         0.45, 0.4, 0.3)
                           .to_theta());
    Rng rng(9001);
    for (int trial = 0; trial < 200; ++trial) fixtures.push_back(random_theta(rng));

    double worst = 0.0;
    for (const Theta& theta : fixtures) {
        worst = std::max(worst,
                         enumeration_mismatch(enumerate_observed(theta), observed_law(theta)));
    }
    report(9, "observed law equals full-joint enumeration on the fixture set (1e-12)",
           worst <= 1e-12, "worst mismatch " + fmt(worst));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
