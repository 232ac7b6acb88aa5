#include "late/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "late/errors.hpp"

namespace late {

namespace {

constexpr double kTol = 1e-12;

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

std::string num(double v) { return std::to_string(v); }

void require(bool ok, const char* condition, const std::string& detail) {
    if (!ok) throw PreconditionViolated(condition, detail);
}

double clamp_unit(double v, const char* what) {
    if (v < -kTol || v > 1.0 + kTol)
        throw ConstructionDegenerate(std::string(what) + " = " + num(v) +
                                     " left [0,1] beyond tolerance");
    return std::min(1.0, std::max(0.0, v));
}

void check_window(double lo, double value, double hi, const char* what) {
    if (value < lo - kTol || value > hi + kTol)
        throw ConstructionDegenerate(std::string(what) + " = " + num(value) +
                                     " outside its admissible window [" + num(lo) + ", " +
                                     num(hi) + "]");
}

}  // namespace

ForgeResult forge_continuous(const Theta& theta, const ForgeConfig& config) {
    require(config.eps1 > 0.0 && config.eps1 < 1.0, "0 < eps1 < 1", "eps1=" + num(config.eps1));
    require(config.eps2 > 0.0, "eps2 > 0", "eps2=" + num(config.eps2));
    require(config.delta_rule > 0.0 && config.delta_rule < 1.0, "0 < delta_rule < 1",
            "delta_rule=" + num(config.delta_rule));
    require(config.M > 0.0, "M > 0", "M=" + num(config.M));
    require(theta.c == 0.0, "c == 0", "c=" + num(theta.c));

    const double k1 = theta.a + theta.b;
    const double k2 = theta.a;  // a + c with c = 0
    require(k1 > k2, "k1 > k2", "k1=" + num(k1) + ", k2=" + num(k2));

    const double beta = iv_beta(theta);
    require(beta < 0.0, "beta < 0", "beta=" + num(beta));

    const double eta = config.eta;
    const double eta_cap = config.eps1 * std::min({k2, 1.0 - k1, k1 - k2});
    require(eta > 0.0, "eta > 0", "eta=" + num(eta));
    require(eta < eta_cap, "eta < eps1*min{k2, 1-k1, k1-k2}",
            "eta=" + num(eta) + ", bound=" + num(eta_cap));
    require(3.0 * std::abs(beta) / eta < config.eps2 / (k1 - k2),
            "3*|beta|/eta < eps2/(k1-k2)",
            "lhs=" + num(3.0 * std::abs(beta) / eta) +
                ", rhs=" + num(config.eps2 / (k1 - k2)));

    // Quantile overlap: for c = 0 the observed laws of Y|(D=1,Z=0) and
    // Y|(D=0,Z=1) are exactly f11 and g00.
    const double q1 = theta.f11.quantile(1.0 - config.eps1);
    const double q2 = theta.g00.quantile(config.eps1);
    require(q1 - q2 > config.eps2, "Q1(1-eps1) - Q2(eps1) > eps2",
            "Q1=" + num(q1) + ", Q2=" + num(q2) + ", eps2=" + num(config.eps2));

    for (const DiscreteDist* dist :
         {&theta.f11, &theta.f10, &theta.f01, &theta.f00, &theta.g11, &theta.g10,
          &theta.g01, &theta.g00}) {
        require(dist->supported_within(config.M), "support within [-M, M]",
                "M=" + num(config.M));
    }

    ForgeResult result{.twin = theta};
    result.beta_base = beta;

    const double delta_cap = config.eps2 - 3.0 * (k1 - k2) * std::abs(beta) / eta;
    result.delta = config.delta_rule * delta_cap;
    result.b1 = q1 - result.delta;
    result.b2 = q2;
    result.c_tilde = eta;

    const double b_twin = (k1 - k2) + eta;
    const double a_twin = k2 - eta;

    const DiscreteDist f01_twin = theta.f11.condition_greater(result.b1);
    const DiscreteDist g01_twin = theta.g00.condition_at_most(result.b2);

    using Part = std::pair<const DiscreteDist*, double>;
    const std::vector<Part> f11_parts = {{&theta.f11, k2 / (k2 - eta)},
                                         {&f01_twin, -eta / (k2 - eta)}};
    const DiscreteDist f11_twin = DiscreteDist::linear_combination(f11_parts);

    const std::vector<Part> f10_parts = {{&theta.f10, (k1 - k2) / b_twin},
                                         {&f01_twin, eta / b_twin}};
    const DiscreteDist f10_twin = DiscreteDist::mixture(f10_parts);

    const std::vector<Part> g00_parts = {{&theta.g00, (1.0 - k1) / (1.0 - k1 - eta)},
                                         {&g01_twin, -eta / (1.0 - k1 - eta)}};
    const DiscreteDist g00_twin = DiscreteDist::linear_combination(g00_parts);

    const std::vector<Part> g10_parts = {{&theta.g10, (k1 - k2) / b_twin},
                                         {&g01_twin, eta / b_twin}};
    const DiscreteDist g10_twin = DiscreteDist::mixture(g10_parts);

    // The never-taker Y(1) law and always-taker Y(0) law never reach the
    // observed data; pinned to a point mass for determinism.
    const DiscreteDist unobserved = DiscreteDist::point_mass(0.0);

    result.twin = Theta::make(a_twin, b_twin, eta, theta.pz, theta.M, f11_twin, f10_twin,
                              f01_twin, unobserved, unobserved, g10_twin, g01_twin,
                              g00_twin);

    result.mu1_twin = f10_twin.mean() - g10_twin.mean();
    result.mu2_twin = f01_twin.mean() - g01_twin.mean();
    result.mu2_twin_alt_g00 = f01_twin.mean() - theta.g00.mean();
    result.equivalence_distance = verify_equivalence(theta, result.twin);
    result.membership = verify_membership(result.twin, config, beta, k1, k2);
    return result;
}

namespace {

BinaryForgeResult forge_binary(const BinaryTheta& theta, double c_tilde, double eta,
                               double floor, bool treated_cell_floor) {
    const double k1 = theta.k1();
    const double k2 = theta.k2();
    const double beta = theta.r10 - theta.t10;
    const double cell_treated = theta.r11 * k2;             // P(Y=1,D=1|Z=0)
    const double cell_untreated = (1.0 - theta.t00) * (1.0 - k1);  // P(Y=0,D=0|Z=1)

    require(c_tilde > 0.0, "c_tilde > 0", "c_tilde=" + num(c_tilde));
    require(c_tilde <= k2, "c_tilde <= k2", "c_tilde=" + num(c_tilde) + ", k2=" + num(k2));
    require(c_tilde < 1.0 - k1, "c_tilde < 1 - k1",
            "k1=" + num(k1) + ", c_tilde=" + num(c_tilde));
    // Exact feasibility of the mean transfer: with these two, the twin
    // defier means land on 1 and 0 and the flip identity is exact.
    require(c_tilde <= cell_treated + kTol, "c_tilde <= P(Y=1,D=1|Z=0)",
            "c_tilde=" + num(c_tilde) + ", cell=" + num(cell_treated));
    require(c_tilde <= cell_untreated + kTol, "c_tilde <= P(Y=0,D=0|Z=1)",
            "c_tilde=" + num(c_tilde) + ", cell=" + num(cell_untreated));

    const double b_twin = (k1 - k2) + c_tilde;
    const double a_twin = k2 - c_tilde;

    const double r01_twin = std::min(1.0, theta.r11 * k2 / c_tilde);
    const double t01_twin =
        std::max(0.0, 1.0 + (theta.t00 - 1.0) * (1.0 - k1) / c_tilde);

    // Admissible windows keeping every transferred mean inside [0,1]. The
    // t-side cell P(D=0|Z=1) has probability (1 - k1), which fixes the
    // denominators here.
    if (c_tilde < k2) {
        check_window(std::max(0.0, 1.0 + (theta.r11 - 1.0) * k2 / c_tilde), r01_twin,
                     std::min(1.0, theta.r11 * k2 / c_tilde), "r01_twin");
    }
    check_window(std::max(0.0, 1.0 + (theta.t00 - 1.0) * (1.0 - k1) / c_tilde), t01_twin,
                 std::min(1.0, theta.t00 * (1.0 - k1) / c_tilde), "t01_twin");

    double r11_twin = 0.0;  // unconstrained when the always-taker cell is empty
    if (c_tilde < k2) {
        r11_twin =
            clamp_unit((theta.r11 * k2 - r01_twin * c_tilde) / (k2 - c_tilde), "r11_twin");
    }
    const double r10_twin =
        clamp_unit((theta.r10 * (k1 - k2) + r01_twin * c_tilde) / b_twin, "r10_twin");
    const double t00_twin = clamp_unit(
        (theta.t00 * (1.0 - k1) - t01_twin * c_tilde) / (1.0 - k1 - c_tilde), "t00_twin");
    const double t10_twin =
        clamp_unit((theta.t10 * (k1 - k2) + t01_twin * c_tilde) / b_twin, "t10_twin");

    BinaryForgeResult result{.twin = theta};
    result.beta_base = beta;
    result.c_tilde = c_tilde;
    result.eta = eta;
    result.twin = BinaryTheta::make(a_twin, b_twin, c_tilde, theta.pz, r11_twin, r10_twin,
                                    r01_twin, 0.0, 0.0, t10_twin, t01_twin, t00_twin);
    result.mu1_twin = r10_twin - t10_twin;
    result.mu2_twin = r01_twin - t01_twin;
    result.equivalence_distance = verify_equivalence(theta.to_theta(), result.twin.to_theta());

    BinaryMembershipFlags flags;
    flags.shares_valid = a_twin >= -kTol && b_twin >= 0.0 && c_tilde >= 0.0 &&
                         a_twin + b_twin + c_tilde <= 1.0 + kTol;
    flags.k1_match = std::abs((a_twin + b_twin) - k1) <= kTol;
    flags.k2_match = std::abs((a_twin + c_tilde) - k2) <= kTol;
    flags.means_valid = true;  // BinaryTheta::make validated them
    // In the one-sided regime the treated cell shrinks with k2 and carries
    // no floor; only the untreated cell is required to stay away from zero.
    flags.cell_floors = result.twin.cell_prob_y0d0_z1() >= floor - kTol &&
                        (!treated_cell_floor ||
                         result.twin.cell_prob_y1d1_z0() >= floor - kTol);
    flags.c_within_eta = c_tilde <= eta + kTol;
    result.membership = flags;
    return result;
}

void require_binary_base(const BinaryTheta& theta, double floor) {
    require(theta.c == 0.0, "c == 0", "c=" + num(theta.c));
    const double k1 = theta.k1();
    const double k2 = theta.k2();
    require(k1 > k2, "k1 > k2", "k1=" + num(k1) + ", k2=" + num(k2));
    const double beta = theta.r10 - theta.t10;
    require(beta < 0.0, "beta < 0", "beta=" + num(beta));
    require((1.0 - theta.t00) * (1.0 - k1) >= floor, "P(Y=0,D=0|Z=1) >= floor",
            "cell=" + num((1.0 - theta.t00) * (1.0 - k1)) + ", floor=" + num(floor));
}

}  // namespace

BinaryForgeResult forge_binary_interior(const BinaryTheta& theta, double eta,
                                        double floor) {
    require_binary_base(theta, floor);
    const double k1 = theta.k1();
    const double k2 = theta.k2();
    const double beta = theta.r10 - theta.t10;
    require(theta.r11 * k2 >= floor, "P(Y=1,D=1|Z=0) >= floor",
            "cell=" + num(theta.r11 * k2) + ", floor=" + num(floor));
    require(eta >= 0.0 && eta <= k2, "0 <= eta <= k2",
            "eta=" + num(eta) + ", k2=" + num(k2));
    require(beta * (k1 - k2) + eta >= 0.0, "beta*(k1-k2) + eta >= 0",
            "beta*(k1-k2)=" + num(beta * (k1 - k2)) + ", eta=" + num(eta));
    return forge_binary(theta, std::min(k2, eta), eta, floor, true);
}

BinaryForgeResult forge_binary_onesided(const BinaryTheta& theta, double floor) {
    require_binary_base(theta, floor);
    const double k1 = theta.k1();
    const double k2 = theta.k2();
    const double beta = theta.r10 - theta.t10;
    require(k1 - k2 >= floor, "k1 - k2 >= floor",
            "k1-k2=" + num(k1 - k2) + ", floor=" + num(floor));
    const double cell = theta.r11 * k2;
    require(beta * (k1 - k2) + cell >= 0.0, "beta*(k1-k2) + P(Y=1,D=1|Z=0) >= 0",
            "beta*(k1-k2)=" + num(beta * (k1 - k2)) + ", cell=" + num(cell));
    return forge_binary(theta, cell, k2, floor, false);
}

double verify_equivalence(const Theta& theta, const Theta& twin) {
    const ObservedLaw p = observed_law(theta);
    const ObservedLaw q = observed_law(twin);
    double dist = std::max({std::abs(p.pz - q.pz), std::abs(p.k1 - q.k1),
                            std::abs(p.k2 - q.k2)});
    double joint_l1 = 0.0;
    for (int d = 0; d < 2; ++d) {
        for (int z = 0; z < 2; ++z) {
            const double pz_arm = z == 1 ? p.pz : 1.0 - p.pz;
            const double qz_arm = z == 1 ? q.pz : 1.0 - q.pz;
            const double p_cell = pz_arm * p.arm_prob(d, z);
            const double q_cell = qz_arm * q.arm_prob(d, z);
            joint_l1 += std::abs(p_cell - q_cell);
            const auto& p_law = p.y_given(d, z);
            const auto& q_law = q.y_given(d, z);
            if (p_law && q_law) {
                dist = std::max(dist, DiscreteDist::tv_distance(*p_law, *q_law));
            } else if (p_law.has_value() != q_law.has_value()) {
                // One side has an impossible cell the other realizes.
                if (std::max(p_cell, q_cell) > 0.0) dist = std::max(dist, 1.0);
            }
        }
    }
    return std::max(dist, 0.5 * joint_l1);
}

MembershipFlags verify_membership(const Theta& twin, const ForgeConfig& config,
                                  double base_beta, double base_k1, double base_k2) {
    MembershipFlags flags;
    flags.shares_valid = twin.a >= -kTol && twin.b >= 0.0 && twin.c >= 0.0 &&
                         twin.a + twin.b + twin.c <= 1.0 + kTol;
    flags.k1_match = std::abs((twin.a + twin.b) - base_k1) <= kTol;
    flags.k2_match = std::abs((twin.a + twin.c) - base_k2) <= kTol;
    flags.support_bound = true;
    for (const DiscreteDist* dist : {&twin.f11, &twin.f10, &twin.f01, &twin.f00,
                                     &twin.g11, &twin.g10, &twin.g01, &twin.g00}) {
        flags.support_bound = flags.support_bound && dist->supported_within(config.M);
    }
    try {
        flags.beta_match = std::abs(iv_beta(twin) - base_beta) <= 1e-9;
    } catch (const WeakIV&) {
        flags.beta_match = false;
    }
    double mu1 = 0.0;
    try {
        mu1 = late_complier(twin);
        flags.mu1_magnitude = std::abs(mu1) >= std::abs(base_beta) - kTol;
    } catch (const NoCompliers&) {
        flags.mu1_magnitude = false;
    }
    if (twin.c > 0.0) {
        flags.sign_agreement = sign_of(mu1) == sign_of(late_defier(twin));
    } else {
        flags.sign_agreement = true;  // no defiers: the clause is vacuous
    }
    flags.c_within_eta = twin.c >= 0.0 && twin.c <= config.eta;
    return flags;
}

}  // namespace late
