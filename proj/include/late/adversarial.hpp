#pragma once

#include "late/dgp.hpp"

namespace late {

/// Parameters of the continuous-outcome forge. (eps1, eps2) define the
/// quantile-overlap class the base DGP must belong to; eta is the defier
/// tolerance granted to the twin; M bounds the outcome support; delta_rule
/// places delta inside its open admissible interval
/// (0, eps2 - 3 (k1-k2) |beta| / eta) at the given fraction.
struct ForgeConfig {
    double eps1 = 0.2;
    double eps2 = 0.1;
    double M = 1.0;
    double eta = 0.0;
    double delta_rule = 0.5;
};

/// Per-clause membership checks of the constrained parameter class the twin
/// must inhabit: shares valid, observed take-up rates preserved, outcome
/// support bounded, IV estimand reproduced, |mu1| >= |beta|, mu1 and mu2 of
/// one sign, defier share within eta.
struct MembershipFlags {
    bool shares_valid = false;
    bool k1_match = false;
    bool k2_match = false;
    bool support_bound = false;
    bool beta_match = false;
    bool mu1_magnitude = false;
    bool sign_agreement = false;
    bool c_within_eta = false;

    bool all() const {
        return shares_valid && k1_match && k2_match && support_bound && beta_match &&
               mu1_magnitude && sign_agreement && c_within_eta;
    }
};

/// A forged adversarial twin plus its machine-checked certificate.
struct ForgeResult {
    Theta twin;
    double beta_base = 0.0;     // IV estimand of the base DGP (= mu1 there)
    double b1 = 0.0;            // upper truncation point for the twin defier Y(1) law
    double b2 = 0.0;            // lower truncation point for the twin defier Y(0) law
    double delta = 0.0;
    double c_tilde = 0.0;
    double mu1_twin = 0.0;
    double mu2_twin = 0.0;
    /// mu2 of the twin under the alternative (non-truncated) defier Y(0)
    /// law g00 — the discarded reading of the construction, surfaced for
    /// diagnostics.
    double mu2_twin_alt_g00 = 0.0;
    double equivalence_distance = 0.0;
    MembershipFlags membership;
};

/// Builds an observationally equivalent twin of a no-defier base DGP with
/// beta < 0 such that the twin has defier share eta and both of its
/// effects strictly exceed -beta > 0: the data cannot tell a harmful
/// treatment from a beneficial one. Preconditions (each reported by name
/// on failure): c = 0; beta < 0; 0 < eta < eps1 * min{k2, 1-k1, k1-k2};
/// 3 |beta| / eta < eps2 / (k1 - k2); quantile overlap
/// Q1(1-eps1) - Q2(eps1) > eps2; support within [-M, M].
ForgeResult forge_continuous(const Theta& theta, const ForgeConfig& config);

/// Binary-outcome membership checks (the binary parameter class replaces
/// the magnitude/sign clauses with observable cell floors).
struct BinaryMembershipFlags {
    bool shares_valid = false;
    bool k1_match = false;
    bool k2_match = false;
    bool means_valid = false;
    bool cell_floors = false;   // both observable cells at or above the floor
    bool c_within_eta = false;

    bool all() const {
        return shares_valid && k1_match && k2_match && means_valid && cell_floors &&
               c_within_eta;
    }
};

struct BinaryForgeResult {
    BinaryTheta twin;
    double beta_base = 0.0;
    double c_tilde = 0.0;
    double eta = 0.0;           // tolerance the twin was forged against
    double mu1_twin = 0.0;
    double mu2_twin = 0.0;
    double equivalence_distance = 0.0;
    BinaryMembershipFlags membership;
};

/// Binary-outcome twin for the interior regime (k2 away from zero).
/// Requires the DangerSide inequality beta (k1 - k2) + eta >= 0 plus the
/// exact feasibility of the mean transfer:
///   eta <= P(Y=1,D=1|Z=0) and eta <= P(Y=0,D=0|Z=1),
/// the finite-sample form of the cell floors. Sets c~ = min{k2, eta}.
BinaryForgeResult forge_binary_interior(const BinaryTheta& theta, double eta,
                                        double floor = 0.05);

/// Binary-outcome twin for the one-sided regime: c~ = P(Y=1,D=1|Z=0)
/// itself. Requires cell_prob >= |beta| (k1 - k2) (the DangerSide of the
/// testable safe region) and cell_prob <= P(Y=0,D=0|Z=1).
BinaryForgeResult forge_binary_onesided(const BinaryTheta& theta, double floor = 0.05);

/// Max over the four Y|(D,Z) total-variation distances, the (D,Z) joint
/// total-variation distance, and the |k1|, |k2|, |pz| gaps. Zero iff the
/// two DGPs are observationally equivalent.
double verify_equivalence(const Theta& theta, const Theta& twin);

/// Evaluates every membership clause of the constrained class at the given
/// base quantities. All flags true for any successful forge.
MembershipFlags verify_membership(const Theta& twin, const ForgeConfig& config,
                                  double base_beta, double base_k1, double base_k2);

}  // namespace late
