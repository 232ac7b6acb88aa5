#pragma once

namespace late {

enum class Verdict { SafeSide, DangerSide };
enum class Regime { InteriorK2, OneSided, GeneralBounded };

/// Outcome of a phase-transition classification. The boundary is
/// |beta| (k1 - k2); `compared` is the quantity held against it (the defier
/// tolerance eta, the observable cell P(Y=1,D=1|Z=0), or 2*M*eta in the
/// general bounded-outcome rule). SafeSide means strictly below the
/// boundary: the sign of the complier effect then equals the sign of beta.
/// On the DangerSide an observationally equivalent DGP with the opposite
/// sign exists (interior/one-sided regimes) or the guarantee is simply
/// lost (general regime, sufficient_only = true).
struct BoundaryReport {
    Regime regime;
    double boundary;
    double compared;
    Verdict verdict;
    double margin;           // boundary - compared; SafeSide iff margin > 0
    bool sufficient_only;    // general regime: condition is sufficient, not sharp
    bool relabeled;          // inputs arrived with beta > 0 and were negated
    bool inputs_consistent;  // one-sided regime: false when cell_prob > k2, which a
                             // population law cannot produce but noisy estimates can
};

const char* verdict_name(Verdict v);
const char* regime_name(Regime r);

/// The exact binary-outcome boundary |beta| * (k1 - k2).
/// Throws OrientationError unless k1 > k2.
double binary_boundary(double beta, double k1, double k2);

/// Interior regime (k2 away from zero): a defier share of at most eta is
/// harmless iff eta < |beta| (k1 - k2); at or above the boundary a
/// sign-flipped observationally equivalent DGP exists.
BoundaryReport classify_interior(double beta, double k1, double k2, double eta);

/// One-sided non-compliance regime: the testable safe condition
/// P(Y=1, D=1 | Z=0) < |beta| (k1 - k2). A cell probability above k2 is
/// impossible for one population law yet common for estimates pooled from
/// different samples; it lowers inputs_consistent instead of erroring.
/// Throws InconsistentInputs only for cell_prob outside [0, 1].
BoundaryReport classify_one_sided(double beta, double k1, double k2, double cell_prob);

/// General bounded-outcome rule: safe when 2 M eta < |beta| (k1 - k2).
/// Conservative (sufficient only): DangerSide here means no guarantee,
/// not a constructed counterexample.
BoundaryReport classify_general_bounded(double beta, double k1, double k2, double eta,
                                        double M);

}  // namespace late
