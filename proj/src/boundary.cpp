#include "late/boundary.hpp"

#include <cmath>
#include <string>

#include "late/errors.hpp"

namespace late {

namespace {

// All classifiers are stated for beta < 0; beta > 0 is the relabeled
// problem (negate outcomes, classify, negate back), which leaves every
// boundary comparison unchanged because only |beta| enters.
double oriented_beta(double beta, bool& relabeled) {
    if (beta == 0.0) throw PreconditionViolated("beta != 0", "");
    relabeled = beta > 0.0;
    return relabeled ? -beta : beta;
}

BoundaryReport make_report(Regime regime, double boundary, double compared,
                           bool sufficient_only, bool relabeled) {
    BoundaryReport report;
    report.regime = regime;
    report.boundary = boundary;
    report.compared = compared;
    report.margin = boundary - compared;
    report.verdict = report.margin > 0.0 ? Verdict::SafeSide : Verdict::DangerSide;
    report.sufficient_only = sufficient_only;
    report.relabeled = relabeled;
    report.inputs_consistent = true;
    return report;
}

}  // namespace

const char* verdict_name(Verdict v) {
    return v == Verdict::SafeSide ? "safe-side" : "danger-side";
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::InteriorK2: return "interior";
        case Regime::OneSided: return "one-sided";
        case Regime::GeneralBounded: return "general";
    }
    return "?";
}

double binary_boundary(double beta, double k1, double k2) {
    if (!(k1 > k2)) throw OrientationError();
    return std::abs(beta) * (k1 - k2);
}

BoundaryReport classify_interior(double beta, double k1, double k2, double eta) {
    bool relabeled = false;
    beta = oriented_beta(beta, relabeled);
    const double boundary = binary_boundary(beta, k1, k2);
    if (!(eta >= 0.0 && eta <= k2))
        throw PreconditionViolated("0 <= eta <= k2",
                                   "eta=" + std::to_string(eta) + ", k2=" + std::to_string(k2));
    return make_report(Regime::InteriorK2, boundary, eta, false, relabeled);
}

BoundaryReport classify_one_sided(double beta, double k1, double k2, double cell_prob) {
    bool relabeled = false;
    beta = oriented_beta(beta, relabeled);
    const double boundary = binary_boundary(beta, k1, k2);
    if (cell_prob < 0.0 || cell_prob > 1.0)
        throw InconsistentInputs("P(Y=1,D=1|Z=0) = " + std::to_string(cell_prob) +
                                 " is not a probability");
    BoundaryReport report =
        make_report(Regime::OneSided, boundary, cell_prob, false, relabeled);
    report.inputs_consistent = cell_prob <= k2;
    return report;
}

BoundaryReport classify_general_bounded(double beta, double k1, double k2, double eta,
                                        double M) {
    bool relabeled = false;
    beta = oriented_beta(beta, relabeled);
    const double boundary = binary_boundary(beta, k1, k2);
    if (!(M > 0.0)) throw PreconditionViolated("M > 0", "M=" + std::to_string(M));
    if (!(eta >= 0.0)) throw PreconditionViolated("eta >= 0", "eta=" + std::to_string(eta));
    return make_report(Regime::GeneralBounded, boundary, 2.0 * M * eta, true, relabeled);
}

}  // namespace late
