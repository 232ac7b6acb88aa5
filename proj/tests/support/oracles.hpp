// Test-only oracles, independent of the library's computation paths: the
// observed law is rebuilt by exhaustive enumeration over (type, Y(1), Y(0), Z)
// and compared cell by cell; quantiles by linear scan; effects by pairwise
// enumeration over potential-outcome atoms.
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "late/dgp.hpp"

namespace late::testing {

struct EnumeratedObserved {
    double pz = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    // joint[d][z]: location -> P(Y = location, D = d, Z = z)
    std::array<std::array<std::map<double, double>, 2>, 2> joint;
    std::array<std::array<double, 2>, 2> cell_prob{};  // P(D=d, Z=z)
};

inline EnumeratedObserved enumerate_observed(const Theta& theta) {
    EnumeratedObserved out;
    out.pz = theta.pz;
    struct TypeRow {
        double share;
        int d1;
        int d0;
        const DiscreteDist* f;
        const DiscreteDist* g;
    };
    const std::array<TypeRow, 4> types = {{
        {theta.a, 1, 1, &theta.f11, &theta.g11},
        {theta.b, 1, 0, &theta.f10, &theta.g10},
        {theta.c, 0, 1, &theta.f01, &theta.g01},
        {theta.never_taker(), 0, 0, &theta.f00, &theta.g00},
    }};
    for (const TypeRow& type : types) {
        if (type.share <= 0.0) continue;
        for (int z = 0; z < 2; ++z) {
            const double pz_arm = z == 1 ? theta.pz : 1.0 - theta.pz;
            const int d = z == 1 ? type.d1 : type.d0;
            const DiscreteDist* ylaw = d == 1 ? type.f : type.g;
            for (const Atom& atom : ylaw->atoms()) {
                out.joint[d][z][atom.location] += type.share * pz_arm * atom.mass;
            }
            out.cell_prob[d][z] += type.share * pz_arm;
        }
    }
    out.k1 = out.cell_prob[1][1] / theta.pz;
    out.k2 = out.cell_prob[1][0] / (1.0 - theta.pz);
    return out;
}

/// Largest discrepancy between the enumerated observed law and an
/// ObservedLaw: k1/k2/pz gaps plus, per (d,z) cell, the atom-wise gap of
/// the conditional pmfs (locations matched within 1e-12).
inline double enumeration_mismatch(const EnumeratedObserved& oracle,
                                   const ObservedLaw& law) {
    double worst = std::max({std::abs(oracle.pz - law.pz), std::abs(oracle.k1 - law.k1),
                             std::abs(oracle.k2 - law.k2)});
    for (int d = 0; d < 2; ++d) {
        for (int z = 0; z < 2; ++z) {
            const double cell = oracle.cell_prob[d][z];
            const auto& observed = law.y_given(d, z);
            if (cell <= 0.0) {
                if (observed.has_value()) worst = std::max(worst, 1.0);
                continue;
            }
            if (!observed.has_value()) {
                worst = std::max(worst, 1.0);
                continue;
            }
            // conditional pmf from the oracle's joint
            std::vector<Atom> expected;
            for (const auto& [loc, mass] : oracle.joint[d][z])
                expected.push_back({loc, mass / cell});
            const auto& actual = observed->atoms();
            std::size_t i = 0;
            std::size_t j = 0;
            while (i < expected.size() || j < actual.size()) {
                if (j == actual.size()) {
                    worst = std::max(worst, std::abs(expected[i++].mass));
                } else if (i == expected.size()) {
                    worst = std::max(worst, std::abs(actual[j++].mass));
                } else {
                    const double gap = expected[i].location - actual[j].location;
                    if (std::abs(gap) <= 1e-12) {
                        worst = std::max(worst, std::abs(expected[i++].mass - actual[j++].mass));
                    } else if (gap < 0.0) {
                        worst = std::max(worst, std::abs(expected[i++].mass));
                    } else {
                        worst = std::max(worst, std::abs(actual[j++].mass));
                    }
                }
            }
        }
    }
    return worst;
}

/// E[Y | Z = z] from the enumerated joint.
inline double enumerated_mean_y_given_z(const EnumeratedObserved& oracle, int z) {
    const double pz_arm = z == 1 ? oracle.pz : 1.0 - oracle.pz;
    double sum = 0.0;
    for (int d = 0; d < 2; ++d) {
        for (const auto& [loc, mass] : oracle.joint[d][z]) sum += loc * mass;
    }
    return sum / pz_arm;
}

/// Wald ratio computed entirely from the enumeration oracle.
inline double enumerated_wald(const EnumeratedObserved& oracle) {
    return (enumerated_mean_y_given_z(oracle, 1) - enumerated_mean_y_given_z(oracle, 0)) /
           (oracle.k1 - oracle.k2);
}

/// E[Y(1) - Y(0)] by pairwise enumeration over the two atom lists
/// (conditionally independent potential outcomes).
inline double enumerate_effect(const DiscreteDist& f, const DiscreteDist& g) {
    double total = 0.0;
    for (const Atom& y1 : f.atoms()) {
        for (const Atom& y0 : g.atoms()) {
            total += (y1.location - y0.location) * y1.mass * y0.mass;
        }
    }
    return total;
}

/// Linear-scan quantile over the CDF, written without reference to the
/// library implementation.
inline double scan_quantile(const DiscreteDist& dist, double eps) {
    double cumulative = 0.0;
    for (const Atom& atom : dist.atoms()) {
        cumulative += atom.mass;
        if (cumulative >= eps) return atom.location;
    }
    return dist.atoms().back().location;
}

}  // namespace late::testing
