#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace late {

class Rng;

/// One support point of a finite atomic distribution.
struct Atom {
    double location;
    double mass;

    bool operator==(const Atom&) const = default;
};

/// Finite atomic outcome distribution. Locations are strictly increasing,
/// every mass is positive, and masses sum to one within kMassTol. Because
/// every distribution in the library is atomic, mixtures, truncations and
/// quantiles are exact, so equality of laws can be tested at 1e-12 rather
/// than approximately.
class DiscreteDist {
public:
    static constexpr double kMassTol = 1e-12;
    /// Locations closer than this are treated as the same support point.
    static constexpr double kMergeTol = 1e-12;

    /// Builds from an arbitrary atom list: sorts by location, merges atoms
    /// within kMergeTol, drops zero masses, validates. Throws
    /// InvalidDistribution on negative masses or a mass sum away from one.
    static DiscreteDist from_atoms(std::vector<Atom> atoms);

    static DiscreteDist point_mass(double location);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    double mean() const;
    double min_location() const { return atoms_.front().location; }
    double max_location() const { return atoms_.back().location; }
    bool supported_within(double bound, double tol = 1e-12) const;

    /// P(Y <= y).
    double cdf(double y) const;

    /// inf{ t : P(Y <= t) >= eps }, exact on atoms. Requires eps in (0,1).
    double quantile(double eps) const;

    /// Law of Y given Y > b. Throws InvalidDistribution if no mass above b.
    DiscreteDist condition_greater(double b) const;

    /// Law of Y given Y <= b. Throws InvalidDistribution if no mass at or below b.
    DiscreteDist condition_at_most(double b) const;

    /// Convex mixture. Weights must be nonnegative; zero-weight parts are
    /// skipped; atoms at equal locations merge.
    static DiscreteDist mixture(std::span<const std::pair<const DiscreteDist*, double>> parts);

    /// Signed combination used by the forge constructions (weights may be
    /// negative but must sum to one). Result masses in [-kMassTol, 0) are
    /// clamped to zero and the distribution renormalized by at most
    /// kMassTol; a mass below -kMassTol throws ConstructionDegenerate.
    static DiscreteDist linear_combination(
        std::span<const std::pair<const DiscreteDist*, double>> parts);

    /// Total-variation distance, half the L1 gap on the merged support.
    static double tv_distance(const DiscreteDist& p, const DiscreteDist& q);

    /// Inverse-CDF draw.
    double sample(Rng& rng) const;

    bool operator==(const DiscreteDist& other) const = default;

private:
    DiscreteDist() = default;
    std::vector<Atom> atoms_;
};

/// Free-function spelling of the left-continuous infimum quantile.
double quantile(const DiscreteDist& dist, double eps);

}  // namespace late
