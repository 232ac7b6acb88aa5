#include "late/discrete_dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "late/errors.hpp"
#include "late/rng.hpp"

namespace late {

namespace {

// Shared accumulation for mixture / linear_combination: sum weighted masses
// on the merged support, then validate under the given negativity policy.
std::vector<Atom> accumulate(std::span<const std::pair<const DiscreteDist*, double>> parts) {
    std::vector<Atom> raw;
    for (const auto& [dist, weight] : parts) {
        if (weight == 0.0) continue;
        for (const Atom& atom : dist->atoms()) {
            raw.push_back({atom.location, atom.mass * weight});
        }
    }
    std::sort(raw.begin(), raw.end(),
              [](const Atom& x, const Atom& y) { return x.location < y.location; });
    std::vector<Atom> merged;
    for (const Atom& atom : raw) {
        if (!merged.empty() &&
            atom.location - merged.back().location <= DiscreteDist::kMergeTol) {
            merged.back().mass += atom.mass;
        } else {
            merged.push_back(atom);
        }
    }
    return merged;
}

}  // namespace

DiscreteDist DiscreteDist::from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw InvalidDistribution("distribution needs at least one atom");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& x, const Atom& y) { return x.location < y.location; });
    std::vector<Atom> merged;
    for (const Atom& atom : atoms) {
        if (!std::isfinite(atom.location) || !std::isfinite(atom.mass))
            throw InvalidDistribution("non-finite atom");
        if (atom.mass < 0.0)
            throw InvalidDistribution("negative atom mass " + std::to_string(atom.mass));
        if (atom.mass == 0.0) continue;
        if (!merged.empty() && atom.location - merged.back().location <= kMergeTol) {
            merged.back().mass += atom.mass;
        } else {
            merged.push_back(atom);
        }
    }
    if (merged.empty()) throw InvalidDistribution("all atom masses are zero");
    double total = 0.0;
    for (const Atom& atom : merged) total += atom.mass;
    if (std::abs(total - 1.0) > kMassTol)
        throw InvalidDistribution("atom masses sum to " + std::to_string(total));
    DiscreteDist dist;
    dist.atoms_ = std::move(merged);
    return dist;
}

DiscreteDist DiscreteDist::point_mass(double location) {
    return from_atoms({{location, 1.0}});
}

double DiscreteDist::mean() const {
    double m = 0.0;
    for (const Atom& atom : atoms_) m += atom.location * atom.mass;
    return m;
}

bool DiscreteDist::supported_within(double bound, double tol) const {
    return min_location() >= -bound - tol && max_location() <= bound + tol;
}

double DiscreteDist::cdf(double y) const {
    double acc = 0.0;
    for (const Atom& atom : atoms_) {
        if (atom.location > y) break;
        acc += atom.mass;
    }
    return acc;
}

double DiscreteDist::quantile(double eps) const {
    if (!(eps > 0.0 && eps < 1.0))
        throw PreconditionViolated("0 < eps < 1", "eps=" + std::to_string(eps));
    double acc = 0.0;
    for (const Atom& atom : atoms_) {
        acc += atom.mass;
        if (acc >= eps) return atom.location;
    }
    // Masses sum to 1 within tolerance; a rounding shortfall lands here.
    return atoms_.back().location;
}

DiscreteDist DiscreteDist::condition_greater(double b) const {
    std::vector<Atom> kept;
    double mass = 0.0;
    for (const Atom& atom : atoms_) {
        if (atom.location > b) {
            kept.push_back(atom);
            mass += atom.mass;
        }
    }
    if (kept.empty() || mass <= 0.0)
        throw InvalidDistribution("no mass above " + std::to_string(b));
    for (Atom& atom : kept) atom.mass /= mass;
    return from_atoms(std::move(kept));
}

DiscreteDist DiscreteDist::condition_at_most(double b) const {
    std::vector<Atom> kept;
    double mass = 0.0;
    for (const Atom& atom : atoms_) {
        if (atom.location <= b) {
            kept.push_back(atom);
            mass += atom.mass;
        }
    }
    if (kept.empty() || mass <= 0.0)
        throw InvalidDistribution("no mass at or below " + std::to_string(b));
    for (Atom& atom : kept) atom.mass /= mass;
    return from_atoms(std::move(kept));
}

DiscreteDist DiscreteDist::mixture(
    std::span<const std::pair<const DiscreteDist*, double>> parts) {
    for (const auto& [dist, weight] : parts) {
        (void)dist;
        if (weight < 0.0)
            throw InvalidDistribution("mixture weight " + std::to_string(weight) +
                                      " is negative");
    }
    return from_atoms(accumulate(parts));
}

DiscreteDist DiscreteDist::linear_combination(
    std::span<const std::pair<const DiscreteDist*, double>> parts) {
    std::vector<Atom> merged = accumulate(parts);
    std::vector<Atom> kept;
    double total = 0.0;
    for (const Atom& atom : merged) {
        if (atom.mass < -kMassTol)
            throw ConstructionDegenerate("signed mixture produced mass " +
                                         std::to_string(atom.mass) + " at " +
                                         std::to_string(atom.location));
        if (atom.mass <= 0.0) continue;  // clamp [-kMassTol, 0) to zero
        kept.push_back(atom);
        total += atom.mass;
    }
    if (kept.empty()) throw ConstructionDegenerate("signed mixture has no positive mass");
    if (std::abs(total - 1.0) > kMassTol)
        throw ConstructionDegenerate("signed mixture mass " + std::to_string(total));
    for (Atom& atom : kept) atom.mass /= total;
    return from_atoms(std::move(kept));
}

double DiscreteDist::tv_distance(const DiscreteDist& p, const DiscreteDist& q) {
    std::size_t i = 0;
    std::size_t j = 0;
    double l1 = 0.0;
    while (i < p.atoms_.size() || j < q.atoms_.size()) {
        if (j == q.atoms_.size()) {
            l1 += std::abs(p.atoms_[i++].mass);
        } else if (i == p.atoms_.size()) {
            l1 += std::abs(q.atoms_[j++].mass);
        } else {
            double gap = p.atoms_[i].location - q.atoms_[j].location;
            if (std::abs(gap) <= kMergeTol) {
                l1 += std::abs(p.atoms_[i++].mass - q.atoms_[j++].mass);
            } else if (gap < 0.0) {
                l1 += std::abs(p.atoms_[i++].mass);
            } else {
                l1 += std::abs(q.atoms_[j++].mass);
            }
        }
    }
    return 0.5 * l1;
}

double DiscreteDist::sample(Rng& rng) const {
    double u = rng.uniform01();
    double acc = 0.0;
    for (const Atom& atom : atoms_) {
        acc += atom.mass;
        if (u < acc) return atom.location;
    }
    return atoms_.back().location;
}

double quantile(const DiscreteDist& dist, double eps) { return dist.quantile(eps); }

}  // namespace late
