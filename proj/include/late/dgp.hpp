#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "late/discrete_dist.hpp"
#include "late/sample_data.hpp"

namespace late {

/// Full potential-outcomes DGP. The population splits into four compliance
/// types by (D(1), D(0)): always-takers (1,1) with share a, compliers (1,0)
/// with share b, defiers (0,1) with share c, never-takers (0,0) with the
/// remainder. Each type carries one law for Y(1) (the f's) and one for Y(0)
/// (the g's), indexed by the type's (d1,d0) pair; Y(1) and Y(0) are
/// conditionally independent given type. All outcome laws live in [-M, M].
struct Theta {
    double a;   // always-taker share
    double b;   // complier share
    double c;   // defier share
    double pz;  // P(Z = 1)
    double M;   // outcome bound

    DiscreteDist f11, f10, f01, f00;  // Y(1) | type
    DiscreteDist g11, g10, g01, g00;  // Y(0) | type

    double never_taker() const { return 1.0 - a - b - c; }

    /// Validating factory; throws InvalidTheta.
    static Theta make(double a, double b, double c, double pz, double M,
                      DiscreteDist f11, DiscreteDist f10, DiscreteDist f01,
                      DiscreteDist f00, DiscreteDist g11, DiscreteDist g10,
                      DiscreteDist g01, DiscreteDist g00);
};

/// Bernoulli-outcome DGP: the eight conditional laws collapse to the eight
/// means r (for Y(1)) and t (for Y(0)).
struct BinaryTheta {
    double a, b, c, pz;
    double r11, r10, r01, r00;  // E[Y(1) | type]
    double t11, t10, t01, t00;  // E[Y(0) | type]

    static BinaryTheta make(double a, double b, double c, double pz, double r11,
                            double r10, double r01, double r00, double t11,
                            double t10, double t01, double t00);

    /// Equivalent Theta with two-atom outcome laws, M = 1.
    Theta to_theta() const;

    double never_taker() const { return 1.0 - a - b - c; }
    double k1() const { return a + b; }
    double k2() const { return a + c; }

    /// Observed conditional mean E[Y | D=d, Z=z]; nullopt when P(D=d|Z=z)=0.
    std::optional<double> observed_mean(int d, int z) const;

    /// P(Y=1, D=1 | Z=0). For c = 0 this is r11 * k2.
    double cell_prob_y1d1_z0() const;
    /// P(Y=0, D=0 | Z=1).
    double cell_prob_y0d0_z1() const;
};

/// Everything the observable (Y, D, Z) distribution pins down: the
/// instrument split, the take-up rates k1 = P(D=1|Z=1), k2 = P(D=1|Z=0),
/// and the four conditional outcome laws Y | (D, Z). Two DGPs are
/// observationally equivalent exactly when these coincide.
struct ObservedLaw {
    double pz;
    double k1;
    double k2;
    /// law[d][z]; empty when P(D=d|Z=z) = 0.
    std::array<std::array<std::optional<DiscreteDist>, 2>, 2> law;

    const std::optional<DiscreteDist>& y_given(int d, int z) const { return law[d][z]; }

    /// P(D=d | Z=z).
    double arm_prob(int d, int z) const;

    double mean_y_given_z(int z) const;
    double mean_d_given_z(int z) const { return z == 1 ? k1 : k2; }

    /// Wald ratio [E(Y|Z=1)-E(Y|Z=0)] / [k1-k2]; throws WeakIV when k1 == k2.
    double wald_beta() const;
};

/// Complier effect mu1 = E[Y(1)-Y(0) | complier]. Throws NoCompliers when b = 0.
double late_complier(const Theta& theta);
double late_complier(const BinaryTheta& theta);

/// Defier effect mu2. Throws NoDefiers when c = 0.
double late_defier(const Theta& theta);
double late_defier(const BinaryTheta& theta);

/// IV estimand beta = (mu1 b - mu2 c) / (b - c). Throws WeakIV when b = c.
double iv_beta(const Theta& theta);
double iv_beta(const BinaryTheta& theta);

/// Exact observed law: k1 = a+b, k2 = a+c, and each conditional outcome law
/// the atom-wise type mixture. Cells with zero probability come back empty.
ObservedLaw observed_law(const Theta& theta);

/// n iid draws of (Y, D, Z): Z ~ Bernoulli(pz), type ~ (a,b,c,rest),
/// D from type and Z, Y from the type's f (when D=1) or g (when D=0).
/// Deterministic given seed.
SampleData sample(const Theta& theta, std::size_t n, std::uint64_t seed);
SampleData sample(const BinaryTheta& theta, std::size_t n, std::uint64_t seed);

}  // namespace late
