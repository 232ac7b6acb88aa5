#include "late/dgp.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "late/errors.hpp"
#include "late/rng.hpp"

namespace late {

namespace {

constexpr double kShareTol = 1e-12;

void check_share(double s, const char* name) {
    if (!std::isfinite(s) || s < 0.0 || s > 1.0)
        throw InvalidTheta(std::string(name) + " = " + std::to_string(s) +
                           " is not a probability");
}

void check_support(const DiscreteDist& dist, double M, const char* name) {
    if (!dist.supported_within(M))
        throw InvalidTheta(std::string(name) + " has support outside [-M, M], M = " +
                           std::to_string(M));
}

void check_mean(double m, const char* name) {
    if (!std::isfinite(m) || m < 0.0 || m > 1.0)
        throw InvalidTheta(std::string(name) + " = " + std::to_string(m) +
                           " is not in [0,1]");
}

DiscreteDist bernoulli_dist(double p) {
    if (p <= 0.0) return DiscreteDist::point_mass(0.0);
    if (p >= 1.0) return DiscreteDist::point_mass(1.0);
    return DiscreteDist::from_atoms({{0.0, 1.0 - p}, {1.0, p}});
}

}  // namespace

Theta Theta::make(double a, double b, double c, double pz, double M, DiscreteDist f11,
                  DiscreteDist f10, DiscreteDist f01, DiscreteDist f00, DiscreteDist g11,
                  DiscreteDist g10, DiscreteDist g01, DiscreteDist g00) {
    check_share(a, "a");
    check_share(b, "b");
    check_share(c, "c");
    if (a + b + c > 1.0 + kShareTol)
        throw InvalidTheta("a + b + c = " + std::to_string(a + b + c) + " exceeds 1");
    if (!(pz > 0.0 && pz < 1.0))
        throw InvalidTheta("pz = " + std::to_string(pz) + " must lie in (0,1)");
    if (!(M > 0.0)) throw InvalidTheta("M must be positive");
    check_support(f11, M, "f11");
    check_support(f10, M, "f10");
    check_support(f01, M, "f01");
    check_support(f00, M, "f00");
    check_support(g11, M, "g11");
    check_support(g10, M, "g10");
    check_support(g01, M, "g01");
    check_support(g00, M, "g00");
    return Theta{a,
                 b,
                 c,
                 pz,
                 M,
                 std::move(f11),
                 std::move(f10),
                 std::move(f01),
                 std::move(f00),
                 std::move(g11),
                 std::move(g10),
                 std::move(g01),
                 std::move(g00)};
}

BinaryTheta BinaryTheta::make(double a, double b, double c, double pz, double r11,
                              double r10, double r01, double r00, double t11, double t10,
                              double t01, double t00) {
    check_share(a, "a");
    check_share(b, "b");
    check_share(c, "c");
    if (a + b + c > 1.0 + kShareTol)
        throw InvalidTheta("a + b + c = " + std::to_string(a + b + c) + " exceeds 1");
    if (!(pz > 0.0 && pz < 1.0))
        throw InvalidTheta("pz = " + std::to_string(pz) + " must lie in (0,1)");
    check_mean(r11, "r11");
    check_mean(r10, "r10");
    check_mean(r01, "r01");
    check_mean(r00, "r00");
    check_mean(t11, "t11");
    check_mean(t10, "t10");
    check_mean(t01, "t01");
    check_mean(t00, "t00");
    return BinaryTheta{a, b, c, pz, r11, r10, r01, r00, t11, t10, t01, t00};
}

Theta BinaryTheta::to_theta() const {
    return Theta::make(a, b, c, pz, 1.0, bernoulli_dist(r11), bernoulli_dist(r10),
                       bernoulli_dist(r01), bernoulli_dist(r00), bernoulli_dist(t11),
                       bernoulli_dist(t10), bernoulli_dist(t01), bernoulli_dist(t00));
}

std::optional<double> BinaryTheta::observed_mean(int d, int z) const {
    const double nt = never_taker();
    double denom;
    double num;
    if (d == 1 && z == 1) {  // always-takers + compliers
        denom = a + b;
        num = r11 * a + r10 * b;
    } else if (d == 1 && z == 0) {  // always-takers + defiers
        denom = a + c;
        num = r11 * a + r01 * c;
    } else if (d == 0 && z == 1) {  // defiers + never-takers
        denom = c + nt;
        num = t01 * c + t00 * nt;
    } else {  // compliers + never-takers
        denom = b + nt;
        num = t10 * b + t00 * nt;
    }
    if (denom <= 0.0) return std::nullopt;
    return num / denom;
}

double BinaryTheta::cell_prob_y1d1_z0() const { return r11 * a + r01 * c; }

double BinaryTheta::cell_prob_y0d0_z1() const {
    return (1.0 - t01) * c + (1.0 - t00) * never_taker();
}

double ObservedLaw::arm_prob(int d, int z) const {
    double take = z == 1 ? k1 : k2;
    return d == 1 ? take : 1.0 - take;
}

double ObservedLaw::mean_y_given_z(int z) const {
    double m = 0.0;
    for (int d = 0; d < 2; ++d) {
        double p = arm_prob(d, z);
        if (p <= 0.0) continue;
        m += p * law[d][z]->mean();
    }
    return m;
}

double ObservedLaw::wald_beta() const {
    if (k1 == k2) throw WeakIV();
    return (mean_y_given_z(1) - mean_y_given_z(0)) / (k1 - k2);
}

double late_complier(const Theta& theta) {
    if (theta.b <= 0.0) throw NoCompliers();
    return theta.f10.mean() - theta.g10.mean();
}

double late_complier(const BinaryTheta& theta) {
    if (theta.b <= 0.0) throw NoCompliers();
    return theta.r10 - theta.t10;
}

double late_defier(const Theta& theta) {
    if (theta.c <= 0.0) throw NoDefiers();
    return theta.f01.mean() - theta.g01.mean();
}

double late_defier(const BinaryTheta& theta) {
    if (theta.c <= 0.0) throw NoDefiers();
    return theta.r01 - theta.t01;
}

namespace {

template <typename T>
double iv_beta_impl(const T& theta) {
    if (theta.b == theta.c) throw WeakIV();
    double num = 0.0;
    if (theta.b > 0.0) num += late_complier(theta) * theta.b;
    if (theta.c > 0.0) num -= late_defier(theta) * theta.c;
    return num / (theta.b - theta.c);
}

}  // namespace

double iv_beta(const Theta& theta) { return iv_beta_impl(theta); }
double iv_beta(const BinaryTheta& theta) { return iv_beta_impl(theta); }

ObservedLaw observed_law(const Theta& theta) {
    const double a = theta.a;
    const double b = theta.b;
    const double c = theta.c;
    const double nt = theta.never_taker();

    ObservedLaw out;
    out.pz = theta.pz;
    out.k1 = a + b;
    out.k2 = a + c;

    auto mix = [](std::initializer_list<std::pair<const DiscreteDist*, double>> parts)
        -> std::optional<DiscreteDist> {
        double total = 0.0;
        for (const auto& [dist, w] : parts) {
            (void)dist;
            total += w;
        }
        if (total <= 0.0) return std::nullopt;
        std::vector<std::pair<const DiscreteDist*, double>> scaled;
        for (const auto& [dist, w] : parts) {
            if (w > 0.0) scaled.emplace_back(dist, w / total);
        }
        return DiscreteDist::mixture(scaled);
    };

    out.law[1][1] = mix({{&theta.f11, a}, {&theta.f10, b}});
    out.law[1][0] = mix({{&theta.f11, a}, {&theta.f01, c}});
    out.law[0][1] = mix({{&theta.g01, c}, {&theta.g00, nt}});
    out.law[0][0] = mix({{&theta.g10, b}, {&theta.g00, nt}});
    return out;
}

SampleData sample(const Theta& theta, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw PreconditionViolated("n >= 1", "n=0");
    Rng rng(seed);
    SampleData data;
    data.rows.reserve(n);
    const double cum_a = theta.a;
    const double cum_ab = theta.a + theta.b;
    const double cum_abc = theta.a + theta.b + theta.c;
    for (std::size_t i = 0; i < n; ++i) {
        const bool z = rng.bernoulli(theta.pz);
        const double u = rng.uniform01();
        // type: 0 always, 1 complier, 2 defier, 3 never
        int type;
        if (u < cum_a)
            type = 0;
        else if (u < cum_ab)
            type = 1;
        else if (u < cum_abc)
            type = 2;
        else
            type = 3;
        bool d;
        switch (type) {
            case 0: d = true; break;
            case 1: d = z; break;
            case 2: d = !z; break;
            default: d = false; break;
        }
        const DiscreteDist* ylaw;
        if (d) {
            ylaw = type == 0 ? &theta.f11
                 : type == 1 ? &theta.f10
                 : type == 2 ? &theta.f01
                             : &theta.f00;
        } else {
            ylaw = type == 0 ? &theta.g11
                 : type == 1 ? &theta.g10
                 : type == 2 ? &theta.g01
                             : &theta.g00;
        }
        data.rows.push_back({ylaw->sample(rng), static_cast<std::uint8_t>(d),
                             static_cast<std::uint8_t>(z)});
    }
    return data;
}

SampleData sample(const BinaryTheta& theta, std::size_t n, std::uint64_t seed) {
    return sample(theta.to_theta(), n, seed);
}

}  // namespace late
