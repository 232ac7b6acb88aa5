#include "late/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "late/errors.hpp"
#include "late/rng.hpp"

namespace late {

Statistic statistic_from_name(std::string_view name) {
    if (name == "beta") return Statistic::Beta;
    if (name == "itt") return Statistic::Itt;
    if (name == "gamma") return Statistic::Gamma;
    if (name == "lower-bound") return Statistic::LowerBound;
    if (name == "k1") return Statistic::K1;
    if (name == "k2") return Statistic::K2;
    if (name == "pz") return Statistic::Pz;
    if (name == "cell-prob") return Statistic::CellProb;
    throw UnknownProcedure("unknown statistic '" + std::string(name) + "'");
}

std::string_view statistic_name(Statistic stat) {
    switch (stat) {
        case Statistic::Beta: return "beta";
        case Statistic::Itt: return "itt";
        case Statistic::Gamma: return "gamma";
        case Statistic::LowerBound: return "lower-bound";
        case Statistic::K1: return "k1";
        case Statistic::K2: return "k2";
        case Statistic::Pz: return "pz";
        case Statistic::CellProb: return "cell-prob";
    }
    return "?";
}

namespace {

// Single pass over rows; shared between estimate() and the bootstrap
// resampling loop so resamples never materialize a copied dataset.
struct ArmAccumulator {
    std::size_t n1 = 0;
    std::size_t n0 = 0;
    double sum_y1 = 0.0;
    double sum_y0 = 0.0;
    std::size_t sum_d1 = 0;
    std::size_t sum_d0 = 0;
    std::size_t y1d1_z0 = 0;
    bool y_binary = true;

    void add(const SampleRow& row) {
        if (row.z) {
            ++n1;
            sum_y1 += row.y;
            sum_d1 += row.d;
        } else {
            ++n0;
            sum_y0 += row.y;
            sum_d0 += row.d;
            if (row.y == 1.0 && row.d) ++y1d1_z0;
        }
        if (row.y != 0.0 && row.y != 1.0) y_binary = false;
    }

    Estimates finalize() const {
        if (n1 == 0 || n0 == 0) throw DegenerateInstrument();
        Estimates est;
        est.n = n1 + n0;
        est.pz_hat = static_cast<double>(n1) / static_cast<double>(est.n);
        est.k1_hat = static_cast<double>(sum_d1) / static_cast<double>(n1);
        est.k2_hat = static_cast<double>(sum_d0) / static_cast<double>(n0);
        est.itt_hat = sum_y1 / static_cast<double>(n1) - sum_y0 / static_cast<double>(n0);
        est.y_binary = y_binary;
        if (est.k1_hat != est.k2_hat) {
            est.beta_hat = est.itt_hat / (est.k1_hat - est.k2_hat);
        }
        if (est.k1_hat + est.k2_hat > 0.0) {
            est.gamma_hat = std::abs(est.k1_hat - est.k2_hat) / (est.k1_hat + est.k2_hat);
            if (est.beta_hat)
                est.lower_bound_hat = std::abs(*est.beta_hat) * *est.gamma_hat;
        }
        if (y_binary) {
            est.cell_prob_hat = static_cast<double>(y1d1_z0) / static_cast<double>(n0);
        }
        return est;
    }
};

}  // namespace

Estimates estimate(const SampleData& data) {
    if (data.empty()) throw InconsistentInputs("empty sample");
    ArmAccumulator acc;
    for (const SampleRow& row : data.rows) acc.add(row);
    return acc.finalize();
}

double cell_prob(const SampleData& data) {
    if (data.empty()) throw InconsistentInputs("empty sample");
    std::size_t n0 = 0;
    std::size_t hits = 0;
    for (const SampleRow& row : data.rows) {
        if (row.y != 0.0 && row.y != 1.0)
            throw NotBinary("cell probability needs 0/1 outcomes; dichotomize first");
        if (!row.z) {
            ++n0;
            if (row.y == 1.0 && row.d) ++hits;
        }
    }
    if (n0 == 0) throw DegenerateInstrument();
    return static_cast<double>(hits) / static_cast<double>(n0);
}

double magnitude_lower_bound(double beta, double k1, double k2) {
    if (k1 < 0.0 || k2 < 0.0 || k1 > 1.0 || k2 > 1.0)
        throw InconsistentInputs("k1, k2 must be probabilities");
    if (k1 + k2 <= 0.0) throw NoTakers();
    return std::abs(beta) * std::abs(k1 - k2) / (k1 + k2);
}

TightnessCertificate lower_bound_tightness_certificate(double beta, double k1, double k2,
                                                       std::size_t grid_size) {
    if (beta == 0.0) throw PreconditionViolated("beta != 0", "");
    if (!(k1 > k2 && k2 >= 0.0)) throw PreconditionViolated("k1 > k2 >= 0", "");
    if (grid_size < 2) throw PreconditionViolated("grid_size >= 2", "");

    // max{|mu1|, |mu2|} with mu1 = lambda mu2 + (1 - lambda) beta.
    auto objective = [beta](double mu2, double lambda) {
        double mu1 = lambda * mu2 + (1.0 - lambda) * beta;
        return std::max(std::abs(mu1), std::abs(mu2));
    };

    const double lambda_max = k2 / k1;  // c in [0, k2] maps to lambda in [0, k2/k1]
    const double mu2_half = 2.0 * std::abs(beta);
    const double dl = lambda_max / static_cast<double>(grid_size - 1);
    const double dm = 2.0 * mu2_half / static_cast<double>(grid_size - 1);

    TightnessCertificate cert;
    cert.closed_form = std::abs(beta) * (k1 - k2) / (k1 + k2);
    cert.lambda_step = dl;
    cert.mu2_step = dm;
    cert.minimum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double lambda = k2 == 0.0 ? 0.0 : dl * static_cast<double>(i);
        for (std::size_t j = 0; j < grid_size; ++j) {
            const double mu2 = -mu2_half + dm * static_cast<double>(j);
            const double value = objective(mu2, lambda);
            if (value < cert.minimum) {
                cert.minimum = value;
                cert.argmin_lambda = lambda;
                cert.argmin_mu2 = mu2;
            }
        }
        if (k2 == 0.0) break;
    }
    return cert;
}

int sign_under_dominance(double beta, int cov_sign) {
    if (cov_sign != 1)
        throw AssumptionNotApplicable(
            "sign identification under |mu1| >= |mu2| needs cov(D,Z) > 0; "
            "the mirrored restriction |mu2| >= |mu1| does not identify the sign");
    if (beta == 0.0) throw PreconditionViolated("beta != 0", "");
    return beta > 0.0 ? 1 : -1;
}

SampleData dichotomize(const SampleData& data, double threshold) {
    SampleData out;
    out.rows.reserve(data.size());
    for (const SampleRow& row : data.rows) {
        out.rows.push_back({row.y >= threshold ? 1.0 : 0.0, row.d, row.z});
    }
    return out;
}

namespace {

std::optional<double> statistic_value(const Estimates& est, Statistic stat) {
    switch (stat) {
        case Statistic::Beta: return est.beta_hat;
        case Statistic::Itt: return est.itt_hat;
        case Statistic::Gamma: return est.gamma_hat;
        case Statistic::LowerBound: return est.lower_bound_hat;
        case Statistic::K1: return est.k1_hat;
        case Statistic::K2: return est.k2_hat;
        case Statistic::Pz: return est.pz_hat;
        case Statistic::CellProb: return est.cell_prob_hat;
    }
    return std::nullopt;
}

std::optional<double> statistic_on(const SampleData& data, Statistic stat) {
    try {
        return statistic_value(estimate(data), stat);
    } catch (const DegenerateInstrument&) {
        return std::nullopt;
    }
}

std::optional<double> statistic_on(const ArmAccumulator& acc, Statistic stat) {
    try {
        return statistic_value(acc.finalize(), stat);
    } catch (const DegenerateInstrument&) {
        return std::nullopt;
    }
}

double percentile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::vector<double> bootstrap_replicates(const SampleData& data, Statistic stat,
                                         std::size_t replications, std::uint64_t seed,
                                         std::size_t max_attempts) {
    if (data.empty()) throw InconsistentInputs("empty sample");
    const std::size_t n = data.size();
    std::vector<double> values;
    values.reserve(replications);
    std::size_t attempts = 0;
    if (max_attempts == 0) max_attempts = 10 * replications;

    // Structure-of-arrays copy of the rows; the resample loop below is the
    // hot path of every bootstrap-heavy experiment, so it runs branchless
    // over a packed (d, z) byte per row.
    std::vector<double> ys(n);
    std::vector<std::uint8_t> dz(n);
    bool y_binary = true;
    for (std::size_t i = 0; i < n; ++i) {
        ys[i] = data.rows[i].y;
        dz[i] = static_cast<std::uint8_t>(data.rows[i].d | (data.rows[i].z << 1));
        if (ys[i] != 0.0 && ys[i] != 1.0) y_binary = false;
    }

    std::uint64_t stream = 0;
    while (values.size() < replications) {
        if (attempts++ >= max_attempts)
            throw BootstrapFailed("statistic undefined on too many resamples (" +
                                  std::to_string(attempts - 1) + " attempts)");
        Rng rng(derive_seed(seed, "bootstrap", stream++));
        std::size_t n1 = 0;
        std::size_t d1 = 0;
        std::size_t d_total = 0;
        std::size_t y1d1_z0 = 0;
        double sum_y1 = 0.0;
        double sum_y_total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = rng.bounded(n);
            const double y = ys[j];
            const unsigned flags = dz[j];
            const unsigned d = flags & 1u;
            const unsigned z = flags >> 1;
            n1 += z;
            d1 += d & z;
            d_total += d;
            sum_y_total += y;
            sum_y1 += z ? y : 0.0;
            y1d1_z0 += (y == 1.0) & d & (1u - z);
        }
        ArmAccumulator acc;
        acc.n1 = n1;
        acc.n0 = n - n1;
        acc.sum_y1 = sum_y1;
        acc.sum_y0 = sum_y_total - sum_y1;
        acc.sum_d1 = d1;
        acc.sum_d0 = d_total - d1;
        acc.y1d1_z0 = y1d1_z0;
        acc.y_binary = y_binary;
        if (auto value = statistic_on(acc, stat)) values.push_back(*value);
    }
    return values;
}

BootstrapCI bootstrap(const SampleData& data, Statistic stat, double level,
                      std::size_t replications, std::uint64_t seed) {
    if (replications < 100) throw PreconditionViolated("replications >= 100", "");
    if (!(level > 0.0 && level < 1.0)) throw PreconditionViolated("0 < level < 1", "");
    auto point = statistic_on(data, stat);
    if (!point) {
        if (stat == Statistic::CellProb)
            throw NotBinary("cell probability needs 0/1 outcomes; dichotomize first");
        if (stat == Statistic::Gamma) throw NoTakers();
        throw WeakIV();
    }
    std::vector<double> values = bootstrap_replicates(data, stat, replications, seed);
    std::sort(values.begin(), values.end());
    BootstrapCI ci;
    ci.point = *point;
    ci.level = level;
    ci.replications = replications;
    ci.seed = seed;
    const double tail = (1.0 - level) / 2.0;
    ci.lo = std::min(percentile(values, tail), ci.point);
    ci.hi = std::max(percentile(values, 1.0 - tail), ci.point);
    return ci;
}

}  // namespace late
