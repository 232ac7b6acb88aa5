#include "late/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "late/adversarial.hpp"
#include "late/errors.hpp"
#include "late/estimation.hpp"
#include "late/rng.hpp"

namespace late {

namespace {

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// Upper 1% chi-square critical values for df 1..6 (at most 7 outcome
// categories, so df never exceeds 6).
constexpr std::array<double, 6> kChiSq99 = {6.634896601, 9.210340372, 11.34486673,
                                            13.27670414, 15.08627247, 16.81189383};

struct ChiSquareResult {
    double stat = 0.0;
    int df = 0;
    bool reject = false;
};

// Two-sample homogeneity test over outcome categories; categories whose
// expected count falls below 5 are pooled into one bucket.
ChiSquareResult chi_square_equality(const std::array<std::uint64_t, 7>& c1,
                                    const std::array<std::uint64_t, 7>& c2) {
    const double n1 = static_cast<double>(
        std::accumulate(c1.begin(), c1.end(), std::uint64_t{0}));
    const double n2 = static_cast<double>(
        std::accumulate(c2.begin(), c2.end(), std::uint64_t{0}));
    const double total = n1 + n2;
    ChiSquareResult result;
    if (n1 == 0.0 || n2 == 0.0) return result;

    std::vector<std::pair<double, double>> cells;  // kept categories
    double pooled1 = 0.0;
    double pooled2 = 0.0;
    for (std::size_t k = 0; k < 7; ++k) {
        const double tk = static_cast<double>(c1[k] + c2[k]);
        if (tk == 0.0) continue;
        const double e1 = n1 * tk / total;
        const double e2 = n2 * tk / total;
        if (e1 < 5.0 || e2 < 5.0) {
            pooled1 += static_cast<double>(c1[k]);
            pooled2 += static_cast<double>(c2[k]);
        } else {
            cells.emplace_back(static_cast<double>(c1[k]), static_cast<double>(c2[k]));
        }
    }
    if (pooled1 + pooled2 > 0.0) cells.emplace_back(pooled1, pooled2);
    if (cells.size() < 2) return result;

    double stat = 0.0;
    for (const auto& [o1, o2] : cells) {
        const double tk = o1 + o2;
        const double e1 = n1 * tk / total;
        const double e2 = n2 * tk / total;
        stat += (o1 - e1) * (o1 - e1) / e1 + (o2 - e2) * (o2 - e2) / e2;
    }
    result.stat = stat;
    result.df = static_cast<int>(cells.size()) - 1;
    result.reject = stat > kChiSq99[static_cast<std::size_t>(result.df) - 1];
    return result;
}

void tally_one(DgpTally& tally, const SignSet& cs, int true_sign) {
    ++tally.replications;
    ++tally.category_counts[static_cast<std::size_t>(cs.category())];
    if (cs.contains(true_sign)) ++tally.covered;
    if (cs.neg) ++tally.neg_in;
    if (cs.pos) ++tally.pos_in;
    if (cs.neg && cs.pos) ++tally.both_in;
}

}  // namespace

std::string SignSet::to_string() const {
    std::string out = "{";
    const char* sep = "";
    if (neg) { out += "-1"; sep = ","; }
    if (zero) { out += sep; out += "0"; sep = ","; }
    if (pos) { out += sep; out += "+1"; }
    out += "}";
    return out;
}

SignProcedure make_procedure(const std::string& name, double alpha,
                             std::size_t bootstrap_replications) {
    if (name == "always-ambiguous") {
        return {name, [](const SampleData&, std::uint64_t) { return SignSet::full(); }};
    }
    if (name == "plug-in-sign") {
        return {name, [](const SampleData& data, std::uint64_t) {
                    try {
                        const Estimates est = estimate(data);
                        if (!est.beta_hat) return SignSet::full();
                        return SignSet::singleton(sign_of(*est.beta_hat));
                    } catch (const DegenerateInstrument&) {
                        return SignSet::full();
                    }
                }};
    }
    if (name == "t-test-sign") {
        return {name, [alpha, bootstrap_replications](const SampleData& data,
                                                      std::uint64_t seed) {
                    try {
                        const Estimates est = estimate(data);
                        if (!est.beta_hat) return SignSet::full();
                        std::vector<double> reps = bootstrap_replicates(
                            data, Statistic::Beta, bootstrap_replications, seed);
                        std::vector<double> dev;
                        dev.reserve(reps.size());
                        for (double r : reps) dev.push_back(std::abs(r - *est.beta_hat));
                        std::sort(dev.begin(), dev.end());
                        const auto idx = static_cast<std::size_t>(
                            (1.0 - alpha) * static_cast<double>(dev.size() - 1));
                        const double critical = dev[idx];
                        if (std::abs(*est.beta_hat) > critical)
                            return SignSet::singleton(sign_of(*est.beta_hat));
                        return SignSet::full();
                    } catch (const Error&) {
                        return SignSet::full();
                    }
                }};
    }
    throw UnknownProcedure("unknown sign procedure '" + name + "'");
}

TwinExperimentReport run_twin_experiment(const Theta& theta, const Theta& twin,
                                         const ExperimentConfig& config) {
    if (config.replications < 1) throw PreconditionViolated("replications >= 1", "");
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw PreconditionViolated("0 < alpha < 1", "");
    TwinExperimentReport report;
    report.config = config;
    report.equivalence_distance = verify_equivalence(theta, twin);
    if (report.equivalence_distance > 1e-9)
        throw RefuseToRun("DGPs are not observationally equivalent (distance " +
                          std::to_string(report.equivalence_distance) + ")");
    report.mu1_base = late_complier(theta);
    report.mu1_twin = late_complier(twin);
    const int sign_base = sign_of(report.mu1_base);
    const int sign_twin = sign_of(report.mu1_twin);

    const SignProcedure proc = make_procedure(config.procedure, config.alpha);
    for (std::size_t rep = 0; rep < config.replications; ++rep) {
        const SampleData data_base =
            sample(theta, config.n, derive_seed(config.seed, "dgp-base", rep));
        tally_one(report.base,
                  proc.apply(data_base, derive_seed(config.seed, "proc-base", rep)),
                  sign_base);
        const SampleData data_twin =
            sample(twin, config.n, derive_seed(config.seed, "dgp-twin", rep));
        tally_one(report.twin,
                  proc.apply(data_twin, derive_seed(config.seed, "proc-twin", rep)),
                  sign_twin);
    }

    const ChiSquareResult chi =
        chi_square_equality(report.base.category_counts, report.twin.category_counts);
    report.chi_square = chi.stat;
    report.chi_square_df = chi.df;
    report.reject_1pct = chi.reject;
    report.ledger_ok = report.base.ledger_ok() && report.twin.ledger_ok();
    return report;
}

TwinCalibrationReport run_twin_calibration(const Theta& theta, const Theta& twin,
                                           const ExperimentConfig& config,
                                           std::size_t num_seeds, unsigned max_threads) {
    TwinCalibrationReport report;
    report.runs.resize(num_seeds);
    unsigned threads = max_threads == 0 ? std::thread::hardware_concurrency() : max_threads;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(num_seeds)));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= num_seeds) return;
            ExperimentConfig run_config = config;
            run_config.seed = derive_seed(config.seed, "calibration", i);
            report.runs[i] = run_twin_experiment(theta, twin, run_config);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (const TwinExperimentReport& run : report.runs) {
        if (run.reject_1pct) ++report.rejects;
        report.all_ledgers_ok = report.all_ledgers_ok && run.ledger_ok;
    }
    return report;
}

ConsistencyReport run_consistency_sweep(const Theta& theta,
                                        const std::vector<std::size_t>& sizes,
                                        std::size_t seeds, std::uint64_t master_seed) {
    if (sizes.empty()) throw PreconditionViolated("sizes nonempty", "");
    if (seeds < 1) throw PreconditionViolated("seeds >= 1", "");

    ConsistencyReport report;
    report.true_k1 = theta.a + theta.b;
    report.true_k2 = theta.a + theta.c;
    const bool beta_defined = theta.b != theta.c;
    report.true_beta = beta_defined ? iv_beta(theta) : std::numeric_limits<double>::quiet_NaN();
    report.true_gamma = report.true_k1 + report.true_k2 > 0.0
                            ? std::abs(report.true_k1 - report.true_k2) /
                                  (report.true_k1 + report.true_k2)
                            : std::numeric_limits<double>::quiet_NaN();

    for (std::size_t si = 0; si < sizes.size(); ++si) {
        ConsistencyRow row;
        row.n = sizes[si];
        double sum_beta = 0.0;
        double sum_gamma = 0.0;
        std::size_t beta_count = 0;
        std::size_t gamma_count = 0;
        for (std::size_t s = 0; s < seeds; ++s) {
            const SampleData data =
                sample(theta, row.n, derive_seed(master_seed, "consistency", si * seeds + s));
            const Estimates est = estimate(data);
            ++row.replications;
            row.mae_k1 += std::abs(est.k1_hat - report.true_k1);
            row.mae_k2 += std::abs(est.k2_hat - report.true_k2);
            if (est.beta_hat && beta_defined) {
                sum_beta += std::abs(*est.beta_hat - report.true_beta);
                ++beta_count;
            } else {
                ++row.weak_iv;
            }
            if (est.gamma_hat && !std::isnan(report.true_gamma)) {
                sum_gamma += std::abs(*est.gamma_hat - report.true_gamma);
                ++gamma_count;
            }
        }
        row.mae_k1 /= static_cast<double>(row.replications);
        row.mae_k2 /= static_cast<double>(row.replications);
        row.mae_beta = beta_count ? sum_beta / static_cast<double>(beta_count)
                                  : std::numeric_limits<double>::quiet_NaN();
        row.mae_gamma = gamma_count ? sum_gamma / static_cast<double>(gamma_count)
                                    : std::numeric_limits<double>::quiet_NaN();
        report.rows.push_back(row);
    }

    report.monotone_decay = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const ConsistencyRow& prev = report.rows[i - 1];
        const ConsistencyRow& cur = report.rows[i];
        bool ok = cur.mae_k1 <= prev.mae_k1 && cur.mae_k2 <= prev.mae_k2;
        if (!std::isnan(cur.mae_beta) && !std::isnan(prev.mae_beta))
            ok = ok && cur.mae_beta <= prev.mae_beta;
        if (!std::isnan(cur.mae_gamma) && !std::isnan(prev.mae_gamma))
            ok = ok && cur.mae_gamma <= prev.mae_gamma;
        report.monotone_decay = report.monotone_decay && ok;
    }
    return report;
}

}  // namespace late
