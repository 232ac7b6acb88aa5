#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "late/dgp.hpp"
#include "late/sample_data.hpp"

namespace late {

/// Nonempty subset of {-1, 0, +1}: a confidence set for the sign of the
/// complier effect.
struct SignSet {
    bool neg = false;
    bool zero = false;
    bool pos = false;

    bool contains(int s) const { return s < 0 ? neg : (s > 0 ? pos : zero); }
    int count() const { return int(neg) + int(zero) + int(pos); }
    /// Canonical category index in [0, 7): bit(neg) + 2 bit(zero) + 4 bit(pos) - 1.
    int category() const { return (int(neg) | (int(zero) << 1) | (int(pos) << 2)) - 1; }
    static SignSet full() { return {true, true, true}; }
    static SignSet singleton(int s) {
        return {s < 0, s == 0, s > 0};
    }
    std::string to_string() const;
};

/// A named, pluggable map from observed data to a sign confidence set.
/// Procedures see only the data, never the DGP.
struct SignProcedure {
    std::string name;
    std::function<SignSet(const SampleData&, std::uint64_t seed)> apply;
};

/// Built-ins: "plug-in-sign" ({sign(beta_hat)}), "t-test-sign"
/// ({sign(beta_hat)} when |beta_hat| clears a bootstrap critical value at
/// level alpha, else the full set) and "always-ambiguous" (the full set).
SignProcedure make_procedure(const std::string& name, double alpha,
                             std::size_t bootstrap_replications = 100);

struct ExperimentConfig {
    std::size_t n = 5000;
    std::size_t replications = 400;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    std::string procedure = "plug-in-sign";
};

/// Replication tallies for one DGP of the pair (integer counts so the
/// coverage ledger identity can be checked exactly).
struct DgpTally {
    std::array<std::uint64_t, 7> category_counts{};
    std::uint64_t replications = 0;
    std::uint64_t covered = 0;    // replications whose CS contains sign(mu1)
    std::uint64_t neg_in = 0;     // -1 in CS
    std::uint64_t pos_in = 0;     // +1 in CS
    std::uint64_t both_in = 0;    // {-1,+1} subset of CS

    double coverage() const {
        return replications ? double(covered) / double(replications) : 0.0;
    }
    /// Counting identity: #both >= #neg + #pos - n, exact on every tally.
    bool ledger_ok() const {
        return both_in + replications >= neg_in + pos_in;
    }
};

struct TwinExperimentReport {
    ExperimentConfig config;
    double equivalence_distance = 0.0;
    double mu1_base = 0.0;
    double mu1_twin = 0.0;
    DgpTally base;
    DgpTally twin;
    double chi_square = 0.0;
    int chi_square_df = 0;
    bool reject_1pct = false;   // equality of CS-outcome distributions rejected at 1%
    bool ledger_ok = false;
};

/// Samples both DGPs of an observationally equivalent pair, applies the
/// procedure to each replication, and reports the CS-outcome tallies, a
/// two-sample chi-square equality check at 1% (pooling categories with
/// expected count below 5), per-DGP coverage of sign(mu1), and the coverage
/// ledger. Refuses to run unless verify_equivalence(theta, twin) <= 1e-9.
TwinExperimentReport run_twin_experiment(const Theta& theta, const Theta& twin,
                                         const ExperimentConfig& config);

/// Seed sweep of run_twin_experiment (seeds derived from config.seed),
/// executed on a small thread pool; results are deterministic and ordered
/// by seed index.
struct TwinCalibrationReport {
    std::vector<TwinExperimentReport> runs;
    std::size_t rejects = 0;
    bool all_ledgers_ok = true;
};

TwinCalibrationReport run_twin_calibration(const Theta& theta, const Theta& twin,
                                           const ExperimentConfig& config,
                                           std::size_t num_seeds,
                                           unsigned max_threads = 0);

/// Estimator-consistency sweep: mean absolute error of (k1, k2, beta,
/// gamma) against the DGP truth at each sample size, averaged over seeded
/// replications. Weak-IV replications are counted and excluded from the
/// beta/gamma averages instead of crashing the sweep.
struct ConsistencyRow {
    std::size_t n = 0;
    double mae_k1 = 0.0;
    double mae_k2 = 0.0;
    double mae_beta = 0.0;      // NaN when every replication was weak
    double mae_gamma = 0.0;
    std::size_t weak_iv = 0;
    std::size_t replications = 0;
};

struct ConsistencyReport {
    double true_k1 = 0.0;
    double true_k2 = 0.0;
    double true_beta = 0.0;
    double true_gamma = 0.0;
    std::vector<ConsistencyRow> rows;
    bool monotone_decay = false;  // every tracked error shrinks along sizes
};

ConsistencyReport run_consistency_sweep(const Theta& theta,
                                        const std::vector<std::size_t>& sizes,
                                        std::size_t seeds, std::uint64_t master_seed);

}  // namespace late
