#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "late/sample_data.hpp"

namespace late {

/// Plug-in estimates from one dataset. beta_hat is absent under a weak
/// instrument (k1_hat == k2_hat); gamma_hat and the magnitude lower bound
/// are absent when nobody takes the treatment in either arm. cell_prob_hat
/// is defined only for 0/1 outcomes (dichotomize first otherwise).
struct Estimates {
    std::size_t n = 0;
    double pz_hat = 0.0;
    double k1_hat = 0.0;
    double k2_hat = 0.0;
    double itt_hat = 0.0;
    std::optional<double> beta_hat;
    std::optional<double> gamma_hat;
    std::optional<double> lower_bound_hat;
    std::optional<double> cell_prob_hat;
    bool y_binary = false;
};

/// Percentile bootstrap interval for one named statistic.
struct BootstrapCI {
    double point = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.0;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
};

enum class Statistic { Beta, Itt, Gamma, LowerBound, K1, K2, Pz, CellProb };

Statistic statistic_from_name(std::string_view name);
std::string_view statistic_name(Statistic stat);

/// Arm means, take-up rates, Wald ratio, gamma, magnitude bound, and the
/// P(Y=1, D=1 | Z=0) cell. Throws DegenerateInstrument when Z is
/// single-valued; a weak instrument leaves beta_hat unset instead of
/// throwing so that sweeps can count it.
Estimates estimate(const SampleData& data);

/// P(Y=1, D=1 | Z=0) from data. Throws NotBinary unless every y is 0 or 1.
double cell_prob(const SampleData& data);

/// Assumption-free magnitude bound: max{|mu1|, |mu2|} >= |beta| * gamma with
/// gamma = |k1 - k2| / (k1 + k2), for every DGP consistent with
/// (beta, k1, k2). Throws NoTakers when k1 = k2 = 0.
double magnitude_lower_bound(double beta, double k1, double k2);

/// Grid-search certificate that the magnitude bound is tight: minimizes
/// max{|mu1|, |mu2|} over the feasible (mu2, lambda = c/b) rectangle and
/// reports the minimum along with where it was attained.
struct TightnessCertificate {
    double minimum = 0.0;
    double closed_form = 0.0;     // |beta| (k1-k2)/(k1+k2)
    double argmin_lambda = 0.0;
    double argmin_mu2 = 0.0;
    double lambda_step = 0.0;
    double mu2_step = 0.0;
};

TightnessCertificate lower_bound_tightness_certificate(double beta, double k1, double k2,
                                                       std::size_t grid_size);

/// Sign identification under the dominance restriction |mu1| >= |mu2|:
/// returns sign(beta). Requires cov(D,Z) > 0 (cov_sign = +1); the dominance
/// restriction itself is the caller's modeling assumption.
int sign_under_dominance(double beta, int cov_sign);

/// Replace y with 1{y >= threshold}.
SampleData dichotomize(const SampleData& data, double threshold);

/// Raw bootstrap replicates of a statistic under iid row resampling.
/// Resamples on which the statistic is undefined are redrawn, up to
/// max_attempts in total (default 10 * replications); past that,
/// BootstrapFailed.
std::vector<double> bootstrap_replicates(const SampleData& data, Statistic stat,
                                         std::size_t replications, std::uint64_t seed,
                                         std::size_t max_attempts = 0);

/// Percentile interval at the given level. Deterministic given seed.
/// Requires replications >= 100; the interval is widened, if necessary, to
/// contain the point estimate.
BootstrapCI bootstrap(const SampleData& data, Statistic stat, double level,
                      std::size_t replications, std::uint64_t seed);

}  // namespace late
