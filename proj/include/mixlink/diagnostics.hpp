#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mixlink/distributions.hpp"
#include "mixlink/mcmc.hpp"

namespace mixlink::diagnostics {

struct ResidualSet {
  std::vector<double> r;
  std::size_t draws_used = 0;
  std::uint64_t seed = 0;
  // Observations whose CDF bracket collapsed; their u is the point value.
  std::size_t degenerate_intervals = 0;
};

// Randomized quantile residuals averaged over the retained draws. The
// uniforms for observation i come from substream(seed, i).
ResidualSet quantile_residuals(const Dataset& data, const PosteriorDraws& draws,
                               const MixLinkModel& skeleton, std::uint64_t seed);

struct PredictiveSummary {
  std::vector<double> point;
  std::vector<double> lower;
  std::vector<double> upper;
  double alpha = 0.05;
};

// One replicate per observation per retained draw; m is ignored unless the
// family is Binomial.
PredictiveSummary posterior_predictive(const Eigen::MatrixXd& X, std::span<const double> m,
                                       const PosteriorDraws& draws, const MixLinkModel& skeleton,
                                       std::uint64_t seed, double alpha);

// Replicates[i][r] for observation i and draw r, from substream(seed, i).
std::vector<std::vector<double>> predictive_replicates(const Eigen::MatrixXd& X,
                                                       std::span<const double> m,
                                                       const PosteriorDraws& draws,
                                                       const MixLinkModel& skeleton,
                                                       std::uint64_t seed);

struct DicResult {
  double dic = 0.0;
  double mean_deviance = 0.0;       // D bar
  double deviance_at_mean = 0.0;    // D(theta bar)
  double effective_parameters = 0.0;
};

// 2 D bar - D(theta bar), theta bar the mean of the relabeled draws.
DicResult dic(const Dataset& data, const PosteriorDraws& draws, const MixLinkModel& skeleton);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Survival function of the Kolmogorov distribution.
double kolmogorov_q(double lambda);
KsResult ks_normal(std::span<const double> sample);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace mixlink::diagnostics
