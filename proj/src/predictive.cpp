#include <vector>

#include "mixlink/diagnostics.hpp"
#include "mixlink/error.hpp"

namespace mixlink::diagnostics {

std::vector<std::vector<double>> predictive_replicates(const Eigen::MatrixXd& X,
                                                       std::span<const double> m,
                                                       const PosteriorDraws& draws,
                                                       const MixLinkModel& skeleton,
                                                       std::uint64_t seed) {
  if (draws.rows() == 0) throw Error(ErrorCode::DomainError, "no posterior draws");
  const std::size_t n = static_cast<std::size_t>(X.rows());
  if (skeleton.family == Family::Binomial && m.size() != n)
    throw Error(ErrorCode::InvalidData, "binomial prediction needs one trial count per row");

  std::vector<Rng> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) streams.push_back(substream(seed, i));

  std::vector<std::vector<double>> out(n, std::vector<double>(draws.rows()));
  for (std::size_t r = 0; r < draws.rows(); ++r) {
    const MixLinkModel model = draws.model_at(r, skeleton);
    for (std::size_t i = 0; i < n; ++i) {
      const double trials = skeleton.family == Family::Binomial ? m[i] : 1.0;
      out[i][r] = distributions::sample(trials, X.row(static_cast<Eigen::Index>(i)).transpose(),
                                        model, streams[i]);
    }
  }
  return out;
}

PredictiveSummary posterior_predictive(const Eigen::MatrixXd& X, std::span<const double> m,
                                       const PosteriorDraws& draws, const MixLinkModel& skeleton,
                                       std::uint64_t seed, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::ConfigError, "alpha must lie in [0, 1]");
  const auto reps = predictive_replicates(X, m, draws, skeleton, seed);
  PredictiveSummary out;
  out.alpha = alpha;
  for (const auto& rep : reps) {
    double mean = 0.0;
    for (double v : rep) mean += v;
    out.point.push_back(mean / static_cast<double>(rep.size()));
    out.lower.push_back(mcmc::quantile(rep, alpha / 2.0));
    out.upper.push_back(mcmc::quantile(rep, 1.0 - alpha / 2.0));
  }
  return out;
}

}  // namespace mixlink::diagnostics
