#include <algorithm>
#include <cmath>
#include <vector>

#include "mixlink/error.hpp"
#include "mixlink/mcmc.hpp"

namespace mixlink::mcmc {

void relabel(PosteriorDraws& draws) {
  const std::size_t sortable = draws.family == Family::Normal ? draws.J - 1 : draws.J;
  if (sortable < 2) return;
  const Eigen::Index off = static_cast<Eigen::Index>(draws.pi_offset());
  std::vector<double> pi(sortable);
  for (Eigen::Index r = 0; r < draws.draws.rows(); ++r) {
    for (std::size_t j = 0; j < sortable; ++j) pi[j] = draws.draws(r, off + static_cast<Eigen::Index>(j));
    std::sort(pi.begin(), pi.end());
    for (std::size_t j = 0; j < sortable; ++j) draws.draws(r, off + static_cast<Eigen::Index>(j)) = pi[j];
  }
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::DomainError, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::DomainError, "quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double batch_means_mcse(std::span<const double> chain, std::size_t batches) {
  const std::size_t n = chain.size();
  if (n < 2) return 0.0;
  if (batches == 0) batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  batches = std::clamp<std::size_t>(batches, 2, n);
  const std::size_t size = n / batches;
  std::vector<double> means(batches);
  double grand = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t k = 0; k < size; ++k) s += chain[b * size + k];
    means[b] = s / static_cast<double>(size);
    grand += means[b];
  }
  grand /= static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double var_batch = ss / static_cast<double>(batches - 1);
  return std::sqrt(var_batch / static_cast<double>(batches));
}

std::vector<ParameterSummary> summarize(const PosteriorDraws& draws) {
  std::vector<ParameterSummary> out;
  const Eigen::Index R = draws.draws.rows();
  for (Eigen::Index c = 0; c < draws.draws.cols(); ++c) {
    std::vector<double> col(static_cast<std::size_t>(R));
    for (Eigen::Index r = 0; r < R; ++r) col[static_cast<std::size_t>(r)] = draws.draws(r, c);
    ParameterSummary s;
    s.name = draws.names[static_cast<std::size_t>(c)];
    if (R > 0) {
      double mean = 0.0;
      for (double v : col) mean += v;
      mean /= static_cast<double>(R);
      double ss = 0.0;
      for (double v : col) ss += (v - mean) * (v - mean);
      s.mean = mean;
      s.sd = R > 1 ? std::sqrt(ss / static_cast<double>(R - 1)) : 0.0;
      s.q025 = quantile(col, 0.025);
      s.q975 = quantile(col, 0.975);
      s.mcse = batch_means_mcse(col);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace mixlink::mcmc
