#include <algorithm>
#include <cmath>
#include <string>

#include "mixlink/distributions.hpp"
#include "mixlink/error.hpp"

namespace mixlink::distributions {

MatchedBeta moment_match(std::span<const double> row, double kappa) {
  if (row.empty()) throw Error(ErrorCode::DomainError, "moment_match needs a nonempty row");
  if (!(kappa > 0.0)) throw Error(ErrorCode::DomainError, "kappa must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(row.begin(), row.end());
  MatchedBeta out;
  out.lower = *lo_it;
  out.upper = *hi_it;
  const double width = out.upper - out.lower;
  if (width <= kDegenerateWidth) {
    out.upper = out.lower;
    out.degenerate = true;
    return out;
  }

  const double k = static_cast<double>(row.size());
  double mean = 0.0;
  for (double v : row) mean += v;
  mean /= k;
  double s2 = 0.0;
  for (double v : row) s2 += (v - mean) * (v - mean);
  s2 /= k;

  // Matched on the unit scale: mean p, variance tau. Bhatia-Davis gives
  // s2 <= (mean - lower)(upper - mean), hence p q / tau >= 1 + k kappa > 1.
  const double p = (mean - out.lower) / width;
  const double q = (out.upper - mean) / width;
  const double tau = s2 / ((1.0 + k * kappa) * width * width);
  const double total = p * q / tau - 1.0;
  out.a = p * total;
  out.b = q * total;
  if (!(out.a > 0.0) || !(out.b > 0.0) || !std::isfinite(out.a) || !std::isfinite(out.b))
    throw Error(ErrorCode::NonPositiveShape,
                "moment matching gave shapes a = " + std::to_string(out.a) +
                    ", b = " + std::to_string(out.b));
  return out;
}

RandomEffects binomial_effects(double theta, std::span<const double> pi, double kappa) {
  RandomEffects effects;
  effects.vertices = pi.size() == 2 ? geometry::vertices_j2_prob(theta, pi)
                                    : geometry::find_vertices_prob(theta, pi);
  const Eigen::MatrixXd& V = effects.vertices.V;
  effects.rows.reserve(pi.size());
  std::vector<double> row(static_cast<std::size_t>(V.cols()));
  for (Eigen::Index j = 0; j < V.rows(); ++j) {
    for (Eigen::Index l = 0; l < V.cols(); ++l) row[l] = V(j, l);
    effects.rows.push_back(moment_match(row, kappa));
  }
  return effects;
}

}  // namespace mixlink::distributions
