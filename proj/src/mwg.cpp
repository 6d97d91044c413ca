#include <cmath>
#include <limits>
#include <vector>

#include "mixlink/error.hpp"
#include "mixlink/mcmc.hpp"
#include "mixlink/special.hpp"

namespace mixlink::mcmc {

double q_augmented(double y, double m, std::span<const double> psi, double theta,
                   std::span<const double> pi, double kappa) {
  if (psi.size() != pi.size()) throw Error(ErrorCode::DomainError, "psi row must have J entries");
  for (double p : psi)
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::DomainError, "psi must lie in (0, 1)");
  const auto effects = distributions::cached_binomial_effects(theta, pi, kappa);
  std::vector<double> terms;
  terms.reserve(pi.size());
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (!(pi[j] > 0.0)) continue;
    const MatchedBeta& row = effects->rows[j];
    if (row.degenerate) {
      terms.push_back(std::log(pi[j]) + special::binomial_log_pmf(y, m, row.lower));
      continue;
    }
    terms.push_back(std::log(pi[j]) + special::binomial_log_pmf(y, m, row.map(psi[j])) +
                    special::log_beta_density(psi[j], row.a, row.b));
  }
  return special::log_sum_exp(terms);
}

// psi_i are conditionally independent, so each row is its own Metropolis block
// on the logit scale; the shared proposal covariance is prop_psi.
void Sampler::update_psi(Rng& rng) {
  const MixLinkModel model = state_.model(skeleton_);
  const Eigen::Index J = state_.psi.cols();
  std::vector<double> psi_new(static_cast<std::size_t>(J));
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const Eigen::Index r = static_cast<Eigen::Index>(i);
    ++acceptance_.psi.proposed;
    Eigen::VectorXd phi(J);
    for (Eigen::Index j = 0; j < J; ++j) {
      const double p = state_.psi(r, j);
      phi[j] = std::log(p) - std::log1p(-p);
    }
    const Eigen::VectorXd phi_new = phi + chol_psi_ * [&] {
      Eigen::VectorXd z(J);
      for (Eigen::Index k = 0; k < J; ++k) z[k] = random::standard_normal(rng);
      return z;
    }();
    bool interior = true;
    for (Eigen::Index j = 0; j < J; ++j) {
      psi_new[static_cast<std::size_t>(j)] = special::logistic_cdf(phi_new[j]);
      const double p = psi_new[static_cast<std::size_t>(j)];
      interior = interior && p > 0.0 && p < 1.0;
    }
    double value = -std::numeric_limits<double>::infinity();
    if (interior) {
      try {
        const double theta = model.linked_mean(data_.X.row(r).transpose());
        value = q_augmented(data_.y[i], data_.trials(i), psi_new, theta, state_.pi, state_.kappa);
      } catch (const Error&) {
        ++acceptance_.underflow_events;
      }
    }
    if (!std::isfinite(per_obs_[i])) ++acceptance_.underflow_events;
    const double log_ratio =
        value + psi_log_jacobian(phi_new) - per_obs_[i] - psi_log_jacobian(phi);
    if (accept(log_ratio, rng)) {
      for (Eigen::Index j = 0; j < J; ++j) state_.psi(r, j) = psi_new[static_cast<std::size_t>(j)];
      current_ += value - per_obs_[i];
      per_obs_[i] = value;
      ++acceptance_.psi.accepted;
    }
  }
}

}  // namespace mixlink::mcmc
