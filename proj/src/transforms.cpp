#include <cmath>

#include "mixlink/mcmc.hpp"

namespace mixlink::mcmc {

Eigen::VectorXd pi_to_logits(std::span<const double> pi) {
  const std::size_t J = pi.size();
  Eigen::VectorXd phi(static_cast<Eigen::Index>(J > 0 ? J - 1 : 0));
  const double log_last = std::log(pi[J - 1]);
  for (std::size_t j = 0; j + 1 < J; ++j) phi[static_cast<Eigen::Index>(j)] = std::log(pi[j]) - log_last;
  return phi;
}

std::vector<double> logits_to_pi(const Eigen::VectorXd& phi) {
  const Eigen::Index K = phi.size();
  double mx = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) mx = std::max(mx, phi[k]);
  std::vector<double> pi(static_cast<std::size_t>(K + 1));
  double total = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) total += (pi[k] = std::exp(phi[k] - mx));
  total += (pi[K] = std::exp(-mx));
  for (double& p : pi) p /= total;
  return pi;
}

Eigen::MatrixXd pi_jacobian_minor(const Eigen::VectorXd& phi) {
  const std::vector<double> pi = logits_to_pi(phi);
  const Eigen::Index K = phi.size();
  Eigen::MatrixXd jac(K, K);
  for (Eigen::Index j = 0; j < K; ++j)
    for (Eigen::Index k = 0; k < K; ++k) jac(j, k) = pi[j] * ((j == k ? 1.0 : 0.0) - pi[k]);
  return jac;
}

double pi_log_jacobian(std::span<const double> pi) {
  double value = 0.0;
  for (double p : pi) value += std::log(p);
  return value;
}

double log_jacobian_log(double phi) { return phi; }

double psi_log_jacobian(const Eigen::VectorXd& phi) {
  double value = 0.0;
  for (Eigen::Index j = 0; j < phi.size(); ++j) {
    const double a = std::abs(phi[j]);
    value += -a - 2.0 * std::log1p(std::exp(-a));
  }
  return value;
}

}  // namespace mixlink::mcmc
