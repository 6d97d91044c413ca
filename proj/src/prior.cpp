#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

#include "mixlink/error.hpp"
#include "mixlink/mcmc.hpp"
#include "mixlink/special.hpp"

namespace mixlink {

PriorSpec PriorSpec::defaults(std::size_t d, std::size_t J) {
  PriorSpec prior;
  prior.V_beta = 1000.0 * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                     static_cast<Eigen::Index>(d));
  prior.gamma.assign(J, 1.0);
  return prior;
}

void PriorSpec::validate(std::size_t d, std::size_t J) const {
  if (static_cast<std::size_t>(V_beta.rows()) != d || static_cast<std::size_t>(V_beta.cols()) != d)
    throw Error(ErrorCode::ConfigError, "V_beta must be d x d");
  Eigen::LLT<Eigen::MatrixXd> llt(V_beta);
  if (d > 0 && llt.info() != Eigen::Success)
    throw Error(ErrorCode::ConfigError, "V_beta must be positive definite");
  if (gamma.size() != J) throw Error(ErrorCode::ConfigError, "gamma must have J entries");
  for (double g : gamma)
    if (!(g > 0.0)) throw Error(ErrorCode::ConfigError, "gamma entries must be positive");
  if (!(a_kappa > 0.0) || !(b_kappa > 0.0))
    throw Error(ErrorCode::ConfigError, "kappa prior hyperparameters must be positive");
  if (!(a_sigma2 > 0.0) || !(b_sigma2 > 0.0))
    throw Error(ErrorCode::ConfigError, "sigma2 prior hyperparameters must be positive");
}

namespace mcmc {

double log_prior_beta(const Eigen::VectorXd& beta, const PriorSpec& prior) {
  const Eigen::Index d = beta.size();
  if (d == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(prior.V_beta);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::DomainError, "V_beta is not positive definite");
  const Eigen::VectorXd z = llt.matrixL().solve(beta);
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * z.squaredNorm() - 0.5 * log_det -
         0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi);
}

double log_prior_pi(std::span<const double> pi, const PriorSpec& prior) {
  if (pi.size() <= 1) return 0.0;
  double total_gamma = 0.0;
  double value = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (!(pi[j] > 0.0)) return -std::numeric_limits<double>::infinity();
    total_gamma += prior.gamma[j];
    value += (prior.gamma[j] - 1.0) * std::log(pi[j]) - special::log_gamma(prior.gamma[j]);
  }
  return value + special::log_gamma(total_gamma);
}

double log_prior_kappa(double kappa, const PriorSpec& prior) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error(ErrorCode::DomainError, "kappa must be > 0");
  return prior.a_kappa * std::log(prior.b_kappa) - special::log_gamma(prior.a_kappa) +
         (prior.a_kappa - 1.0) * std::log(kappa) - prior.b_kappa * kappa;
}

double log_prior_sigma2(double sigma2, const PriorSpec& prior) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw Error(ErrorCode::DomainError, "sigma2 must be > 0");
  return prior.a_sigma2 * std::log(prior.b_sigma2) - special::log_gamma(prior.a_sigma2) -
         (prior.a_sigma2 + 1.0) * std::log(sigma2) - prior.b_sigma2 / sigma2;
}

double log_prior(const ChainState& state, const PriorSpec& prior, Family family) {
  double value = log_prior_beta(state.beta, prior);
  if (state.pi.size() > 1) {
    value += log_prior_pi(state.pi, prior);
    value += log_prior_kappa(state.kappa, prior);
  }
  if (family == Family::Normal) value += log_prior_sigma2(state.sigma2, prior);
  return value;
}

}  // namespace mcmc
}  // namespace mixlink
