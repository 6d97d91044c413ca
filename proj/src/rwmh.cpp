#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>

#include "mixlink/error.hpp"
#include "mixlink/mcmc.hpp"

namespace mixlink::mcmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Symmetric square root factor; accepts positive semidefinite (including zero)
// covariances, for which the move degenerates to the identity.
Eigen::MatrixXd sqrt_factor(const Eigen::MatrixXd& cov) {
  if (cov.size() == 0) return cov;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cov + cov.transpose()));
  if (eig.info() != Eigen::Success)
    throw Error(ErrorCode::ConfigError, "proposal covariance is not symmetric");
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * lambda.asDiagonal();
}

Eigen::VectorXd normal_vector(Eigen::Index size, Rng& rng) {
  Eigen::VectorXd z(size);
  for (Eigen::Index k = 0; k < size; ++k) z[k] = random::standard_normal(rng);
  return z;
}

}  // namespace

Sampler::Sampler(Kind kind, const Dataset& data, const MixLinkModel& skeleton,
                 const PriorSpec& prior, const ChainConfig& config, ChainState initial)
    : kind_(kind), data_(data), skeleton_(skeleton), prior_(prior), state_(std::move(initial)) {
  if (kind_ == Kind::MetropolisWithinGibbs && skeleton_.family != Family::Binomial)
    throw Error(ErrorCode::InvalidModel, "the augmented sampler is defined for Binomial models");
  if (kind_ == Kind::RandomWalk && skeleton_.family == Family::Binomial && skeleton_.J > 1 &&
      !config.binomial_marginal)
    throw Error(ErrorCode::InvalidModel,
                "Binomial mixtures use the augmented sampler unless binomial_marginal is set");
  if (kind_ == Kind::MetropolisWithinGibbs &&
      (static_cast<std::size_t>(state_.psi.rows()) != data_.size() ||
       static_cast<std::size_t>(state_.psi.cols()) != skeleton_.J))
    state_.psi = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(data_.size()),
                                           static_cast<Eigen::Index>(skeleton_.J), 0.5);
  set_config(config);
  per_obs_.assign(data_.size(), 0.0);
  current_ = target(state_, &per_obs_);
}

void Sampler::set_config(const ChainConfig& config) {
  config_ = config;
  chol_beta_ = sqrt_factor(config_.prop_beta);
  chol_pi_ = sqrt_factor(config_.prop_pi);
  chol_psi_ = sqrt_factor(config_.prop_psi);
}

void Sampler::set_log_target(LogTarget target) {
  if (kind_ != Kind::RandomWalk)
    throw Error(ErrorCode::InvalidModel, "a log-target override needs the random-walk sampler");
  override_ = std::move(target);
  current_ = this->target(state_, &per_obs_);
}

double Sampler::log_q(std::size_t i, const ChainState& s) const {
  const MixLinkModel model = s.model(skeleton_);
  const auto row = s.psi.row(static_cast<Eigen::Index>(i));
  std::vector<double> psi(static_cast<std::size_t>(row.size()));
  for (Eigen::Index j = 0; j < row.size(); ++j) psi[static_cast<std::size_t>(j)] = row[j];
  const double theta = model.linked_mean(data_.X.row(static_cast<Eigen::Index>(i)).transpose());
  return q_augmented(data_.y[i], data_.trials(i), psi, theta, s.pi, s.kappa);
}

double Sampler::target(const ChainState& s, std::vector<double>* per_obs) const {
  if (override_) return override_(s);
  const MixLinkModel model = s.model(skeleton_);
  double total = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    double v;
    if (kind_ == Kind::MetropolisWithinGibbs) {
      v = log_q(i, s);
    } else {
      const double theta = model.linked_mean(data_.X.row(static_cast<Eigen::Index>(i)).transpose());
      v = distributions::log_density(data_.y[i], data_.trials(i), theta, model);
    }
    if (per_obs) (*per_obs)[i] = v;
    total += v;
  }
  return total + log_prior(s, prior_, skeleton_.family);
}

bool Sampler::accept(double log_ratio, Rng& rng) {
  const double u = random::uniform_open(rng);
  if (std::isnan(log_ratio)) {
    ++acceptance_.underflow_events;
    return false;
  }
  return log_ratio >= 0.0 || std::log(u) < log_ratio;
}

// Numerical failures at a proposed point reject it.
double Sampler::evaluate(const ChainState& s, std::vector<double>& obs) {
  try {
    return target(s, &obs);
  } catch (const Error&) {
    ++acceptance_.underflow_events;
    return kNegInf;
  }
}

void Sampler::update_beta(Rng& rng) {
  if (state_.beta.size() == 0) return;
  ChainState cand = state_;
  cand.beta += chol_beta_ * normal_vector(state_.beta.size(), rng);
  ++acceptance_.beta.proposed;
  std::vector<double> obs(per_obs_.size());
  const double value = evaluate(cand, obs);
  if (accept(value - current_, rng)) {
    state_ = std::move(cand);
    per_obs_.swap(obs);
    current_ = value;
    ++acceptance_.beta.accepted;
  }
}

void Sampler::update_pi(Rng& rng) {
  const Eigen::VectorXd phi = pi_to_logits(state_.pi);
  const Eigen::Index K = phi.size();
  auto propose = [&](const Eigen::VectorXd& phi_new) {
    ++acceptance_.pi.proposed;
    ChainState cand = state_;
    cand.pi = logits_to_pi(phi_new);
    for (double p : cand.pi)
      if (!(p >= kMinWeight)) {
        (void)random::uniform_open(rng);
        return;
      }
    std::vector<double> obs(per_obs_.size());
    const double value = evaluate(cand, obs);
    const double log_ratio =
        value + pi_log_jacobian(cand.pi) - current_ - pi_log_jacobian(state_.pi);
    if (accept(log_ratio, rng)) {
      state_ = std::move(cand);
      per_obs_.swap(obs);
      current_ = value;
      ++acceptance_.pi.accepted;
    }
  };
  if (config_.pi_mode == PiBlockMode::Joint) {
    propose(phi + chol_pi_ * normal_vector(K, rng));
  } else {
    for (Eigen::Index k = 0; k < K; ++k) {
      Eigen::VectorXd next = pi_to_logits(state_.pi);
      next[k] += std::sqrt(std::max(config_.prop_pi(k, k), 0.0)) * random::standard_normal(rng);
      propose(next);
    }
  }
}

void Sampler::update_kappa(Rng& rng) {
  const double phi = std::log(state_.kappa);
  const double phi_new = phi + std::sqrt(config_.prop_kappa) * random::standard_normal(rng);
  ++acceptance_.kappa.proposed;
  ChainState cand = state_;
  cand.kappa = std::exp(phi_new);
  std::vector<double> obs(per_obs_.size());
  const double value =
      cand.kappa > 0.0 && std::isfinite(cand.kappa) ? evaluate(cand, obs) : kNegInf;
  const double log_ratio = value + log_jacobian_log(phi_new) - current_ - log_jacobian_log(phi);
  if (accept(log_ratio, rng)) {
    state_ = std::move(cand);
    per_obs_.swap(obs);
    current_ = value;
    ++acceptance_.kappa.accepted;
  }
}

void Sampler::update_sigma2(Rng& rng) {
  const double phi = std::log(state_.sigma2);
  const double phi_new = phi + std::sqrt(config_.prop_sigma2) * random::standard_normal(rng);
  ++acceptance_.sigma2.proposed;
  ChainState cand = state_;
  cand.sigma2 = std::exp(phi_new);
  std::vector<double> obs(per_obs_.size());
  const double value =
      cand.sigma2 > 0.0 && std::isfinite(cand.sigma2) ? evaluate(cand, obs) : kNegInf;
  const double log_ratio = value + log_jacobian_log(phi_new) - current_ - log_jacobian_log(phi);
  if (accept(log_ratio, rng)) {
    state_ = std::move(cand);
    per_obs_.swap(obs);
    current_ = value;
    ++acceptance_.sigma2.accepted;
  }
}

void Sampler::sweep(Rng& rng) {
  update_beta(rng);
  if (skeleton_.J > 1) {
    update_pi(rng);
    update_kappa(rng);
  }
  if (skeleton_.family == Family::Normal) update_sigma2(rng);
  if (kind_ == Kind::MetropolisWithinGibbs) update_psi(rng);
}

namespace {

PosteriorDraws run_chain(Sampler& sampler, const ChainConfig& config, Family family,
                         std::size_t d, std::size_t J, Rng& rng) {
  PosteriorDraws out;
  out.family = family;
  out.d = d;
  out.J = J;
  out.seed = config.seed;
  out.names = parameter_names(family, d, J);
  out.draws.resize(static_cast<Eigen::Index>(config.retained()),
                   static_cast<Eigen::Index>(out.names.size()));
  Eigen::Index row = 0;
  for (std::size_t r = 1; r <= config.iterations; ++r) {
    sampler.sweep(rng);
    if (r > config.burn_in && (r - config.burn_in) % config.thin == 0 && row < out.draws.rows())
      out.draws.row(row++) = pack(sampler.state(), family).transpose();
  }
  out.acceptance = sampler.acceptance().rates();
  relabel(out);
  return out;
}

void prepare(const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
             const ChainConfig& config) {
  data.validate(skeleton.family);
  if (skeleton.J == 0) throw Error(ErrorCode::InvalidModel, "J must be at least 1");
  prior.validate(data.dim(), skeleton.J);
  config.validate();
}

}  // namespace

PosteriorDraws rwmh_fit(const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
                        const ChainConfig& config, LogTarget target) {
  prepare(data, skeleton, prior, config);
  const ChainConfig cfg = with_default_proposals(config, data, skeleton);
  Rng rng(cfg.seed);
  Sampler sampler(Sampler::Kind::RandomWalk, data, skeleton, prior, cfg,
                  initial_state(data, skeleton));
  if (target) sampler.set_log_target(std::move(target));
  return run_chain(sampler, cfg, skeleton.family, data.dim(), skeleton.J, rng);
}

PosteriorDraws mwg_fit(const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
                       const ChainConfig& config) {
  prepare(data, skeleton, prior, config);
  const ChainConfig cfg = with_default_proposals(config, data, skeleton);
  Rng rng(cfg.seed);
  Sampler sampler(Sampler::Kind::MetropolisWithinGibbs, data, skeleton, prior, cfg,
                  initial_state(data, skeleton));
  return run_chain(sampler, cfg, skeleton.family, data.dim(), skeleton.J, rng);
}

PosteriorDraws fit(const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
                   const ChainConfig& config) {
  if (skeleton.family == Family::Binomial && skeleton.J > 1 && !config.binomial_marginal)
    return mwg_fit(data, skeleton, prior, config);
  return rwmh_fit(data, skeleton, prior, config);
}

}  // namespace mixlink::mcmc
