#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mixlink/distributions.hpp"
#include "mixlink/random.hpp"

namespace mixlink {

struct PriorSpec {
  Eigen::MatrixXd V_beta;
  std::vector<double> gamma;
  double a_kappa = 1.0;
  double b_kappa = 2.0;  // rate
  double a_sigma2 = 2.0;
  double b_sigma2 = 1.0;  // inverse-gamma scale

  // V_beta = 1000 I, gamma = 1.
  static PriorSpec defaults(std::size_t d, std::size_t J);
  void validate(std::size_t d, std::size_t J) const;
};

enum class PiBlockMode { Joint, PerComponent };

// Proposal covariances live on the transformed scales: beta as is, pi as the
// J-1 logits log(pi_j / pi_J), kappa and sigma2 as logs, psi as logits.
struct ChainConfig {
  std::size_t iterations = 55000;
  std::size_t burn_in = 5000;
  std::size_t thin = 50;
  Eigen::MatrixXd prop_beta;  // empty: from the IRLS fit
  Eigen::MatrixXd prop_pi;    // empty: 0.3^2 I
  double prop_kappa = 0.09;
  double prop_sigma2 = 0.01;
  Eigen::MatrixXd prop_psi;  // empty: I, shared by every observation
  std::uint64_t seed = 1;
  PiBlockMode pi_mode = PiBlockMode::Joint;
  // Allow the marginal-likelihood RWMH on Binomial data with J > 1.
  bool binomial_marginal = false;

  void validate() const;
  std::size_t retained() const { return (iterations - burn_in) / thin; }
};

struct ChainState {
  Eigen::VectorXd beta;
  std::vector<double> pi;
  double kappa = 1.0;
  double sigma2 = 1.0;
  Eigen::MatrixXd psi;  // n x J, Binomial MWG only

  MixLinkModel model(const MixLinkModel& skeleton) const;
};

struct BlockStats {
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  double rate() const { return proposed ? static_cast<double>(accepted) / proposed : 0.0; }
};

struct Acceptance {
  BlockStats beta, pi, kappa, sigma2, psi;
  std::size_t underflow_events = 0;

  std::map<std::string, double> rates() const;
};

struct PosteriorDraws {
  Eigen::MatrixXd draws;  // retained draws x parameters
  std::vector<std::string> names;
  Family family = Family::Binomial;
  std::size_t d = 0;
  std::size_t J = 1;
  std::map<std::string, double> acceptance;
  std::uint64_t seed = 0;

  std::size_t rows() const { return static_cast<std::size_t>(draws.rows()); }
  bool has_sigma2() const { return family == Family::Normal; }
  std::size_t pi_offset() const { return d; }
  std::size_t kappa_index() const { return d + J; }

  MixLinkModel model_at(std::size_t r, const MixLinkModel& skeleton) const;
  // Posterior mean of every coordinate, as a model.
  MixLinkModel posterior_mean(const MixLinkModel& skeleton) const;
};

std::vector<std::string> parameter_names(Family family, std::size_t d, std::size_t J);
Eigen::VectorXd pack(const ChainState& state, Family family);

namespace mcmc {

// ---- priors ----------------------------------------------------------------

double log_prior_beta(const Eigen::VectorXd& beta, const PriorSpec& prior);
double log_prior_pi(std::span<const double> pi, const PriorSpec& prior);
double log_prior_kappa(double kappa, const PriorSpec& prior);
double log_prior_sigma2(double sigma2, const PriorSpec& prior);
double log_prior(const ChainState& state, const PriorSpec& prior, Family family);

// ---- transforms -------------------------------------------------------------

// phi_j = log(pi_j / pi_J), j < J.
Eigen::VectorXd pi_to_logits(std::span<const double> pi);
std::vector<double> logits_to_pi(const Eigen::VectorXd& phi);
// d pi_{1..J-1} / d phi: the Jacobian with the J-th row dropped.
Eigen::MatrixXd pi_jacobian_minor(const Eigen::VectorXd& phi);
// log |det pi_jacobian_minor| = sum over all J of log pi_j.
double pi_log_jacobian(std::span<const double> pi);
// kappa = exp(phi): log Jacobian = phi.
double log_jacobian_log(double phi);
// psi_j = G(phi_j), G the logistic CDF: log Jacobian = sum log G'(phi_j).
double psi_log_jacobian(const Eigen::VectorXd& phi);

// ---- augmented likelihood ------------------------------------------------------

// log sum_j pi_j Bin(y | m, H_j(psi_j)) Beta(psi_j | a_j, b_j); a degenerate
// row contributes Bin(y | m, l_j) with a Uniform density for its psi_j.
double q_augmented(double y, double m, std::span<const double> psi, double theta,
                   std::span<const double> pi, double kappa);

// ---- initialization -------------------------------------------------------

struct GlmFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;
  double sigma2 = 1.0;
};

// Iteratively reweighted least squares for the J = 1 model of the family.
GlmFit glm_fit(const Dataset& data, Family family);

ChainState initial_state(const Dataset& data, const MixLinkModel& skeleton);
// Fills empty proposal covariances.
ChainConfig with_default_proposals(const ChainConfig& config, const Dataset& data,
                                   const MixLinkModel& skeleton);

// ---- samplers --------------------------------------------------------------

using LogTarget = std::function<double(const ChainState&)>;

class Sampler {
 public:
  enum class Kind { MetropolisWithinGibbs, RandomWalk };

  Sampler(Kind kind, const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
          const ChainConfig& config, ChainState initial);

  // Replaces log-likelihood + log-prior (random-walk kind only).
  void set_log_target(LogTarget target);

  void sweep(Rng& rng);
  const ChainState& state() const { return state_; }
  const Acceptance& acceptance() const { return acceptance_; }
  void reset_acceptance() { acceptance_ = Acceptance{}; }
  void set_config(const ChainConfig& config);
  const ChainConfig& config() const { return config_; }

 private:
  double target(const ChainState& s, std::vector<double>* per_obs) const;
  double evaluate(const ChainState& s, std::vector<double>& obs);
  double log_q(std::size_t i, const ChainState& s) const;
  bool accept(double log_ratio, Rng& rng);
  void update_beta(Rng& rng);
  void update_pi(Rng& rng);
  void update_kappa(Rng& rng);
  void update_sigma2(Rng& rng);
  void update_psi(Rng& rng);

  Kind kind_;
  const Dataset& data_;
  MixLinkModel skeleton_;
  PriorSpec prior_;
  ChainConfig config_;
  ChainState state_;
  LogTarget override_;
  Acceptance acceptance_;
  std::vector<double> per_obs_;  // current log Q_i (MWG) or log f_i (RW)
  double current_ = 0.0;
  Eigen::MatrixXd chol_beta_, chol_pi_, chol_psi_;
};

// Metropolis-within-Gibbs with psi augmentation (Binomial).
PosteriorDraws mwg_fit(const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
                       const ChainConfig& config);
// Random-walk Metropolis on the marginal likelihood.
PosteriorDraws rwmh_fit(const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
                        const ChainConfig& config, LogTarget target = {});
// mwg_fit for Binomial with J > 1 (unless binomial_marginal), rwmh_fit otherwise.
PosteriorDraws fit(const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
                   const ChainConfig& config);

// ---- tuning -----------------------------------------------------------------

struct TuningOptions {
  std::size_t iterations = 5000;
  std::size_t rounds = 10;
  double target = 0.225;
  double band_low = 0.15;
  double band_high = 0.30;
  double ridge = 1e-8;
};

struct TuningResult {
  ChainConfig config;
  std::map<std::string, std::vector<double>> scale_history;
  std::map<std::string, double> final_acceptance;
  bool in_band = false;
};

// Short pilot run from the initial state; TuningFailed when some block's
// acceptance stays below 1%.
TuningResult pilot_tune(const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
                        const ChainConfig& config, const TuningOptions& options = {},
                        LogTarget target = {});

// ---- post-processing ----------------------------------------------------------

// Sorts pi ascending within each draw. Normal models keep component J last
// (it carries the basis constraint) and sort pi_1..pi_{J-1}.
void relabel(PosteriorDraws& draws);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  double mcse = 0.0;
};

std::vector<ParameterSummary> summarize(const PosteriorDraws& draws);
// Batch-means Monte Carlo standard error of the mean.
double batch_means_mcse(std::span<const double> chain, std::size_t batches = 0);
// Type-7 sample quantile.
double quantile(std::vector<double> values, double p);

}  // namespace mcmc
}  // namespace mixlink
