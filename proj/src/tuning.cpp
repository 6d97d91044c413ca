#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mixlink/error.hpp"
#include "mixlink/mcmc.hpp"

namespace mixlink::mcmc {

namespace {

// Running first and second moments of a block on its transformed scale.
struct Moments {
  Eigen::VectorXd sum;
  Eigen::MatrixXd outer;
  double count = 0.0;

  explicit Moments(Eigen::Index dim)
      : sum(Eigen::VectorXd::Zero(dim)), outer(Eigen::MatrixXd::Zero(dim, dim)) {}
  void add(const Eigen::VectorXd& v) {
    sum += v;
    outer += v * v.transpose();
    count += 1.0;
  }
  Eigen::MatrixXd covariance() const {
    const Eigen::VectorXd mean = sum / count;
    return (outer - count * mean * mean.transpose()) / std::max(count - 1.0, 1.0);
  }
};

struct Block {
  std::string name;
  Eigen::MatrixXd proposal;
  std::size_t accepted_since_burn = 0;
};

Eigen::VectorXd psi_logits(const Eigen::MatrixXd& psi, Eigen::Index i) {
  Eigen::VectorXd phi(psi.cols());
  for (Eigen::Index j = 0; j < psi.cols(); ++j) {
    const double p = psi(i, j);
    phi[j] = std::log(p) - std::log1p(-p);
  }
  return phi;
}

const BlockStats& stats(const Acceptance& a, const std::string& name) {
  if (name == "beta") return a.beta;
  if (name == "pi") return a.pi;
  if (name == "kappa") return a.kappa;
  if (name == "sigma2") return a.sigma2;
  return a.psi;
}

}  // namespace

TuningResult pilot_tune(const Dataset& data, const MixLinkModel& skeleton, const PriorSpec& prior,
                        const ChainConfig& config, const TuningOptions& options, LogTarget target) {
  data.validate(skeleton.family);
  prior.validate(data.dim(), skeleton.J);
  if (options.rounds == 0 || options.iterations < options.rounds)
    throw Error(ErrorCode::ConfigError, "pilot needs at least one iteration per round");
  if (!(options.target > 0.0 && options.target < 1.0))
    throw Error(ErrorCode::ConfigError, "pilot target acceptance must lie in (0, 1)");

  ChainConfig cfg = with_default_proposals(config, data, skeleton);
  const bool augmented =
      skeleton.family == Family::Binomial && skeleton.J > 1 && !cfg.binomial_marginal;
  const Sampler::Kind kind = augmented ? Sampler::Kind::MetropolisWithinGibbs : Sampler::Kind::RandomWalk;

  std::vector<Block> blocks;
  if (data.dim() > 0) blocks.push_back({"beta", cfg.prop_beta});
  if (skeleton.J > 1) {
    blocks.push_back({"pi", cfg.prop_pi});
    blocks.push_back({"kappa", Eigen::MatrixXd::Constant(1, 1, cfg.prop_kappa)});
  }
  if (skeleton.family == Family::Normal)
    blocks.push_back({"sigma2", Eigen::MatrixXd::Constant(1, 1, cfg.prop_sigma2)});
  if (augmented) blocks.push_back({"psi", cfg.prop_psi});

  auto apply = [&] {
    for (const Block& b : blocks) {
      if (b.name == "beta") cfg.prop_beta = b.proposal;
      else if (b.name == "pi") cfg.prop_pi = b.proposal;
      else if (b.name == "kappa") cfg.prop_kappa = b.proposal(0, 0);
      else if (b.name == "sigma2") cfg.prop_sigma2 = b.proposal(0, 0);
      else cfg.prop_psi = b.proposal;
    }
  };

  // Separate stream from the final chain, which uses Rng(seed).
  Rng rng = substream(cfg.seed, 1);
  Sampler sampler(kind, data, skeleton, prior, cfg, initial_state(data, skeleton));
  if (target) sampler.set_log_target(std::move(target));

  const Eigen::Index d = static_cast<Eigen::Index>(data.dim());
  const Eigen::Index K = static_cast<Eigen::Index>(skeleton.J) - 1;
  const Eigen::Index J = static_cast<Eigen::Index>(skeleton.J);
  Moments m_beta(d), m_pi(K), m_kappa(1), m_sigma2(1);
  std::vector<Moments> m_psi(augmented ? data.size() : 0, Moments(J));

  TuningResult result;
  const std::size_t per_round = options.iterations / options.rounds;
  for (std::size_t round = 0; round < options.rounds; ++round) {
    sampler.reset_acceptance();
    for (std::size_t it = 0; it < per_round; ++it) {
      sampler.sweep(rng);
      if (round == 0) continue;
      const ChainState& s = sampler.state();
      if (d > 0) m_beta.add(s.beta);
      if (skeleton.J > 1) {
        m_pi.add(pi_to_logits(s.pi));
        m_kappa.add(Eigen::VectorXd::Constant(1, std::log(s.kappa)));
      }
      if (skeleton.family == Family::Normal)
        m_sigma2.add(Eigen::VectorXd::Constant(1, std::log(s.sigma2)));
      for (std::size_t i = 0; i < m_psi.size(); ++i)
        m_psi[i].add(psi_logits(s.psi, static_cast<Eigen::Index>(i)));
    }

    const Acceptance& acc = sampler.acceptance();
    for (Block& b : blocks) {
      const double rate = stats(acc, b.name).rate();
      if (round > 0) b.accepted_since_burn += stats(acc, b.name).accepted;
      const double factor = std::clamp(rate / options.target, 0.25, 4.0);
      const Eigen::Index dim = b.proposal.rows();
      const double trace = b.proposal.trace();
      if (dim > 1 && round > 0 && b.accepted_since_burn >= 10 * static_cast<std::size_t>(dim)) {
        Eigen::MatrixXd emp;
        if (b.name == "beta") emp = m_beta.covariance();
        else if (b.name == "pi") emp = m_pi.covariance();
        else {
          emp = Eigen::MatrixXd::Zero(dim, dim);
          for (const Moments& m : m_psi) emp += m.covariance();
          emp /= static_cast<double>(m_psi.size());
        }
        emp += options.ridge * Eigen::MatrixXd::Identity(dim, dim);
        // The empirical covariance sets the shape, acceptance sets the size.
        if (emp.trace() > 0.0 && trace > 0.0) b.proposal = emp * (trace / emp.trace());
      }
      b.proposal *= factor;
      result.scale_history[b.name].push_back(b.proposal.trace() / static_cast<double>(dim));
    }
    apply();
    sampler.set_config(cfg);

    if (round + 1 == options.rounds) {
      result.in_band = true;
      for (const Block& b : blocks) {
        const double rate = stats(acc, b.name).rate();
        result.final_acceptance[b.name] = rate;
        result.in_band = result.in_band && rate >= options.band_low && rate <= options.band_high;
        if (rate < 0.01)
          throw Error(ErrorCode::TuningFailed,
                      "pilot acceptance for block " + b.name + " stayed below 1%");
      }
    }
  }
  result.config = cfg;
  return result;
}

}  // namespace mixlink::mcmc
