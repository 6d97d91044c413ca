#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "mixlink/error.hpp"
#include "mixlink/mcmc.hpp"
#include "mixlink/special.hpp"

namespace mixlink {

void ChainConfig::validate() const {
  if (iterations == 0) throw Error(ErrorCode::ConfigError, "iterations must be positive");
  if (burn_in >= iterations) throw Error(ErrorCode::ConfigError, "burn_in must be below iterations");
  if (thin == 0) throw Error(ErrorCode::ConfigError, "thin must be at least 1");
  if (!(prop_kappa >= 0.0) || !(prop_sigma2 >= 0.0))
    throw Error(ErrorCode::ConfigError, "proposal variances must be nonnegative");
}

MixLinkModel ChainState::model(const MixLinkModel& skeleton) const {
  MixLinkModel m = skeleton;
  m.beta = beta;
  m.pi = pi;
  m.kappa = kappa;
  m.sigma2 = sigma2;
  return m;
}

std::map<std::string, double> Acceptance::rates() const {
  std::map<std::string, double> out;
  auto put = [&](const char* name, const BlockStats& s) {
    if (s.proposed) out[name] = s.rate();
  };
  put("beta", beta);
  put("pi", pi);
  put("kappa", kappa);
  put("sigma2", sigma2);
  put("psi", psi);
  return out;
}

std::vector<std::string> parameter_names(Family family, std::size_t d, std::size_t J) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < d; ++k) names.push_back("beta" + std::to_string(k));
  for (std::size_t j = 0; j < J; ++j) names.push_back("pi" + std::to_string(j + 1));
  names.push_back("kappa");
  if (family == Family::Normal) names.push_back("sigma2");
  return names;
}

Eigen::VectorXd pack(const ChainState& state, Family family) {
  const Eigen::Index d = state.beta.size();
  const Eigen::Index J = static_cast<Eigen::Index>(state.pi.size());
  Eigen::VectorXd v(d + J + 1 + (family == Family::Normal ? 1 : 0));
  v.head(d) = state.beta;
  for (Eigen::Index j = 0; j < J; ++j) v[d + j] = state.pi[static_cast<std::size_t>(j)];
  v[d + J] = state.kappa;
  if (family == Family::Normal) v[d + J + 1] = state.sigma2;
  return v;
}

MixLinkModel PosteriorDraws::model_at(std::size_t r, const MixLinkModel& skeleton) const {
  MixLinkModel m = skeleton;
  const auto row = draws.row(static_cast<Eigen::Index>(r));
  m.beta = row.head(static_cast<Eigen::Index>(d)).transpose();
  m.pi.resize(J);
  for (std::size_t j = 0; j < J; ++j) m.pi[j] = row[static_cast<Eigen::Index>(d + j)];
  m.kappa = row[static_cast<Eigen::Index>(d + J)];
  if (has_sigma2()) m.sigma2 = row[static_cast<Eigen::Index>(d + J + 1)];
  return m;
}

MixLinkModel PosteriorDraws::posterior_mean(const MixLinkModel& skeleton) const {
  MixLinkModel m = skeleton;
  const Eigen::VectorXd mean = draws.colwise().mean().transpose();
  m.beta = mean.head(static_cast<Eigen::Index>(d));
  m.pi.resize(J);
  double total = 0.0;
  for (std::size_t j = 0; j < J; ++j) total += (m.pi[j] = mean[static_cast<Eigen::Index>(d + j)]);
  for (double& p : m.pi) p /= total;
  m.kappa = mean[static_cast<Eigen::Index>(d + J)];
  if (has_sigma2()) m.sigma2 = mean[static_cast<Eigen::Index>(d + J + 1)];
  return m;
}

namespace mcmc {

GlmFit glm_fit(const Dataset& data, Family family) {
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index d = data.X.cols();
  GlmFit fit;
  fit.beta = Eigen::VectorXd::Zero(d);
  fit.covariance = Eigen::MatrixXd::Identity(d, d);
  if (n == 0 || d == 0 || n < d) return fit;
  const Eigen::MatrixXd& X = data.X;
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(data.y.data(), n);

  if (family == Family::Normal) {
    const Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    if (ldlt.info() != Eigen::Success) return fit;
    fit.beta = ldlt.solve(X.transpose() * y);
    const double rss = (y - X * fit.beta).squaredNorm();
    fit.sigma2 = n > d ? rss / static_cast<double>(n - d) : 1.0;
    if (!(fit.sigma2 > 0.0)) fit.sigma2 = 1.0;
    fit.covariance = fit.sigma2 * ldlt.solve(Eigen::MatrixXd::Identity(d, d));
    return fit;
  }

  // Working response z = eta + (y - mu) / (d mu / d eta), weights (d mu / d eta)^2 / Var.
  Eigen::VectorXd eta(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (family == Family::Binomial) {
      const double m = data.m[static_cast<std::size_t>(i)];
      const double p = (y[i] + 0.5) / (m + 1.0);
      eta[i] = std::log(p / (1.0 - p));
    } else {
      eta[i] = std::log(y[i] + 0.5);
    }
  }
  Eigen::MatrixXd xtwx(d, d);
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::VectorXd w(n), z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (family == Family::Binomial) {
        const double m = data.m[static_cast<std::size_t>(i)];
        const double p = std::clamp(special::logistic_cdf(eta[i]), 1e-10, 1.0 - 1e-10);
        w[i] = m * p * (1.0 - p);
        z[i] = eta[i] + (y[i] - m * p) / w[i];
      } else {
        const double mu = std::max(std::exp(std::min(eta[i], 700.0)), 1e-10);
        w[i] = mu;
        z[i] = eta[i] + (y[i] - mu) / mu;
      }
    }
    xtwx = X.transpose() * w.asDiagonal() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtwx);
    if (ldlt.info() != Eigen::Success) break;
    const Eigen::VectorXd next = ldlt.solve(X.transpose() * (w.asDiagonal() * z));
    if (!next.allFinite()) break;
    const double change = (next - fit.beta).lpNorm<Eigen::Infinity>();
    fit.beta = next;
    eta = X * fit.beta;
    if (change < 1e-10) break;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(xtwx);
  if (ldlt.info() == Eigen::Success) {
    const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
    if (cov.allFinite()) fit.covariance = cov;
  }
  return fit;
}

ChainState initial_state(const Dataset& data, const MixLinkModel& skeleton) {
  const GlmFit glm = glm_fit(data, skeleton.family);
  ChainState state;
  state.beta = glm.beta;
  state.pi.assign(skeleton.J, 1.0 / static_cast<double>(skeleton.J));
  state.kappa = skeleton.J == 1 ? skeleton.kappa : 1.0;
  state.sigma2 = skeleton.family == Family::Normal ? glm.sigma2 : skeleton.sigma2;
  state.psi = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(data.size()),
                                        static_cast<Eigen::Index>(skeleton.J), 0.5);
  return state;
}

ChainConfig with_default_proposals(const ChainConfig& config, const Dataset& data,
                                   const MixLinkModel& skeleton) {
  ChainConfig out = config;
  const Eigen::Index d = data.X.cols();
  const Eigen::Index J = static_cast<Eigen::Index>(skeleton.J);
  if (out.prop_beta.size() == 0) {
    const GlmFit glm = glm_fit(data, skeleton.family);
    out.prop_beta = (2.38 * 2.38 / static_cast<double>(std::max<Eigen::Index>(d, 1))) * glm.covariance;
  }
  if (out.prop_pi.size() == 0) out.prop_pi = 0.09 * Eigen::MatrixXd::Identity(J - 1, J - 1);
  if (out.prop_psi.size() == 0) out.prop_psi = Eigen::MatrixXd::Identity(J, J);
  if (out.prop_beta.rows() != d || out.prop_beta.cols() != d)
    throw Error(ErrorCode::ConfigError, "beta proposal covariance must be d x d");
  if (out.prop_pi.rows() != J - 1 || out.prop_pi.cols() != J - 1)
    throw Error(ErrorCode::ConfigError, "pi proposal covariance must be (J-1) x (J-1)");
  if (out.prop_psi.rows() != J || out.prop_psi.cols() != J)
    throw Error(ErrorCode::ConfigError, "psi proposal covariance must be J x J");
  return out;
}

}  // namespace mcmc
}  // namespace mixlink
