#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "mixlink/distributions.hpp"
#include "mixlink/error.hpp"
#include "mixlink/special.hpp"

namespace mixlink::distributions {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_count(double y, double m) {
  if (!(y >= 0.0 && y <= m) || y != std::floor(y))
    throw Error(ErrorCode::DomainError,
                "binomial outcome must be an integer in [0, m] (y = " + std::to_string(y) + ")");
}

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

std::span<const double> model_sigma2(const MixLinkModel& model) {
  if (model.sigma2_components.empty()) return {&model.sigma2, 1};
  return model.sigma2_components;
}

double binomial_component(double y, double m, const MatchedBeta& row) {
  if (row.degenerate) return special::binomial_log_pmf(y, m, row.lower);
  const simd::BinomialTerms terms{y, m - y, row.lower, row.upper, row.a, row.b};
  return special::log_choose(m, y) + special::log_integrate_binomial_kernel(terms).value -
         special::log_beta(row.a, row.b);
}

}  // namespace

double log_pmf_binomial(double y, double m, double theta, std::span<const double> pi, double kappa) {
  check_count(y, m);
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error(ErrorCode::DomainError, "theta must lie in [0, 1]");
  if (pi.size() == 1) return special::binomial_log_pmf(y, m, theta);
  // Every row of V has mean theta under pi, so m = 1 is exactly Bernoulli(theta).
  if (m == 1.0) return y == 1.0 ? std::log(theta) : std::log1p(-theta);

  const auto effects = cached_binomial_effects(theta, pi, kappa);
  std::vector<double> terms;
  terms.reserve(pi.size());
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (!(pi[j] > 0.0)) continue;
    terms.push_back(std::log(pi[j]) + binomial_component(y, m, effects->rows[j]));
  }
  return special::log_sum_exp(terms);
}

double log_pmf_poisson(double y, double theta, std::span<const double> pi, double kappa) {
  if (!(y >= 0.0) || y != std::floor(y))
    throw Error(ErrorCode::DomainError, "Poisson outcome must be a nonnegative integer");
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw Error(ErrorCode::DomainError, "theta must be finite and nonnegative");
  if (theta == 0.0) return y == 0.0 ? 0.0 : kNegInf;
  const std::size_t J = pi.size();
  if (J == 1) return special::poisson_log_pmf(y, theta);

  const double Jd = static_cast<double>(J);
  const double a = y + kappa;
  const double b = y + Jd * kappa;
  const double prefactor = y * std::log(theta) + special::log_gamma(y + kappa) +
                           special::log_gamma(kappa * Jd) - special::log_gamma(y + kappa * Jd) -
                           special::log_gamma(kappa) - special::log_gamma(y + 1.0);
  std::vector<double> terms;
  terms.reserve(J);
  for (std::size_t j = 0; j < J; ++j) {
    if (!(pi[j] > 0.0))
      throw Error(ErrorCode::ZeroWeight, "Poisson mixture needs every weight > 0");
    terms.push_back((1.0 - y) * std::log(pi[j]) +
                    special::log_confluent_1f1(-theta / pi[j], a, b));
  }
  return prefactor + special::log_sum_exp(terms);
}

double log_pdf_normal(double y, double theta, std::span<const double> pi, double kappa,
                      std::span<const double> sigma2) {
  const std::size_t J = pi.size();
  if (sigma2.size() != 1 && sigma2.size() != J)
    throw Error(ErrorCode::DomainError, "sigma2 must have 1 or J entries");
  auto s2 = [&](std::size_t j) { return sigma2.size() == 1 ? sigma2[0] : sigma2[j]; };
  if (J == 1) return special::normal_log_pdf(y, theta, s2(0));
  const RealBasis basis = geometry::real_basis(pi);
  std::vector<double> terms(J);
  for (std::size_t j = 0; j < J; ++j)
    terms[j] = std::log(pi[j]) +
               special::normal_log_pdf(y, theta, kappa * kappa * basis.diag_scale[j] + s2(j));
  return special::log_sum_exp(terms);
}

double log_pmf_binomial(double y, double m, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const MixLinkModel& model) {
  return log_pmf_binomial(y, m, model.linked_mean(x), model.pi, model.kappa);
}

double log_pmf_poisson(double y, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const MixLinkModel& model) {
  return log_pmf_poisson(y, model.linked_mean(x), model.pi, model.kappa);
}

double log_pdf_normal(double y, const Eigen::Ref<const Eigen::VectorXd>& x,
                      const MixLinkModel& model) {
  return log_pdf_normal(y, model.linked_mean(x), model.pi, model.kappa, model_sigma2(model));
}

double log_density(double y, double m, double theta, const MixLinkModel& model) {
  switch (model.family) {
    case Family::Binomial: return log_pmf_binomial(y, m, theta, model.pi, model.kappa);
    case Family::Poisson: return log_pmf_poisson(y, theta, model.pi, model.kappa);
    case Family::Normal:
      return log_pdf_normal(y, theta, model.pi, model.kappa, model_sigma2(model));
  }
  return kNegInf;
}

double log_density(double y, double m, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const MixLinkModel& model) {
  return log_density(y, m, model.linked_mean(x), model);
}

CdfBracket cdf_bracket(double y, double m, double theta, const MixLinkModel& model) {
  CdfBracket out;
  switch (model.family) {
    case Family::Normal: {
      out.at = out.below = cdf(y, m, theta, model);
      return out;
    }
    case Family::Binomial: {
      const double yf = std::floor(y);
      if (yf < 0.0) return out;
      if (yf >= m) {
        out.at = 1.0;
        out.below = clamp_probability(1.0 - std::exp(log_density(m, m, theta, model)));
        if (yf > m) out.below = 1.0;
        return out;
      }
      const double p_y = std::exp(log_density(yf, m, theta, model));
      if (yf <= m / 2.0) {
        double below = 0.0;
        for (double k = 0.0; k < yf; k += 1.0) below += std::exp(log_density(k, m, theta, model));
        out.below = clamp_probability(below);
        out.at = clamp_probability(below + p_y);
      } else {
        double tail = 0.0;
        for (double k = yf + 1.0; k <= m; k += 1.0) tail += std::exp(log_density(k, m, theta, model));
        out.at = clamp_probability(1.0 - tail);
        out.below = clamp_probability(1.0 - tail - p_y);
      }
      return out;
    }
    case Family::Poisson: {
      const double yf = std::floor(y);
      if (yf < 0.0) return out;
      double below = 0.0;
      for (double k = 0.0; k < yf; k += 1.0) below += std::exp(log_density(k, m, theta, model));
      out.below = clamp_probability(below);
      out.at = clamp_probability(below + std::exp(log_density(yf, m, theta, model)));
      return out;
    }
  }
  return out;
}

double cdf(double y, double m, double theta, const MixLinkModel& model) {
  switch (model.family) {
    case Family::Normal: {
      const std::size_t J = model.pi.size();
      const auto sigma2 = model_sigma2(model);
      auto s2 = [&](std::size_t j) { return sigma2.size() == 1 ? sigma2[0] : sigma2[j]; };
      if (J == 1) return special::std_normal_cdf((y - theta) / std::sqrt(s2(0)));
      const RealBasis basis = geometry::real_basis(model.pi);
      double total = 0.0;
      for (std::size_t j = 0; j < J; ++j) {
        const double var = model.kappa * model.kappa * basis.diag_scale[j] + s2(j);
        total += model.pi[j] * special::std_normal_cdf((y - theta) / std::sqrt(var));
      }
      return clamp_probability(total);
    }
    case Family::Binomial:
      if (model.pi.size() == 1) {
        const double yf = std::floor(y);
        if (yf < 0.0) return 0.0;
        if (yf >= m) return 1.0;
        return special::beta_cdf(1.0 - theta, m - yf, yf + 1.0);
      }
      return cdf_bracket(y, m, theta, model).at;
    case Family::Poisson:
      if (model.pi.size() == 1) {
        const double yf = std::floor(y);
        if (yf < 0.0) return 0.0;
        if (theta == 0.0) return 1.0;
        return boost::math::gamma_q(yf + 1.0, theta);
      }
      return cdf_bracket(y, m, theta, model).at;
  }
  return 0.0;
}

double cdf(double y, double m, const Eigen::Ref<const Eigen::VectorXd>& x,
           const MixLinkModel& model) {
  return cdf(y, m, model.linked_mean(x), model);
}

double loglik(const Dataset& data, const MixLinkModel& model) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    total += log_density(data.y[i], data.trials(i), data.X.row(static_cast<Eigen::Index>(i)).transpose(),
                         model);
  return total;
}

double rcb_log_pmf(double y, double m, double p, double rho) {
  if (!(p >= 0.0 && p <= 1.0) || !(rho >= 0.0 && rho <= 1.0))
    throw Error(ErrorCode::DomainError, "RCB needs p, rho in [0, 1]");
  const double means[2] = {(1.0 - rho) * p + rho, (1.0 - rho) * p};
  const double weights[2] = {p, 1.0 - p};
  return finite_mixture_log_pmf(y, m, means, weights);
}

double finite_mixture_log_pmf(double y, double m, std::span<const double> means,
                              std::span<const double> weights) {
  if (means.size() != weights.size())
    throw Error(ErrorCode::DomainError, "means and weights differ in length");
  std::vector<double> terms;
  for (std::size_t j = 0; j < means.size(); ++j) {
    if (!(weights[j] > 0.0)) continue;
    terms.push_back(std::log(weights[j]) + special::binomial_log_pmf(y, m, means[j]));
  }
  return special::log_sum_exp(terms);
}

}  // namespace mixlink::distributions
