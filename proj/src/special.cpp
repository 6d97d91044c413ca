#include "mixlink/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "mixlink/error.hpp"

namespace mixlink::special {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::DomainError, "log_gamma needs x > 0");
  return boost::math::lgamma(x);
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::DomainError, "log_beta needs a, b > 0");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_choose(double m, double y) {
  if (y < 0.0 || y > m) throw Error(ErrorCode::DomainError, "log_choose needs 0 <= y <= m");
  if (y == 0.0 || y == m) return 0.0;
  return log_gamma(m + 1.0) - log_gamma(y + 1.0) - log_gamma(m - y + 1.0);
}

double log_beta_density(double w, double a, double b) {
  if (!(w > 0.0 && w < 1.0)) throw Error(ErrorCode::DomainError, "Beta density needs w in (0, 1)");
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::DomainError, "Beta shapes must be positive");
  return (a - 1.0) * std::log(w) + (b - 1.0) * std::log1p(-w) - log_beta(a, b);
}

double beta_cdf(double w, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::DomainError, "Beta shapes must be positive");
  if (std::isnan(w)) throw Error(ErrorCode::DomainError, "beta_cdf argument is NaN");
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, w);
}

double beta_quantile(double p, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::DomainError, "Beta shapes must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::DomainError, "probability outside [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return boost::math::ibeta_inv(a, b, p);
}

double logistic_cdf(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logistic_pdf(double x) {
  const double e = std::exp(-std::abs(x));
  return e / ((1.0 + e) * (1.0 + e));
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return kNegInf;
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::DomainError, "std_normal_quantile needs p in [0, 1]");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double binomial_log_pmf(double y, double m, double p) {
  if (y < 0.0 || y > m) return kNegInf;
  if (p <= 0.0) return y == 0.0 ? 0.0 : kNegInf;
  if (p >= 1.0) return y == m ? 0.0 : kNegInf;
  double v = log_choose(m, y);
  if (y > 0.0) v += y * std::log(p);
  if (m - y > 0.0) v += (m - y) * std::log1p(-p);
  return v;
}

double poisson_log_pmf(double y, double lambda) {
  if (y < 0.0) return kNegInf;
  if (lambda <= 0.0) return y == 0.0 ? 0.0 : kNegInf;
  return y * std::log(lambda) - lambda - log_gamma(y + 1.0);
}

double normal_log_pdf(double y, double mean, double variance) {
  const double z = y - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + z * z / variance);
}

double log_sum_exp(std::span<const double> x) {
  double mx = kNegInf;
  for (double v : x) mx = std::max(mx, v);
  if (mx == kNegInf) return kNegInf;
  if (mx == std::numeric_limits<double>::infinity()) return mx;
  double s = 0.0;
  for (double v : x) s += std::exp(v - mx);
  return mx + std::log(s);
}

double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace mixlink::special
