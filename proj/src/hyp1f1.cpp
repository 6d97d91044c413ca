#include <cmath>
#include <limits>
#include <string>

#include "mixlink/error.hpp"
#include "mixlink/special.hpp"

namespace mixlink::special {

namespace {

void check_parameters(double x, double a, double b) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b))
    throw Error(ErrorCode::ParameterError,
                "1F1 needs b > a > 0 (a = " + std::to_string(a) + ", b = " + std::to_string(b) + ")");
  if (!std::isfinite(x)) throw Error(ErrorCode::DomainError, "1F1 argument must be finite");
}

// log of sum_n (alpha)_n / (b)_n z^n / n! for z >= 0; every term is positive.
double log_positive_series(double z, double alpha, double b) {
  constexpr double kRescale = 1e280;
  const double log_rescale = std::log(kRescale);
  double term = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  for (long n = 0; n < 10'000'000; ++n) {
    term *= (alpha + n) / (b + n) * z / (n + 1.0);
    sum += term;
    if (sum > kRescale) {
      sum /= kRescale;
      term /= kRescale;
      log_scale += log_rescale;
    }
    if (n + 1.0 > z && term <= sum * 1e-17) return log_scale + std::log(sum);
  }
  throw Error(ErrorCode::ToleranceNotMet, "Kummer series did not converge");
}

}  // namespace

double log_hyp1f1_series(double x, double a, double b) {
  check_parameters(x, a, b);
  if (x >= 0.0) return log_positive_series(x, a, b);
  // Kummer's transformation keeps every term positive.
  return x + log_positive_series(-x, b - a, b);
}

double log_hyp1f1_integral(double x, double a, double b, const simd::KernelTable* kernels) {
  check_parameters(x, a, b);
  AdaptiveOptions options;
  options.rel_tol = 1e-13;
  options.kernels = kernels;
  if (x <= 0.0) {
    const simd::ExponentialTerms terms{a, b - a, x};
    return log_integrate_exponential_kernel(terms, options).value - log_beta(a, b - a);
  }
  const simd::ExponentialTerms terms{b - a, a, -x};
  return x + log_integrate_exponential_kernel(terms, options).value - log_beta(b - a, a);
}

double log_confluent_1f1(double x, double a, double b) {
  if (std::abs(x) < kHyp1f1Switch) return log_hyp1f1_series(x, a, b);
  return log_hyp1f1_integral(x, a, b);
}

double confluent_1f1_scaled(double x, double a, double b) {
  return std::exp(log_confluent_1f1(x, a, b));
}

}  // namespace mixlink::special
