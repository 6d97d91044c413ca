#include <algorithm>
#include <cmath>
#include <vector>

#include "mixlink/diagnostics.hpp"
#include "mixlink/error.hpp"
#include "mixlink/special.hpp"

namespace mixlink::diagnostics {

namespace {

// Stephens' finite-sample scaling of the asymptotic distribution.
double p_value(double d, double n_eff) {
  const double s = std::sqrt(n_eff);
  return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

}  // namespace

double kolmogorov_q(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double kPi = 3.14159265358979323846;
  if (lambda < 1.18) {
    // Theta-function form; converges fast for small lambda.
    const double y = std::exp(-kPi * kPi / (8.0 * lambda * lambda));
    const double c = std::sqrt(2.0 * kPi) / lambda;
    double sum = 0.0;
    for (int k = 1; k <= 9; k += 2) sum += std::pow(y, k * k);
    return std::clamp(1.0 - c * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_normal(std::span<const double> sample) {
  if (sample.empty()) throw Error(ErrorCode::DomainError, "KS test on an empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = special::std_normal_cdf(x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, p_value(d, n)};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::DomainError, "KS test on an empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  // Advance through ties together so discrete samples are compared at the same point.
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, p_value(d, na * nb / (na + nb))};
}

}  // namespace mixlink::diagnostics
