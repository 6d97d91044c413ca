#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mixlink/error.hpp"
#include "mixlink/special.hpp"

namespace mixlink::special {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ---- Gauss-Legendre ------------------------------------------------------

// Returns (P_n(z), P_{n-1}(z)).
std::pair<long double, long double> legendre(std::size_t n, long double z) {
  long double p0 = 1.0L, p1 = z;
  for (std::size_t k = 2; k <= n; ++k) {
    const long double p2 = ((2.0L * k - 1.0L) * z * p1 - (k - 1.0L) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

QuadratureRule build_gauss_legendre(std::size_t order) {
  if (order == 0) throw Error(ErrorCode::DomainError, "quadrature order must be positive");
  const std::size_t n = order;
  std::vector<long double> x(n), wt(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(std::numbers::pi_v<long double> * (static_cast<long double>(i) + 0.75L) /
                             (static_cast<long double>(n) + 0.5L));
    long double dp = 1.0L;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pm] = legendre(n, z);
      dp = n * (z * pn - pm) / (z * z - 1.0L);
      const long double step = pn / dp;
      z -= step;
      if (std::abs(step) < 1e-19L) break;
    }
    const auto [pn, pm] = legendre(n, z);
    dp = n * (z * pn - pm) / (z * z - 1.0L);
    const long double w = 2.0L / ((1.0L - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    wt[i] = w;
    wt[n - 1 - i] = w;
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.log_weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = static_cast<double>(0.5L * (1.0L + x[i]));
    rule.log_weights[i] = static_cast<double>(std::log(0.5L * wt[i]));
  }
  return rule;
}

// ---- double-exponential node table ----------------------------------------
//
// Nodes t are stored level by level: level 0 holds k h0, level L >= 1 holds the
// odd multiples of h0 / 2^L. Summing levels 0..L gives the trapezoid sum with
// step h0 / 2^L. w(t) = 1 / (1 + exp(pi sinh t)) runs from 1 to 0.

constexpr double kH0 = 0.5;
constexpr double kTCap = 16.0;
constexpr int kMaxLevels = 15;

struct LevelNodes {
  std::vector<double> t, log_w, log_1mw, w, one_minus_w, log_jac;

  void push(double tv) {
    const double s = std::numbers::pi * std::sinh(tv);
    const double lw = -log1p_exp(s);
    const double l1w = -log1p_exp(-s);
    t.push_back(tv);
    log_w.push_back(lw);
    log_1mw.push_back(l1w);
    w.push_back(std::exp(lw));
    one_minus_w.push_back(std::exp(l1w));
    log_jac.push_back(std::log(std::numbers::pi) + std::log(std::cosh(tv)));
  }
};

class NodeTable {
 public:
  const LevelNodes& level(int L) {
    std::call_once(flags_[L], [this, L] { levels_[L] = build(L); });
    return *levels_[L];
  }

 private:
  static std::unique_ptr<LevelNodes> build(int L) {
    auto nodes = std::make_unique<LevelNodes>();
    if (L == 0) {
      const int k_max = static_cast<int>(std::floor(kTCap / kH0));
      for (int k = -k_max; k <= k_max; ++k) nodes->push(k * kH0);
    } else {
      const double h = kH0 / std::ldexp(1.0, L);
      const long k_max = static_cast<long>(std::floor((kTCap / h - 1.0) / 2.0));
      for (long k = -k_max - 1; k <= k_max; ++k) nodes->push((2 * k + 1) * h);
    }
    return nodes;
  }

  std::array<std::once_flag, kMaxLevels> flags_;
  std::array<std::unique_ptr<LevelNodes>, kMaxLevels> levels_;
};

NodeTable& node_table() {
  static NodeTable table;
  return table;
}

double level_step(int L) { return kH0 / std::ldexp(1.0, L); }

// Range of t outside which the integrand is negligible when it behaves like
// w^exponent near the corresponding endpoint. The margin keeps peaks located
// down to log w ~ -50 inside the range.
double truncation(double exponent) {
  if (!(exponent > 0.0)) return kTCap;
  return std::min(kTCap, std::asinh((60.0 / exponent + 50.0) / std::numbers::pi));
}

simd::NodeSpan subspan(const LevelNodes& nodes, double t_lo, double t_hi) {
  const auto lo = std::lower_bound(nodes.t.begin(), nodes.t.end(), t_lo) - nodes.t.begin();
  const auto hi = std::upper_bound(nodes.t.begin(), nodes.t.end(), t_hi) - nodes.t.begin();
  simd::NodeSpan s;
  s.size = hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
  s.log_w = nodes.log_w.data() + lo;
  s.log_1mw = nodes.log_1mw.data() + lo;
  s.w = nodes.w.data() + lo;
  s.one_minus_w = nodes.one_minus_w.data() + lo;
  s.log_jac = nodes.log_jac.data() + lo;
  return s;
}

// Level-doubling driver in log space. `evaluate` fills log integrand values
// for a span. Convergence needs agreement of successive levels and at least
// kMinResolved nodes of the newest level near the maximum, so narrow peaks
// that fall between coarse nodes force refinement.
template <class Evaluate>
QuadratureResult log_adaptive(Evaluate&& evaluate, double t_lo, double t_hi,
                              const AdaptiveOptions& options) {
  constexpr int kStartLevel = 2;
  constexpr int kMinResolved = 4;
  constexpr double kResolvedWindow = 15.0;
  const simd::KernelTable& kernels = options.kernels ? *options.kernels : simd::active_kernels();
  const int max_level = std::min(options.max_level, kMaxLevels - 1);

  thread_local std::vector<double> buffer;
  simd::LseAccumulator acc;
  QuadratureResult result;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int L = 0; L <= max_level; ++L) {
    const simd::NodeSpan span = subspan(node_table().level(L), t_lo, t_hi);
    buffer.resize(span.size);
    if (span.size > 0) {
      evaluate(kernels, span, buffer.data());
      acc.merge(kernels.log_sum_exp(buffer.data(), span.size));
    }
    result.evaluations += span.size;
    const double current = std::log(level_step(L)) + acc.value();
    if (std::isnan(current) || current == std::numeric_limits<double>::infinity())
      throw Error(ErrorCode::NonFinite, "integrand is not finite at a quadrature node");
    result.value = current;
    result.level = L;
    if (L >= kStartLevel) {
      if (current == kNegInf && previous == kNegInf) {
        result.error = 0.0;
        return result;
      }
      int resolved = 0;
      for (std::size_t i = 0; i < span.size; ++i)
        if (buffer[i] >= acc.max - kResolvedWindow) ++resolved;
      const double diff = std::abs(std::expm1(current - previous));
      result.error = diff;
      const bool close = diff <= options.rel_tol ||
                         (options.abs_tol > 0.0 && std::exp(current) * diff <= options.abs_tol);
      if (close && resolved >= kMinResolved) return result;
    }
    previous = current;
  }
  throw Error(ErrorCode::ToleranceNotMet,
              "double-exponential quadrature did not converge by level " +
                  std::to_string(max_level));
}

}  // namespace

QuadratureRule QuadratureRule::gauss_legendre(std::size_t order) {
  return build_gauss_legendre(order);
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = build_gauss_legendre(64);
  return rule;
}

double integrate_unit(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double total = 0.0;
  for (std::size_t i = 0; i < rule.order(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "integrand is not finite at a node");
    total += std::exp(rule.log_weights[i]) * v;
  }
  return total;
}

QuadratureResult integrate_unit_adaptive(const std::function<double(double)>& f,
                                         const AdaptiveOptions& options) {
  // Linear-scale integrand: keep w representable (w >= ~1e-275).
  constexpr double kLinearRange = 6.0;
  constexpr int kStartLevel = 2;
  const int max_level = std::min(options.max_level, kMaxLevels - 1);
  double sum = 0.0;
  double previous = std::numeric_limits<double>::quiet_NaN();
  QuadratureResult result;
  for (int L = 0; L <= max_level; ++L) {
    const LevelNodes& nodes = node_table().level(L);
    for (std::size_t i = 0; i < nodes.t.size(); ++i) {
      if (std::abs(nodes.t[i]) > kLinearRange) continue;
      const double w = nodes.w[i];
      if (w <= 0.0 || nodes.one_minus_w[i] <= 0.0 || w >= 1.0) continue;
      const double v = f(w);
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "integrand is not finite at a node");
      sum += v * std::exp(nodes.log_jac[i] + nodes.log_w[i] + nodes.log_1mw[i]);
      ++result.evaluations;
    }
    const double current = level_step(L) * sum;
    result.value = current;
    result.level = L;
    if (L >= kStartLevel) {
      result.error = std::abs(current - previous);
      if (result.error <= std::max(options.abs_tol, options.rel_tol * std::abs(current)))
        return result;
    }
    previous = current;
  }
  throw Error(ErrorCode::ToleranceNotMet,
              "adaptive quadrature did not converge by level " + std::to_string(max_level));
}

QuadratureResult log_integrate_binomial_kernel(const simd::BinomialTerms& terms,
                                               const AdaptiveOptions& options) {
  if (!(terms.a > 0.0) || !(terms.b > 0.0))
    throw Error(ErrorCode::DomainError, "Beta kernel shapes must be positive");
  if (!(terms.lower >= 0.0 && terms.lower <= terms.upper && terms.upper <= 1.0))
    throw Error(ErrorCode::DomainError, "kernel range must satisfy 0 <= lower <= upper <= 1");
  if (terms.successes < 0.0 || terms.failures < 0.0)
    throw Error(ErrorCode::DomainError, "counts must be nonnegative");
  const double a_eff = terms.a + (terms.lower == 0.0 ? terms.successes : 0.0);
  const double b_eff = terms.b + (terms.upper == 1.0 ? terms.failures : 0.0);
  return log_adaptive(
      [&terms](const simd::KernelTable& k, const simd::NodeSpan& span, double* out) {
        k.binomial_log_terms(span, terms, out);
      },
      -truncation(b_eff), truncation(a_eff), options);
}

QuadratureResult log_integrate_exponential_kernel(const simd::ExponentialTerms& terms,
                                                  const AdaptiveOptions& options) {
  if (!(terms.a > 0.0) || !(terms.b > 0.0))
    throw Error(ErrorCode::DomainError, "kernel exponents must be positive");
  if (!std::isfinite(terms.slope)) throw Error(ErrorCode::DomainError, "slope must be finite");
  return log_adaptive(
      [&terms](const simd::KernelTable& k, const simd::NodeSpan& span, double* out) {
        k.exponential_log_terms(span, terms, out);
      },
      -truncation(terms.b), truncation(terms.a), options);
}

}  // namespace mixlink::special
