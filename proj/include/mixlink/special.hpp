#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mixlink/simd/kernels.hpp"

namespace mixlink::special {

// ---- scalar special functions -------------------------------------------

double log_gamma(double x);
double log_beta(double a, double b);
// log C(m, y) for real-valued arguments with 0 <= y <= m.
double log_choose(double m, double y);

// (a-1) log w + (b-1) log(1-w) - log B(a, b). DomainError outside (0,1) or
// for nonpositive shapes.
double log_beta_density(double w, double a, double b);
double beta_cdf(double w, double a, double b);
double beta_quantile(double p, double a, double b);

double logistic_cdf(double x);
double logistic_pdf(double x);
double std_normal_cdf(double x);
double std_normal_quantile(double p);

double binomial_log_pmf(double y, double m, double p);
double poisson_log_pmf(double y, double lambda);
double normal_log_pdf(double y, double mean, double variance);

double log_sum_exp(std::span<const double> x);
double log1p_exp(double x);  // log(1 + e^x) without overflow

// ---- quadrature on [0, 1] -----------------------------------------------

// Gauss-Legendre rule mapped to (0, 1). Exact for polynomials of degree
// 2 * order - 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> log_weights;

  std::size_t order() const { return nodes.size(); }

  static QuadratureRule gauss_legendre(std::size_t order);
};

// Order-64 rule, built once.
const QuadratureRule& default_rule();

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // |I_L - I_{L-1}| of the last refinement
  int level = 0;
  std::size_t evaluations = 0;
};

struct AdaptiveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_level = 12;
  const simd::KernelTable* kernels = nullptr;  // nullptr: active_kernels()
};

// NonFinite if f yields NaN or +-inf at a node.
double integrate_unit(const std::function<double(double)>& f, const QuadratureRule& rule);

// Double-exponential (tanh-sinh) quadrature with level doubling. Integrable
// endpoint singularities w^(a-1), (1-w)^(b-1) are handled for a, b >~ 0.05;
// nodes that round to exactly 0 or 1 are skipped. ToleranceNotMet when
// max_level is reached without convergence.
QuadratureResult integrate_unit_adaptive(const std::function<double(double)>& f,
                                         const AdaptiveOptions& options = {});

// log of  int_0^1 H(w)^s (1 - H(w))^f w^(a-1) (1-w)^(b-1) dw,  H = lower + (upper - lower) w.
// terms.a and terms.b are the Beta shapes a and b. Nodes are evaluated fully in
// log space, so large counts and shapes near zero are both safe.
QuadratureResult log_integrate_binomial_kernel(const simd::BinomialTerms& terms,
                                               const AdaptiveOptions& options = {});

// log of  int_0^1 w^(a-1) (1-w)^(b-1) exp(slope w) dw.
QuadratureResult log_integrate_exponential_kernel(const simd::ExponentialTerms& terms,
                                                  const AdaptiveOptions& options = {});

// ---- confluent hypergeometric function ------------------------------------

// F(x; a, b) = int_0^1 w^(a-1) (1-w)^(b-a-1) e^(xw) dw / B(a, b-a), b > a > 0.
// Kummer series for |x| < kHyp1f1Switch, the integral otherwise.
inline constexpr double kHyp1f1Switch = 30.0;

double confluent_1f1_scaled(double x, double a, double b);
double log_confluent_1f1(double x, double a, double b);

// Individual branches, valid for every x; exposed for cross-validation.
double log_hyp1f1_series(double x, double a, double b);
double log_hyp1f1_integral(double x, double a, double b,
                           const simd::KernelTable* kernels = nullptr);

}  // namespace mixlink::special
