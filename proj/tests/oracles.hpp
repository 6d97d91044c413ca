#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the code paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

using Point = std::vector<double>;

// Every mu with mu_{-j} in {0,1}^{J-1} and pi_j mu_j = theta - mu_{-j}' pi_{-j},
// kept if it lies in [0,1]^J. Deduplicated, sorted lexicographically.
inline std::vector<Point> brute_force_vertices(double theta, const std::vector<double>& pi) {
  const std::size_t J = pi.size();
  std::vector<Point> out;
  for (std::size_t j = 0; j < J; ++j) {
    if (!(pi[j] > 0.0)) continue;
    for (unsigned mask = 0; mask < (1u << (J - 1)); ++mask) {
      Point mu(J, 0.0);
      double rest = 0.0;
      std::size_t bit = 0;
      for (std::size_t l = 0; l < J; ++l) {
        if (l == j) continue;
        mu[l] = (mask >> bit++) & 1u ? 1.0 : 0.0;
        rest += mu[l] * pi[l];
      }
      mu[j] = (theta - rest) / pi[j];
      if (mu[j] < -1e-12 || mu[j] > 1.0 + 1e-12) continue;
      mu[j] = std::clamp(mu[j], 0.0, 1.0);
      out.push_back(mu);
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<Point> unique;
  for (const Point& p : out) {
    bool dup = false;
    for (const Point& q : unique) {
      double diff = 0.0;
      for (std::size_t l = 0; l < J; ++l) diff = std::max(diff, std::abs(p[l] - q[l]));
      dup = dup || diff <= 1e-10;
    }
    if (!dup) unique.push_back(p);
  }
  return unique;
}

inline double binomial_pmf(double y, double m, double p) {
  if (p <= 0.0) return y == 0.0 ? 1.0 : 0.0;
  if (p >= 1.0) return y == m ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::binomial_distribution<double>(m, p), y);
}

inline double poisson_log_pmf(double y, double lambda) {
  if (lambda == 0.0) return y == 0.0 ? 0.0 : -INFINITY;
  return y * std::log(lambda) - lambda - boost::math::lgamma(y + 1.0);
}

// sum_j pi_j int Pois(y | (theta / pi_j) w) Beta(w | kappa, kappa (J-1)) dw by
// tanh-sinh quadrature, split at w = 1/2 with each half parameterized from
// its singular endpoint.
inline double poisson_mixture_pmf(double y, double theta, const std::vector<double>& pi,
                                  double kappa) {
  static boost::math::quadrature::tanh_sinh<double> ts;
  const double J = static_cast<double>(pi.size());
  const double a = kappa, b = kappa * (J - 1.0);
  const double lbeta = boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
  double total = 0.0;
  for (double p : pi) {
    const double scale = theta / p;
    auto g = [&](double w, double wc) {
      if (w <= 0.0 || wc <= 0.0) return 0.0;
      return std::exp(poisson_log_pmf(y, scale * w) + (a - 1.0) * std::log(w) +
                      (b - 1.0) * std::log(wc) - lbeta);
    };
    const double lo = ts.integrate([&](double w) { return g(w, 1.0 - w); }, 0.0, 0.5, 1e-13);
    const double hi = ts.integrate([&](double v) { return g(1.0 - v, v); }, 0.0, 0.5, 1e-13);
    total += p * (lo + hi);
  }
  return total;
}

// C(m, y) B(a + y, b + m - y) / B(a, b).
inline double beta_binomial_pmf(double y, double m, double a, double b) {
  // lgamma form: boost::math::beta underflows for large a, b.
  using boost::math::lgamma;
  const double lbeta_post = lgamma(a + y) + lgamma(b + m - y) - lgamma(a + b + m);
  const double lbeta_prior = lgamma(a) + lgamma(b) - lgamma(a + b);
  return std::exp(std::log(boost::math::binomial_coefficient<double>(static_cast<unsigned>(m),
                                                                     static_cast<unsigned>(y))) +
                  lbeta_post - lbeta_prior);
}

// Dirichlet(kappa -> 0) limit: sum_j sum_l (pi_j / k) Bin(y | m, v_jl).
inline double inflated_limit_pmf(double y, double m, const std::vector<Point>& vertices,
                                 const std::vector<double>& pi) {
  const double k = static_cast<double>(vertices.size());
  double total = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j)
    for (const Point& v : vertices) total += pi[j] / k * binomial_pmf(y, m, v[j]);
  return total;
}

inline std::vector<double> random_simplex(std::size_t J, std::mt19937_64& rng, double floor = 0.02) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> pi(J);
  double total = 0.0;
  for (double& p : pi) total += (p = g(rng));
  for (double& p : pi) p = floor + (1.0 - floor * static_cast<double>(J)) * p / total;
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < J; ++j) s += pi[j];
  pi[J - 1] = 1.0 - s;
  return pi;
}

// Central differences of f: R^n -> R^n at x.
inline std::vector<std::vector<double>> fd_jacobian(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h = 1e-6) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> jac(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> hi = x, lo = x;
    hi[k] += h;
    lo[k] -= h;
    const auto fh = f(hi), fl = f(lo);
    for (std::size_t j = 0; j < n; ++j) jac[j][k] = (fh[j] - fl[j]) / (2.0 * h);
  }
  return jac;
}

inline double determinant(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

}  // namespace oracle
