#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "mixlink/error.hpp"
#include "mixlink/special.hpp"
#include "oracles.hpp"

using namespace mixlink;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("scalar functions") {
  CHECK(special::log_gamma(1.0) == 0.0);
  CHECK(special::log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-15));
  CHECK(special::logistic_cdf(0.0) == 0.5);
  CHECK(special::logistic_pdf(0.0) == 0.25);
  CHECK(special::std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(special::std_normal_cdf(0.0) == 0.5);
  for (double w : {0.0, 0.1, 0.37, 0.9, 1.0}) CHECK(special::beta_cdf(w, 1.0, 1.0) == doctest::Approx(w));
  CHECK(special::log_beta_density(0.5, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(special::log_beta_density(0.25, 2.0, 2.0) == doctest::Approx(std::log(6.0 * 0.25 * 0.75)));
  CHECK_THROWS_AS(special::log_beta_density(0.0, 2.0, 2.0), Error);
  CHECK_THROWS_AS(special::log_beta_density(0.5, -1.0, 2.0), Error);
  CHECK_THROWS_AS(special::log_gamma(0.0), Error);
  const std::vector<double> xs{-1000.0, 0.0, -1000.0};
  CHECK(special::log_sum_exp(xs) == doctest::Approx(0.0));
  CHECK(special::log1p_exp(800.0) == doctest::Approx(800.0));
  CHECK(special::log1p_exp(-800.0) == 0.0);
}

TEST_CASE("beta_cdf and beta_quantile round trip and monotone") {
  for (double a : {0.3, 1.0, 2.5, 40.0})
    for (double b : {0.2, 1.0, 7.0}) {
      double prev = 0.0;
      for (int k = 1; k < 20; ++k) {
        const double p = k / 20.0;
        const double w = special::beta_quantile(p, a, b);
        CHECK(std::abs(special::beta_cdf(w, a, b) - p) < 1e-9);
        const double c = special::beta_cdf(k / 20.0, a, b);
        CHECK(c >= prev);
        prev = c;
      }
    }
}

TEST_CASE("Gauss-Legendre rule exactness") {
  const auto& rule = special::default_rule();
  CHECK(rule.order() == 64);
  CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
  for (std::size_t i = 1; i < rule.order(); ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
  for (int p = 0; p <= 127; ++p)
    CHECK(std::abs(special::integrate_unit([p](double w) { return (p + 1) * std::pow(w, p); }, rule) -
                   1.0) < 1e-12);
  CHECK(special::integrate_unit([](double) { return 1.0; }, rule) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(special::integrate_unit([](double w) { return 12.0 * w * (1 - w) * (1 - w); }, rule) -
                 1.0) < 1e-12);
  CHECK_THROWS_WITH_AS(special::integrate_unit([](double) { return NAN; }, rule),
                       doctest::Contains("NonFinite"), Error);
}

TEST_CASE("adaptive quadrature") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.3, 6.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double a = u(rng), b = u(rng);
    const auto r = special::integrate_unit_adaptive(
        [&](double w) { return std::exp(special::log_beta_density(w, a, b)); });
    CHECK(std::abs(r.value - 1.0) < 1e-9);
  }
  special::AdaptiveOptions tight;
  tight.rel_tol = 1e-15;
  tight.max_level = 3;
  CHECK_THROWS_WITH_AS(
      special::integrate_unit_adaptive([](double w) { return std::sin(200.0 * w) + 1.0; }, tight),
      doctest::Contains("ToleranceNotMet"), Error);
}

TEST_CASE("Beta-binomial kernel equals the closed form") {
  for (double a : {1e-4, 0.05, 0.3, 1.0, 2.0, 17.0, 1e4})
    for (double bscale : {0.5, 1.0, 3.0})
      for (auto [y, m] : {std::pair{0.0, 10.0}, {3.0, 10.0}, {10.0, 10.0}, {40.0, 100.0}}) {
        const double b = a * bscale;
        const simd::BinomialTerms t{y, m - y, 0.0, 1.0, a, b};
        const double got = special::log_choose(m, y) +
                           special::log_integrate_binomial_kernel(t).value - special::log_beta(a, b);
        CHECK(std::abs(std::exp(got) / oracle::beta_binomial_pmf(y, m, a, b) - 1.0) < 1e-9);
      }
  // Large m on a subinterval: the kernel stays finite in log space.
  const simd::BinomialTerms big{3000.0, 7000.0, 0.1, 0.8, 0.7, 1.3};
  CHECK(std::isfinite(special::log_integrate_binomial_kernel(big).value));
}

TEST_CASE("confluent 1F1 examples") {
  for (double a : {0.1, 1.0, 3.0})
    CHECK(std::abs(special::confluent_1f1_scaled(0.0, a, a + 1.5) - 1.0) < 1e-13);
  for (double x : {-50.0, -5.0, -0.3, 0.7, 12.0})
    CHECK(rel(special::confluent_1f1_scaled(x, 1.0, 2.0), std::expm1(x) / x) < 1e-10);
  CHECK_THROWS_WITH_AS(special::confluent_1f1_scaled(-1.0, 2.0, 2.0), doctest::Contains("ParameterError"),
                       Error);
  CHECK_THROWS_WITH_AS(special::confluent_1f1_scaled(-1.0, 0.0, 2.0), doctest::Contains("ParameterError"),
                       Error);
}

TEST_CASE("1F1 agrees with the Boost oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ua(0.05, 60.0), ud(0.05, 20.0), ux(-200.0, 0.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double a = ua(rng), b = a + ud(rng), x = ux(rng);
    const double expect = std::log(boost::math::hypergeometric_1F1(a, b, x));
    CHECK(std::abs(special::log_confluent_1f1(x, a, b) - expect) < 1e-10);
  }
}

TEST_CASE("series and integral branches agree across the handoff") {
  // 100 points spanning |x| in [20, 40] around the switch at 30.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ua(0.1, 30.0), ud(0.1, 10.0);
  for (int k = 0; k < 100; ++k) {
    const double x = -20.0 - 20.0 * k / 99.0;
    const double a = ua(rng), b = a + ud(rng);
    const double s = special::log_hyp1f1_series(x, a, b);
    const double q = special::log_hyp1f1_integral(x, a, b);
    CHECK(std::abs(std::expm1(s - q)) < 1e-9);
  }
}
