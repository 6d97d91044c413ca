#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mixlink/error.hpp"
#include "mixlink/geometry.hpp"
#include "oracles.hpp"

using namespace mixlink;

namespace {

std::vector<oracle::Point> columns(const VertexMatrix& vm) {
  std::vector<oracle::Point> out;
  for (Eigen::Index l = 0; l < vm.V.cols(); ++l) {
    oracle::Point p(static_cast<std::size_t>(vm.V.rows()));
    for (Eigen::Index j = 0; j < vm.V.rows(); ++j) p[static_cast<std::size_t>(j)] = vm.V(j, l);
    out.push_back(p);
  }
  return out;
}

bool same_set(const std::vector<oracle::Point>& a, const std::vector<oracle::Point>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    bool found = false;
    for (const auto& q : b) {
      double diff = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) diff = std::max(diff, std::abs(p[j] - q[j]));
      found = found || diff <= tol;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("vertices_j2_prob worked cases") {
  {
    const std::vector<double> pi{11.0 / 20.0, 9.0 / 20.0};
    const auto vm = geometry::vertices_j2_prob(0.5, pi);
    CHECK(same_set(columns(vm), {{10.0 / 11.0, 0.0}, {1.0 / 11.0, 1.0}}, 1e-12));
  }
  {
    const std::vector<double> pi{0.5, 0.5};
    const auto vm = geometry::vertices_j2_prob(1.0, pi);
    CHECK(vm.count() == 1);
    CHECK(vm.V(0, 0) == doctest::Approx(1.0));
    CHECK(vm.V(1, 0) == doctest::Approx(1.0));
  }
  {
    const std::vector<double> pi{0.3, 0.7};
    const auto vm = geometry::vertices_j2_prob(0.0, pi);
    CHECK(vm.count() == 1);
    CHECK(vm.V.cwiseAbs().maxCoeff() == 0.0);
  }
  const std::vector<double> pi{0.4, 0.6};
  CHECK_THROWS_AS(geometry::vertices_j2_prob(1.2, pi), Error);
  CHECK_THROWS_AS(geometry::vertices_j2_prob(-0.1, pi), Error);
}

TEST_CASE("find_vertices_prob worked case has the five derived vertices") {
  const std::vector<double> pi{0.5, 0.3, 0.2};
  const auto vm = geometry::find_vertices_prob(0.65, pi);
  const std::vector<oracle::Point> expected{
      {0.3, 1, 1}, {0.7, 1, 0}, {0.9, 0, 1}, {1, 0.5, 0}, {1, 0, 0.75}};
  CHECK(vm.count() == 5);
  CHECK(same_set(columns(vm), expected, 1e-12));
  // lexicographic column order
  const auto cols = columns(vm);
  CHECK(std::is_sorted(cols.begin(), cols.end()));
}

TEST_CASE("find_vertices_prob equals the brute-force oracle and Lemma 1") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t J : {2u, 3u, 4u}) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto pi = oracle::random_simplex(J, rng);
      const double theta = u(rng);
      const auto vm = geometry::find_vertices_prob(theta, pi);
      CHECK(same_set(columns(vm), oracle::brute_force_vertices(theta, pi), 1e-10));
      for (const auto& c : columns(vm)) {
        int interior = 0;
        for (double v : c) interior += v > 1e-12 && v < 1.0 - 1e-12;
        CHECK(interior <= 1);
      }
      if (J == 2) CHECK(same_set(columns(vm), columns(geometry::vertices_j2_prob(theta, pi)), 1e-10));
    }
  }
}

TEST_CASE("convex combinations of vertices stay in A") {
  std::mt19937_64 rng(5);
  std::gamma_distribution<double> g(0.7, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const auto pi = oracle::random_simplex(4, rng);
    const double theta = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto vm = geometry::find_vertices_prob(theta, pi);
    Eigen::VectorXd lambda(vm.V.cols());
    for (Eigen::Index l = 0; l < lambda.size(); ++l) lambda[l] = g(rng) + 1e-12;
    lambda /= lambda.sum();
    const Eigen::VectorXd mu = vm.V * lambda;
    const ConstraintSet set{theta, pi, MeanSpace::UnitInterval};
    CHECK(geometry::membership(std::vector<double>(mu.data(), mu.data() + mu.size()), set, 1e-10));
  }
}

TEST_CASE("zero weights are never pivoted on") {
  const std::vector<double> pi{0.5, 0.0, 0.5};
  const auto vm = geometry::find_vertices_prob(0.4, pi);
  for (const auto& c : columns(vm)) CHECK((c[1] == 0.0 || c[1] == 1.0));
}

TEST_CASE("dimension cap and empty set") {
  std::vector<double> pi(26, 1.0 / 26.0);
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < pi.size(); ++j) s += pi[j];
  pi.back() = 1.0 - s;
  CHECK_THROWS_WITH_AS(geometry::find_vertices_prob(0.5, pi), doctest::Contains("DimensionTooLarge"),
                       Error);
  const std::vector<double> ok{0.5, 0.5};
  CHECK_THROWS_WITH_AS(geometry::find_vertices_prob(1.5, ok), doctest::Contains("EmptySet"), Error);
}

TEST_CASE("row bounds are the row min and max") {
  const std::vector<double> pi{0.5, 0.3, 0.2};
  const auto vm = geometry::find_vertices_prob(0.65, pi);
  for (Eigen::Index j = 0; j < 3; ++j) {
    CHECK(vm.row_lower[j] == vm.V.row(j).minCoeff());
    CHECK(vm.row_upper[j] == vm.V.row(j).maxCoeff());
  }
}

TEST_CASE("vertices_positive") {
  {
    const std::vector<double> pi{0.5, 0.25, 0.25};
    const auto vm = geometry::vertices_positive(2.0, pi);
    Eigen::MatrixXd expected = Eigen::Vector3d(4, 8, 8).asDiagonal();
    CHECK((vm.V - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(vm.row_lower.cwiseAbs().maxCoeff() == 0.0);
    CHECK(vm.row_upper[1] == doctest::Approx(8.0));
    for (Eigen::Index l = 0; l < vm.V.cols(); ++l) CHECK((vm.V.col(l).array() != 0.0).count() == 1);
  }
  {
    const std::vector<double> pi{0.75, 0.25};
    const auto vm = geometry::vertices_positive(3.0, pi);
    CHECK(vm.V(0, 0) == doctest::Approx(4.0));
    CHECK(vm.V(1, 1) == doctest::Approx(12.0));
    CHECK(vm.V(0, 1) == 0.0);
    CHECK(vm.V(1, 0) == 0.0);
  }
  {
    const std::vector<double> pi{0.5, 0.5};
    CHECK(geometry::vertices_positive(0.0, pi).V.cwiseAbs().maxCoeff() == 0.0);
  }
  const std::vector<double> zero{1.0, 0.0};
  CHECK_THROWS_WITH_AS(geometry::vertices_positive(1.0, zero), doctest::Contains("ZeroWeight"), Error);
}

TEST_CASE("real_basis") {
  {
    const std::vector<double> pi{0.5, 0.3, 0.2};
    const RealBasis rb = geometry::real_basis(pi);
    CHECK(rb.B(2, 0) == doctest::Approx(-2.5));
    CHECK(rb.B(2, 1) == doctest::Approx(-1.5));
    CHECK(rb.diag_scale[0] == doctest::Approx(1.0));
    CHECK(rb.diag_scale[1] == doctest::Approx(1.0));
    CHECK(rb.diag_scale[2] == doctest::Approx(8.5));
    const Eigen::VectorXd diag = (rb.B * rb.B.transpose()).diagonal();
    CHECK((diag - rb.diag_scale).cwiseAbs().maxCoeff() < 1e-12);
  }
  {
    const std::vector<double> pi{0.5, 0.5};
    const RealBasis rb = geometry::real_basis(pi);
    CHECK(rb.B(0, 0) == doctest::Approx(1.0));
    CHECK(rb.B(1, 0) == doctest::Approx(-1.0));
    CHECK(rb.diag_scale[1] == doctest::Approx(1.0));
  }
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int rep = 0; rep < 50; ++rep) {
    const auto pi = oracle::random_simplex(4, rng);
    const RealBasis rb = geometry::real_basis(pi);
    const Eigen::Map<const Eigen::VectorXd> p(pi.data(), 4);
    CHECK((rb.B.transpose() * p).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::VectorXd lambda(3);
    for (int k = 0; k < 3; ++k) lambda[k] = z(rng);
    const double theta = z(rng);
    const Eigen::VectorXd mu = rb.B * lambda + Eigen::VectorXd::Constant(4, theta);
    CHECK(std::abs(mu.dot(p) - theta) < 1e-12);
  }
  const std::vector<double> last_zero{1.0, 0.0};
  CHECK_THROWS_WITH_AS(geometry::real_basis(last_zero), doctest::Contains("ZeroLastWeight"), Error);
}

TEST_CASE("membership") {
  const double p = 0.37, rho = 0.6;
  const std::vector<double> pi{p, 1.0 - p};
  const ConstraintSet set{p, pi, MeanSpace::UnitInterval};
  const std::vector<double> rcb{(1.0 - rho) * p + rho, (1.0 - rho) * p};
  CHECK(geometry::membership(rcb, set, 1e-12));
  const std::vector<double> flat{p, p};
  CHECK(geometry::membership(flat, set, 1e-12));
  const ConstraintSet half{0.5, {0.5, 0.5}, MeanSpace::UnitInterval};
  const std::vector<double> ones{1.0, 1.0};
  CHECK_FALSE(geometry::membership(ones, half, 1e-12));
}
