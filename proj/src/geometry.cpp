#include "mixlink/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "mixlink/error.hpp"

namespace mixlink {

namespace {

constexpr double kWeightSumTolerance = 1e-12;

void check_weights(std::span<const double> weights) {
  if (weights.empty()) throw Error(ErrorCode::DomainError, "weights must be nonempty");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::DomainError, "weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance)
    throw Error(ErrorCode::DomainError, "weights must sum to 1 (got " + std::to_string(total) + ")");
}

bool in_unit_interval(double v) {
  return v >= -geometry::kBoundarySlack && v <= 1.0 + geometry::kBoundarySlack;
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

bool lexicographic_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool nearly_equal(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > geometry::kDuplicateTolerance) return false;
  return true;
}

VertexMatrix from_columns(std::vector<std::vector<double>> columns, std::size_t J) {
  std::sort(columns.begin(), columns.end(), lexicographic_less);
  std::vector<std::vector<double>> unique;
  for (auto& c : columns) {
    bool seen = false;
    for (const auto& u : unique) {
      if (nearly_equal(c, u)) {
        seen = true;
        break;
      }
    }
    if (!seen) unique.push_back(std::move(c));
  }
  Eigen::MatrixXd V(J, unique.size());
  for (std::size_t l = 0; l < unique.size(); ++l)
    for (std::size_t j = 0; j < J; ++j) V(j, l) = unique[l][j];
  return VertexMatrix(std::move(V));
}

}  // namespace

void ConstraintSet::validate() const {
  check_weights(weights);
  switch (space) {
    case MeanSpace::UnitInterval:
      if (!(theta >= 0.0 && theta <= 1.0))
        throw Error(ErrorCode::DomainError, "theta must lie in [0, 1]");
      break;
    case MeanSpace::PositiveHalfLine:
      if (!(theta >= 0.0) || !std::isfinite(theta))
        throw Error(ErrorCode::DomainError, "theta must be nonnegative");
      break;
    case MeanSpace::RealLine:
      if (!std::isfinite(theta)) throw Error(ErrorCode::DomainError, "theta must be finite");
      break;
  }
}

VertexMatrix::VertexMatrix(Eigen::MatrixXd vertices) : V(std::move(vertices)) {
  row_lower = V.rowwise().minCoeff();
  row_upper = V.rowwise().maxCoeff();
}

namespace geometry {

VertexMatrix vertices_j2_prob(double theta, std::span<const double> weights) {
  if (weights.size() != 2) throw Error(ErrorCode::DomainError, "vertices_j2_prob requires J = 2");
  check_weights(weights);
  if (theta < 0.0 || theta > 1.0)
    throw Error(ErrorCode::EmptySet, "theta outside [0, 1] leaves the constraint set empty");
  const double p1 = weights[0];
  const double p2 = weights[1];

  // Degenerate weights put the whole constraint on one coordinate.
  if (p1 == 0.0 || p2 == 0.0) return find_vertices_prob(theta, weights);

  std::vector<std::vector<double>> columns;
  // v1: mu_1 as large as possible.
  if (theta / p1 <= 1.0)
    columns.push_back({theta / p1, 0.0});
  else
    columns.push_back({1.0, clamp_unit((theta - p1) / p2)});
  // v2: mu_1 as small as possible.
  if ((theta - p2) / p1 >= 0.0)
    columns.push_back({clamp_unit((theta - p2) / p1), 1.0});
  else
    columns.push_back({0.0, theta / p2});
  return from_columns(std::move(columns), 2);
}

VertexMatrix find_vertices_prob(double theta, std::span<const double> weights) {
  const std::size_t J = weights.size();
  if (J > kMaxVertexDimension)
    throw Error(ErrorCode::DimensionTooLarge,
                "vertex enumeration is capped at J = " + std::to_string(kMaxVertexDimension));
  check_weights(weights);
  if (!std::isfinite(theta)) throw Error(ErrorCode::DomainError, "theta must be finite");

  std::vector<std::vector<double>> columns;
  std::vector<double> v(J);
  const std::uint64_t patterns = std::uint64_t{1} << (J - 1);
  for (std::size_t j = 0; j < J; ++j) {
    if (!(weights[j] > 0.0)) continue;
    for (std::uint64_t bits = 0; bits < patterns; ++bits) {
      double rest = 0.0;
      std::size_t bit = 0;
      for (std::size_t i = 0; i < J; ++i) {
        if (i == j) continue;
        v[i] = static_cast<double>((bits >> bit++) & 1u);
        rest += v[i] * weights[i];
      }
      const double pivot = (theta - rest) / weights[j];
      if (!in_unit_interval(pivot)) continue;
      v[j] = clamp_unit(pivot);
      columns.push_back(v);
    }
  }
  if (columns.empty())
    throw Error(ErrorCode::EmptySet, "no vertex candidate lies in the constraint set");
  return from_columns(std::move(columns), J);
}

VertexMatrix vertices_positive(double theta, std::span<const double> weights) {
  check_weights(weights);
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw Error(ErrorCode::DomainError, "theta must be nonnegative");
  const std::size_t J = weights.size();
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(J, J);
  for (std::size_t j = 0; j < J; ++j) {
    if (!(weights[j] > 0.0))
      throw Error(ErrorCode::ZeroWeight, "positive-mean vertices need every weight > 0");
    V(j, j) = theta / weights[j];
  }
  return VertexMatrix(std::move(V));
}

RealBasis real_basis(std::span<const double> weights) {
  check_weights(weights);
  const std::size_t J = weights.size();
  const double last = weights[J - 1];
  if (!(last > 0.0))
    throw Error(ErrorCode::ZeroLastWeight, "the last weight must be positive; reorder components");

  RealBasis basis;
  basis.B = Eigen::MatrixXd::Zero(J, J - 1);
  basis.diag_scale = Eigen::VectorXd::Ones(J);
  double head_sq = 0.0;
  for (std::size_t j = 0; j + 1 < J; ++j) {
    basis.B(j, j) = 1.0;
    basis.B(J - 1, j) = -weights[j] / last;
    head_sq += weights[j] * weights[j];
  }
  basis.diag_scale(J - 1) = J == 1 ? 0.0 : head_sq / (last * last);
  return basis;
}

bool membership(std::span<const double> mu, const ConstraintSet& set, double tol) {
  if (mu.size() != set.dim()) return false;
  double mean = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const double v = mu[j];
    if (!std::isfinite(v)) return false;
    switch (set.space) {
      case MeanSpace::UnitInterval:
        if (v < -tol || v > 1.0 + tol) return false;
        break;
      case MeanSpace::PositiveHalfLine:
        if (v < -tol) return false;
        break;
      case MeanSpace::RealLine:
        break;
    }
    mean += v * set.weights[j];
  }
  return std::abs(mean - set.theta) <= tol;
}

}  // namespace geometry
}  // namespace mixlink
