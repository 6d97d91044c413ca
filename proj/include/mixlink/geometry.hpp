#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mixlink {

enum class MeanSpace { UnitInterval, PositiveHalfLine, RealLine };

// The link-constraint set A(theta, pi) = { mu in M^J : mu' pi = theta }.
struct ConstraintSet {
  double theta = 0.0;
  std::vector<double> weights;
  MeanSpace space = MeanSpace::UnitInterval;

  std::size_t dim() const { return weights.size(); }

  // Throws Error(DomainError) when the weights are not a simplex point or theta
  // lies outside the mean space.
  void validate() const;
};

// Extreme points of A stored as the columns of a J x k matrix, together with
// the per-row ranges [row_lower_j, row_upper_j] used by the Beta random effect.
struct VertexMatrix {
  Eigen::MatrixXd V;
  Eigen::VectorXd row_lower;
  Eigen::VectorXd row_upper;

  VertexMatrix() = default;
  explicit VertexMatrix(Eigen::MatrixXd vertices);

  std::size_t rows() const { return static_cast<std::size_t>(V.rows()); }
  std::size_t count() const { return static_cast<std::size_t>(V.cols()); }
};

// Affine description of A for real-valued means: mu = B lambda + theta 1.
struct RealBasis {
  Eigen::MatrixXd B;           // J x (J-1)
  Eigen::VectorXd diag_scale;  // diagonal of B B'
};

namespace geometry {

inline constexpr std::size_t kMaxVertexDimension = 25;
inline constexpr double kDuplicateTolerance = 1e-10;
inline constexpr double kBoundarySlack = 1e-12;

// Closed-form vertices for J = 2 by the two-case analysis of the line
// pi_1 mu_1 + pi_2 mu_2 = theta crossing the unit square.
VertexMatrix vertices_j2_prob(double theta, std::span<const double> weights);

// Enumerates the J 2^(J-1) candidates with at most one fractional coordinate
// and keeps those inside the cube. Columns are deduplicated within
// kDuplicateTolerance and sorted lexicographically.
VertexMatrix find_vertices_prob(double theta, std::span<const double> weights);

// V = Diag(theta / pi_1, ..., theta / pi_J).
VertexMatrix vertices_positive(double theta, std::span<const double> weights);

RealBasis real_basis(std::span<const double> weights);

bool membership(std::span<const double> mu, const ConstraintSet& set, double tol);

}  // namespace geometry
}  // namespace mixlink
