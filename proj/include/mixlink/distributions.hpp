#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mixlink/geometry.hpp"
#include "mixlink/random.hpp"

namespace mixlink {

enum class Family { Binomial, Poisson, Normal };
enum class InverseLink { Logistic, Exp, Identity };

const char* to_string(Family family);
Family parse_family(const std::string& name);
InverseLink canonical_link(Family family);

// Smallest admissible mixing weight.
inline constexpr double kMinWeight = 1e-8;

struct MixLinkModel {
  Family family = Family::Binomial;
  std::size_t J = 1;
  InverseLink inv_link = InverseLink::Logistic;
  Eigen::VectorXd beta;
  std::vector<double> pi;
  double kappa = 1.0;
  double sigma2 = 1.0;
  // Normal only: per-component variances. Empty means homoskedastic sigma2.
  std::vector<double> sigma2_components;

  static MixLinkModel make(Family family, std::size_t J, Eigen::VectorXd beta);

  // Throws Error(InvalidModel).
  void validate() const;
  double linked_mean(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  MeanSpace mean_space() const;
};

struct Dataset {
  std::vector<double> y;
  std::vector<double> m;  // Binomial only
  Eigen::MatrixXd X;

  std::size_t size() const { return y.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(X.cols()); }
  double trials(std::size_t i) const { return m.empty() ? 0.0 : m[i]; }

  // Throws Error(InvalidData).
  void validate(Family family) const;
};

// psi ~ Beta(a, b) placed on [lower, upper] by H(w) = lower + (upper - lower) w.
// A degenerate row (upper - lower below kDegenerateWidth) is a point mass at
// lower; a and b are then unused.
struct MatchedBeta {
  double a = 1.0;
  double b = 1.0;
  double lower = 0.0;
  double upper = 1.0;
  bool degenerate = false;

  double map(double w) const { return lower + (upper - lower) * w; }
};

// Vertices of A(theta, pi) and the matched Beta law of every coordinate.
struct RandomEffects {
  VertexMatrix vertices;
  std::vector<MatchedBeta> rows;
};

namespace distributions {

inline constexpr double kDegenerateWidth = 1e-12;

// Beta law with the mean and variance of row' lambda, lambda ~ Dirichlet(kappa 1).
MatchedBeta moment_match(std::span<const double> row, double kappa);

RandomEffects binomial_effects(double theta, std::span<const double> pi, double kappa);
// Same as binomial_effects, memoized on the exact bit patterns of the inputs.
std::shared_ptr<const RandomEffects> cached_binomial_effects(double theta,
                                                             std::span<const double> pi,
                                                             double kappa);
void clear_effects_cache();
std::size_t effects_cache_size();

// ---- densities at a linked mean theta -------------------------------------

double log_pmf_binomial(double y, double m, double theta, std::span<const double> pi, double kappa);
double log_pmf_poisson(double y, double theta, std::span<const double> pi, double kappa);
// sigma2 holds one value (homoskedastic) or J values.
double log_pdf_normal(double y, double theta, std::span<const double> pi, double kappa,
                      std::span<const double> sigma2);

// ---- model-level API ---------------------------------------------------------

double log_pmf_binomial(double y, double m, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const MixLinkModel& model);
double log_pmf_poisson(double y, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const MixLinkModel& model);
double log_pdf_normal(double y, const Eigen::Ref<const Eigen::VectorXd>& x,
                      const MixLinkModel& model);

// Family dispatch; m is ignored unless Binomial.
double log_density(double y, double m, double theta, const MixLinkModel& model);
double log_density(double y, double m, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const MixLinkModel& model);

// P(Y <= y).
double cdf(double y, double m, double theta, const MixLinkModel& model);
double cdf(double y, double m, const Eigen::Ref<const Eigen::VectorXd>& x,
           const MixLinkModel& model);

// (P(Y <= y - 1), P(Y <= y)) for the discrete families, computed together.
struct CdfBracket {
  double below = 0.0;
  double at = 0.0;
};
CdfBracket cdf_bracket(double y, double m, double theta, const MixLinkModel& model);

double sample(double m, double theta, const MixLinkModel& model, Rng& rng);
double sample(double m, const Eigen::Ref<const Eigen::VectorXd>& x, const MixLinkModel& model,
              Rng& rng);

enum class VarianceForm { BinomialMixture, PoissonClosedForm, NormalClosedForm };

struct VarianceResult {
  double value = 0.0;
  VarianceForm form = VarianceForm::BinomialMixture;
};

double mean(double m, double theta, const MixLinkModel& model);
VarianceResult variance(double m, double theta, const MixLinkModel& model);
VarianceResult variance(double m, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const MixLinkModel& model);

double loglik(const Dataset& data, const MixLinkModel& model);

// Random-clumped binomial: p Bin(y | m, (1-rho) p + rho) + (1-p) Bin(y | m, (1-rho) p).
double rcb_log_pmf(double y, double m, double p, double rho);

// sum_j w_j Bin(y | m, mu_j).
double finite_mixture_log_pmf(double y, double m, std::span<const double> means,
                              std::span<const double> weights);

}  // namespace distributions
}  // namespace mixlink
