#include <cmath>
#include <string>

#include "mixlink/distributions.hpp"
#include "mixlink/error.hpp"
#include "mixlink/special.hpp"

namespace mixlink {

const char* to_string(Family family) {
  switch (family) {
    case Family::Binomial: return "binomial";
    case Family::Poisson: return "poisson";
    case Family::Normal: return "normal";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "binomial") return Family::Binomial;
  if (name == "poisson") return Family::Poisson;
  if (name == "normal") return Family::Normal;
  throw Error(ErrorCode::ConfigError, "unknown family '" + name + "'");
}

InverseLink canonical_link(Family family) {
  switch (family) {
    case Family::Binomial: return InverseLink::Logistic;
    case Family::Poisson: return InverseLink::Exp;
    case Family::Normal: return InverseLink::Identity;
  }
  return InverseLink::Identity;
}

MixLinkModel MixLinkModel::make(Family family, std::size_t J, Eigen::VectorXd beta) {
  MixLinkModel model;
  model.family = family;
  model.J = J;
  model.inv_link = canonical_link(family);
  model.beta = std::move(beta);
  model.pi.assign(J, 1.0 / static_cast<double>(J));
  return model;
}

void MixLinkModel::validate() const {
  if (J == 0) throw Error(ErrorCode::InvalidModel, "J must be at least 1");
  if (inv_link != canonical_link(family))
    throw Error(ErrorCode::InvalidModel, std::string("link does not match family ") + to_string(family));
  if (pi.size() != J) throw Error(ErrorCode::InvalidModel, "pi must have J entries");
  double total = 0.0;
  for (double p : pi) {
    if (!(p >= kMinWeight) || !std::isfinite(p))
      throw Error(ErrorCode::InvalidModel, "every mixing weight must be >= 1e-8");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidModel, "pi must sum to 1");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error(ErrorCode::InvalidModel, "kappa must be > 0");
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    if (!std::isfinite(beta[i])) throw Error(ErrorCode::InvalidModel, "beta must be finite");
  if (family == Family::Normal) {
    if (sigma2_components.empty()) {
      if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw Error(ErrorCode::InvalidModel, "sigma2 must be > 0");
    } else {
      if (sigma2_components.size() != J)
        throw Error(ErrorCode::InvalidModel, "sigma2_components must have J entries");
      for (double s : sigma2_components)
        if (!(s > 0.0)) throw Error(ErrorCode::InvalidModel, "component variances must be > 0");
    }
  }
}

double MixLinkModel::linked_mean(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != beta.size())
    throw Error(ErrorCode::InvalidData, "covariate row length does not match beta");
  const double eta = x.dot(beta);
  switch (inv_link) {
    case InverseLink::Logistic: return special::logistic_cdf(eta);
    case InverseLink::Exp: return std::exp(eta);
    case InverseLink::Identity: return eta;
  }
  return eta;
}

MeanSpace MixLinkModel::mean_space() const {
  switch (family) {
    case Family::Binomial: return MeanSpace::UnitInterval;
    case Family::Poisson: return MeanSpace::PositiveHalfLine;
    case Family::Normal: return MeanSpace::RealLine;
  }
  return MeanSpace::RealLine;
}

void Dataset::validate(Family family) const {
  const std::size_t n = y.size();
  if (static_cast<std::size_t>(X.rows()) != n)
    throw Error(ErrorCode::InvalidData, "design matrix rows do not match the response length");
  if (family == Family::Binomial && m.size() != n)
    throw Error(ErrorCode::InvalidData, "binomial data need one trial count per row");
  for (std::size_t i = 0; i < n; ++i) {
    const double v = y[i];
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvalidData, "response " + std::to_string(i) + " is not finite");
    if (family != Family::Normal && (v < 0.0 || v != std::floor(v)))
      throw Error(ErrorCode::InvalidData, "response " + std::to_string(i) + " must be a count");
    if (family == Family::Binomial) {
      if (!(m[i] >= 1.0) || m[i] != std::floor(m[i]))
        throw Error(ErrorCode::InvalidData, "trial count " + std::to_string(i) + " must be >= 1");
      if (v > m[i])
        throw Error(ErrorCode::InvalidData, "response " + std::to_string(i) + " exceeds its trials");
    }
  }
  if (!X.allFinite()) throw Error(ErrorCode::InvalidData, "design matrix has non-finite entries");
}

}  // namespace mixlink
