#include <cmath>

#include "mixlink/distributions.hpp"

namespace mixlink::distributions {

double mean(double m, double theta, const MixLinkModel& model) {
  return model.family == Family::Binomial ? m * theta : theta;
}

VarianceResult variance(double m, double theta, const MixLinkModel& model) {
  const std::size_t J = model.pi.size();
  const double Jd = static_cast<double>(J);
  const double kappa = model.kappa;
  VarianceResult out;
  switch (model.family) {
    case Family::Binomial: {
      out.form = VarianceForm::BinomialMixture;
      // m theta (1 - theta) + m (m - 1) Var(mu_Z), where mu_Z is the success
      // probability of the realized component: Var(mu_Z) is the spread of the
      // row means under pi plus the pi-weighted matched Beta variances.
      double spread = 0.0;
      if (J > 1) {
        const auto effects = cached_binomial_effects(theta, model.pi, kappa);
        const Eigen::MatrixXd& V = effects->vertices.V;
        const double k = static_cast<double>(V.cols());
        for (std::size_t j = 0; j < J; ++j) {
          const auto row = V.row(static_cast<Eigen::Index>(j));
          const double row_mean = row.mean();
          const double s2 = (row.array() - row_mean).square().sum() / k;
          spread += model.pi[j] * ((row_mean - theta) * (row_mean - theta) + s2 / (1.0 + k * kappa));
        }
      }
      out.value = m * theta * (1.0 - theta) + m * (m - 1.0) * spread;
      return out;
    }
    case Family::Poisson: {
      out.form = VarianceForm::PoissonClosedForm;
      if (J == 1) {
        out.value = theta;
        return out;
      }
      double inv_sum = 0.0;
      for (double p : model.pi) inv_sum += 1.0 / p;
      out.value = theta + theta * theta * ((kappa + 1.0) / (Jd * (1.0 + Jd * kappa)) * inv_sum - 1.0);
      return out;
    }
    case Family::Normal: {
      out.form = VarianceForm::NormalClosedForm;
      auto s2 = [&](std::size_t j) {
        return model.sigma2_components.empty() ? model.sigma2 : model.sigma2_components[j];
      };
      if (J == 1) {
        out.value = s2(0);
        return out;
      }
      const RealBasis basis = geometry::real_basis(model.pi);
      double total = 0.0;
      for (std::size_t j = 0; j < J; ++j)
        total += model.pi[j] * (kappa * kappa * basis.diag_scale[j] + s2(j));
      out.value = total;
      return out;
    }
  }
  return out;
}

VarianceResult variance(double m, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const MixLinkModel& model) {
  return variance(m, model.linked_mean(x), model);
}

}  // namespace mixlink::distributions
