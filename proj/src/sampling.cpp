#include <cmath>
#include <vector>

#include "mixlink/distributions.hpp"
#include "mixlink/error.hpp"

namespace mixlink::distributions {

// Z is drawn first; only the random effect of component Z is realized.
double sample(double m, double theta, const MixLinkModel& model, Rng& rng) {
  const std::size_t J = model.pi.size();
  switch (model.family) {
    case Family::Binomial: {
      const long trials = static_cast<long>(m);
      if (J == 1) return static_cast<double>(random::binomial(trials, theta, rng));
      const auto effects = cached_binomial_effects(theta, model.pi, model.kappa);
      const std::size_t z = random::discrete(model.pi, rng);
      const MatchedBeta& row = effects->rows[z];
      const double mu = row.degenerate ? row.lower : row.map(random::beta(row.a, row.b, rng));
      return static_cast<double>(random::binomial(trials, mu, rng));
    }
    case Family::Poisson: {
      if (J == 1) return static_cast<double>(random::poisson(theta, rng));
      const std::size_t z = random::discrete(model.pi, rng);
      const double psi =
          random::beta(model.kappa, model.kappa * static_cast<double>(J - 1), rng);
      return static_cast<double>(random::poisson(theta / model.pi[z] * psi, rng));
    }
    case Family::Normal: {
      auto s2 = [&](std::size_t j) {
        return model.sigma2_components.empty() ? model.sigma2 : model.sigma2_components[j];
      };
      if (J == 1) return theta + std::sqrt(s2(0)) * random::standard_normal(rng);
      // mu = B lambda + theta 1 with lambda ~ N(0, kappa^2 I).
      std::vector<double> lambda(J - 1);
      for (double& l : lambda) l = model.kappa * random::standard_normal(rng);
      const std::size_t z = random::discrete(model.pi, rng);
      double mu = theta;
      if (z + 1 < J) {
        mu += lambda[z];
      } else {
        for (std::size_t j = 0; j + 1 < J; ++j) mu -= model.pi[j] / model.pi[J - 1] * lambda[j];
      }
      return mu + std::sqrt(s2(z)) * random::standard_normal(rng);
    }
  }
  return 0.0;
}

double sample(double m, const Eigen::Ref<const Eigen::VectorXd>& x, const MixLinkModel& model,
              Rng& rng) {
  return sample(m, model.linked_mean(x), model, rng);
}

}  // namespace mixlink::distributions
