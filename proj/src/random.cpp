#include "mixlink/random.hpp"

#include <cmath>

#include "mixlink/special.hpp"

namespace mixlink {

Rng substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6d6c6b31u};
  return Rng(seq);
}

namespace random {

double uniform_open(Rng& rng) {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

double log_gamma_variate(double shape, Rng& rng) {
  if (shape >= 1.0) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return std::log(dist(rng));
  }
  // G(a) = G(a + 1) U^(1/a)
  std::gamma_distribution<double> dist(shape + 1.0, 1.0);
  const double boosted = std::log(dist(rng));
  return boosted + std::log(uniform_open(rng)) / shape;
}

double beta(double a, double b, Rng& rng) {
  const double la = log_gamma_variate(a, rng);
  const double lb = log_gamma_variate(b, rng);
  return special::logistic_cdf(la - lb);
}

long binomial(long trials, double p, Rng& rng) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<long> dist(trials, p);
  return dist(rng);
}

long poisson(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long> dist(mean);
  return dist(rng);
}

std::size_t discrete(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform_open(rng) * total;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (u < weights[j]) return j;
    u -= weights[j];
  }
  for (std::size_t j = weights.size(); j-- > 0;)
    if (weights[j] > 0.0) return j;
  return 0;
}

}  // namespace random
}  // namespace mixlink
