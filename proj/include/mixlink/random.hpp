#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace mixlink {

using Rng = std::mt19937_64;

// Independent stream for (seed, index), e.g. one per observation or chain.
Rng substream(std::uint64_t seed, std::uint64_t index);

namespace random {

double uniform_open(Rng& rng);  // (0, 1)
double standard_normal(Rng& rng);
// log of a Gamma(shape, 1) variate; stays finite for shapes far below 1.
double log_gamma_variate(double shape, Rng& rng);
double beta(double a, double b, Rng& rng);
long binomial(long trials, double p, Rng& rng);
long poisson(double mean, Rng& rng);
std::size_t discrete(std::span<const double> weights, Rng& rng);

}  // namespace random
}  // namespace mixlink
