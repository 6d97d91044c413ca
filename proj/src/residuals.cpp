#include <algorithm>
#include <cmath>
#include <vector>

#include "mixlink/diagnostics.hpp"
#include "mixlink/error.hpp"
#include "mixlink/special.hpp"

namespace mixlink::diagnostics {

namespace {

constexpr double kClamp = 1e-12;

}  // namespace

ResidualSet quantile_residuals(const Dataset& data, const PosteriorDraws& draws,
                               const MixLinkModel& skeleton, std::uint64_t seed) {
  if (draws.rows() == 0) throw Error(ErrorCode::DomainError, "no posterior draws");
  data.validate(skeleton.family);
  const std::size_t n = data.size();
  const bool discrete = skeleton.family != Family::Normal;

  std::vector<Rng> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) streams.push_back(substream(seed, i));

  ResidualSet out;
  out.seed = seed;
  out.draws_used = draws.rows();
  out.r.assign(n, 0.0);
  for (std::size_t r = 0; r < draws.rows(); ++r) {
    const MixLinkModel model = draws.model_at(r, skeleton);
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = model.linked_mean(data.X.row(static_cast<Eigen::Index>(i)).transpose());
      const double m = data.trials(i);
      double u;
      if (discrete) {
        const distributions::CdfBracket b = distributions::cdf_bracket(data.y[i], m, theta, model);
        const double v = random::uniform_open(streams[i]);
        if (b.at - b.below <= 0.0) {
          ++out.degenerate_intervals;
          u = b.at;
        } else {
          u = b.below + v * (b.at - b.below);
        }
      } else {
        u = distributions::cdf(data.y[i], m, theta, model);
      }
      out.r[i] += special::std_normal_quantile(std::clamp(u, kClamp, 1.0 - kClamp));
    }
  }
  for (double& v : out.r) v /= static_cast<double>(draws.rows());
  return out;
}

}  // namespace mixlink::diagnostics
