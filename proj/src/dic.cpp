#include "mixlink/diagnostics.hpp"
#include "mixlink/error.hpp"

namespace mixlink::diagnostics {

DicResult dic(const Dataset& data, const PosteriorDraws& draws, const MixLinkModel& skeleton) {
  if (draws.rows() == 0) throw Error(ErrorCode::DomainError, "no posterior draws");
  DicResult out;
  double total = 0.0;
  for (std::size_t r = 0; r < draws.rows(); ++r)
    total += -2.0 * distributions::loglik(data, draws.model_at(r, skeleton));
  out.mean_deviance = total / static_cast<double>(draws.rows());
  out.deviance_at_mean = -2.0 * distributions::loglik(data, draws.posterior_mean(skeleton));
  out.effective_parameters = out.mean_deviance - out.deviance_at_mean;
  out.dic = 2.0 * out.mean_deviance - out.deviance_at_mean;
  return out;
}

}  // namespace mixlink::diagnostics
