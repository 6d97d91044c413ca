#pragma once

#include "mixlink/simd/kernels.hpp"

namespace mixlink::simd {

// How log H(w) (resp. log(1 - H(w))) is formed for one call. When the row
// touches the cube face (lower == 0, resp. upper == 1) the log factorizes into
// a constant plus log w (resp. log(1 - w)); this keeps precision for nodes
// packed against the endpoints and lets the vector path skip a log.
enum class LogForm { Absent, Shifted, General };

struct BinomialShape {
  LogForm success_form = LogForm::General;
  LogForm failure_form = LogForm::General;
  double success_offset = 0.0;
  double failure_offset = 0.0;
};

BinomialShape classify(const BinomialTerms& p);

#if defined(MIXLINK_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

}  // namespace mixlink::simd
