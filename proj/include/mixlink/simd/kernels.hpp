#pragma once

// Data-parallel inner loops of the quadrature layer.
//
// Every kernel has a scalar reference implementation. Builds on x86-64 also
// carry AVX2+FMA variants; the active table is chosen once at runtime from the
// CPU feature flags and may be forced to the scalar path with the environment
// variable MIXLINK_SIMD=scalar. Variants must agree with the reference to a
// few ulps (see tests/test_simd.cpp).

#include <cstddef>
#include <limits>

namespace mixlink::simd {

// A contiguous run of double-exponential quadrature nodes in structure-of-arrays
// form. For node t: w = 1 / (1 + exp(pi sinh t)), and the Jacobian of the map
// t -> w is |dw/dt| = exp(log_jac + log_w + log_1mw).
struct NodeSpan {
  const double* log_w = nullptr;
  const double* log_1mw = nullptr;
  const double* w = nullptr;
  const double* one_minus_w = nullptr;
  const double* log_jac = nullptr;
  std::size_t size = 0;
};

// log of  H(w)^successes (1 - H(w))^failures w^a (1-w)^b |dt-jacobian|
// with H(w) = lower (1 - w) + upper w.
struct BinomialTerms {
  double successes = 0.0;
  double failures = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  double a = 1.0;  // exponent of w, including the Jacobian factor
  double b = 1.0;  // exponent of 1 - w, including the Jacobian factor
};

// log of  w^a (1-w)^b exp(slope w) |dt-jacobian|
struct ExponentialTerms {
  double a = 1.0;
  double b = 1.0;
  double slope = 0.0;
};

// Running log-sum-exp state: value() = max + log(sum).
struct LseAccumulator {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  double value() const;
  void merge(const LseAccumulator& other);
};

struct KernelTable {
  const char* name;
  void (*binomial_log_terms)(const NodeSpan& nodes, const BinomialTerms& p, double* out);
  void (*exponential_log_terms)(const NodeSpan& nodes, const ExponentialTerms& p, double* out);
  LseAccumulator (*log_sum_exp)(const double* x, std::size_t n);
  void (*vec_log)(const double* x, double* out, std::size_t n);
  void (*vec_exp)(const double* x, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();

// The table selected for this process.
const KernelTable& active_kernels();

}  // namespace mixlink::simd
