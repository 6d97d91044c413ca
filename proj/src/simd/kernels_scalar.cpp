#include <algorithm>
#include <cmath>

#include "mixlink/simd/kernels.hpp"
#include "simd/kernels_internal.hpp"

namespace mixlink::simd {

double LseAccumulator::value() const {
  if (max == -std::numeric_limits<double>::infinity()) return max;
  return max + std::log(sum);
}

void LseAccumulator::merge(const LseAccumulator& other) {
  if (other.max == -std::numeric_limits<double>::infinity()) return;
  if (max == -std::numeric_limits<double>::infinity()) {
    *this = other;
    return;
  }
  if (other.max > max) {
    sum = sum * std::exp(max - other.max) + other.sum;
    max = other.max;
  } else {
    sum += other.sum * std::exp(other.max - max);
  }
}

namespace {

void binomial_log_terms_scalar(const NodeSpan& nodes, const BinomialTerms& p, double* out) {
  const BinomialShape shape = classify(p);
  for (std::size_t i = 0; i < nodes.size; ++i) {
    double v = p.a * nodes.log_w[i] + p.b * nodes.log_1mw[i] + nodes.log_jac[i];
    switch (shape.success_form) {
      case LogForm::Absent: break;
      case LogForm::Shifted: v += p.successes * (shape.success_offset + nodes.log_w[i]); break;
      case LogForm::General:
        v += p.successes * std::log(p.lower * nodes.one_minus_w[i] + p.upper * nodes.w[i]);
        break;
    }
    switch (shape.failure_form) {
      case LogForm::Absent: break;
      case LogForm::Shifted: v += p.failures * (shape.failure_offset + nodes.log_1mw[i]); break;
      case LogForm::General:
        v += p.failures *
             std::log((1.0 - p.lower) * nodes.one_minus_w[i] + (1.0 - p.upper) * nodes.w[i]);
        break;
    }
    out[i] = v;
  }
}

void exponential_log_terms_scalar(const NodeSpan& nodes, const ExponentialTerms& p, double* out) {
  for (std::size_t i = 0; i < nodes.size; ++i)
    out[i] = p.a * nodes.log_w[i] + p.b * nodes.log_1mw[i] + p.slope * nodes.w[i] + nodes.log_jac[i];
}

LseAccumulator log_sum_exp_scalar(const double* x, std::size_t n) {
  LseAccumulator acc;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > acc.max) acc.max = x[i];
  if (acc.max == -std::numeric_limits<double>::infinity()) return acc;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(x[i] - acc.max);
  acc.sum = sum;
  return acc;
}

void vec_log_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

void vec_exp_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

}  // namespace

BinomialShape classify(const BinomialTerms& p) {
  BinomialShape s;
  if (p.successes == 0.0) {
    s.success_form = LogForm::Absent;
  } else if (p.lower == 0.0) {
    s.success_form = LogForm::Shifted;
    s.success_offset = std::log(p.upper);
  } else {
    s.success_form = LogForm::General;
  }
  if (p.failures == 0.0) {
    s.failure_form = LogForm::Absent;
  } else if (p.upper == 1.0) {
    s.failure_form = LogForm::Shifted;
    s.failure_offset = std::log1p(-p.lower);
  } else {
    s.failure_form = LogForm::General;
  }
  return s;
}

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", binomial_log_terms_scalar, exponential_log_terms_scalar,
                                 log_sum_exp_scalar, vec_log_scalar, vec_exp_scalar};
  return table;
}

}  // namespace mixlink::simd
