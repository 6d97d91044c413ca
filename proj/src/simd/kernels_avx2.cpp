// AVX2 + FMA variants of the quadrature kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; it is reached exclusively through the
// runtime-dispatched KernelTable.

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "mixlink/simd/kernels.hpp"
#include "simd/kernels_internal.hpp"

namespace mixlink::simd {
namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896338700e+00;
constexpr double kSqrt2 = 1.41421356237309514547e+00;

inline __m256d tail_mask(std::size_t remaining) {
  const __m256i lanes = _mm256_setr_epi64x(0, 1, 2, 3);
  const __m256i count = _mm256_set1_epi64x(static_cast<long long>(remaining));
  return _mm256_castsi256_pd(_mm256_cmpgt_epi64(count, lanes));
}

inline __m256d load(const double* p, std::size_t i, std::size_t n) {
  if (i + 4 <= n) return _mm256_loadu_pd(p + i);
  return _mm256_maskload_pd(p + i, _mm256_castpd_si256(tail_mask(n - i)));
}

inline void store(double* p, std::size_t i, std::size_t n, __m256d v) {
  if (i + 4 <= n) {
    _mm256_storeu_pd(p + i, v);
  } else {
    _mm256_maskstore_pd(p + i, _mm256_castpd_si256(tail_mask(n - i)), v);
  }
}

// exp with Cody-Waite reduction and a degree-13 Taylor polynomial on
// |r| <= ln2/2. Inputs below -708 flush to zero (no subnormal results).
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.782712893384);  // log(DBL_MAX)
  // Operand order keeps NaN flowing through max/min.
  __m256d xc = _mm256_min_pd(hi, _mm256_max_pd(lo, x));
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), xc);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);

  static constexpr double kInvFact[14] = {
      1.0,
      1.0,
      1.0 / 2.0,
      1.0 / 6.0,
      1.0 / 24.0,
      1.0 / 120.0,
      1.0 / 720.0,
      1.0 / 5040.0,
      1.0 / 40320.0,
      1.0 / 362880.0,
      1.0 / 3628800.0,
      1.0 / 39916800.0,
      1.0 / 479001600.0,
      1.0 / 6227020800.0,
  };
  __m256d p = _mm256_set1_pd(kInvFact[13]);
  for (int k = 12; k >= 0; --k) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[k]));

  // 2^n applied as 2^(n/2) * 2^(n - n/2) so n = 1024 near the overflow edge stays finite.
  const __m256i nn = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256i half = _mm256_srai_epi32(nn, 1);  // n >= -1022, upper halves are sign copies
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i b1 = _mm256_slli_epi64(_mm256_add_epi64(half, bias), 52);
  const __m256i b2 = _mm256_slli_epi64(_mm256_add_epi64(_mm256_sub_epi64(nn, half), bias), 52);
  __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, _mm256_castsi256_pd(b1)), _mm256_castsi256_pd(b2));

  result = _mm256_blendv_pd(result, _mm256_setzero_pd(), _mm256_cmp_pd(x, lo, _CMP_LT_OQ));
  result = _mm256_blendv_pd(result, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                            _mm256_cmp_pd(x, hi, _CMP_GT_OQ));
  return result;
}

// log via exponent extraction and the atanh series on s = (m-1)/(m+1),
// m in [sqrt(1/2), sqrt(2)].
inline __m256d log_pd(__m256d x) {
  const __m256d dbl_min = _mm256_set1_pd(std::numeric_limits<double>::min());
  const __m256d is_sub = _mm256_cmp_pd(x, dbl_min, _CMP_LT_OQ);
  __m256d xs = _mm256_blendv_pd(x, _mm256_mul_pd(x, _mm256_set1_pd(4503599627370496.0)), is_sub);
  const __m256d sub_shift = _mm256_and_pd(is_sub, _mm256_set1_pd(52.0));

  const __m256i bits = _mm256_castpd_si256(xs);
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
  e = _mm256_sub_pd(e, _mm256_add_pd(_mm256_set1_pd(1023.0), sub_shift));

  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(1.0 / 23.0);
  for (int k = 10; k >= 0; --k) p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / (2 * k + 1)));
  const __m256d two_s = _mm256_add_pd(s, s);
  __m256d result = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), _mm256_mul_pd(two_s, p));
  result = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), result);

  const __m256d zero = _mm256_setzero_pd();
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  result = _mm256_blendv_pd(result, _mm256_sub_pd(zero, inf), _mm256_cmp_pd(x, zero, _CMP_EQ_OQ));
  result = _mm256_blendv_pd(result, _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN()),
                            _mm256_cmp_pd(x, zero, _CMP_LT_OQ));
  result = _mm256_blendv_pd(result, inf, _mm256_cmp_pd(x, inf, _CMP_EQ_OQ));
  result = _mm256_blendv_pd(result, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
  return result;
}

void binomial_log_terms_avx2(const NodeSpan& nodes, const BinomialTerms& p, double* out) {
  const BinomialShape shape = classify(p);
  const std::size_t n = nodes.size;
  const __m256d a = _mm256_set1_pd(p.a);
  const __m256d b = _mm256_set1_pd(p.b);
  const __m256d ys = _mm256_set1_pd(p.successes);
  const __m256d yf = _mm256_set1_pd(p.failures);
  const __m256d lower = _mm256_set1_pd(p.lower);
  const __m256d upper = _mm256_set1_pd(p.upper);
  const __m256d c_lower = _mm256_set1_pd(1.0 - p.lower);
  const __m256d c_upper = _mm256_set1_pd(1.0 - p.upper);
  const __m256d s_off = _mm256_set1_pd(shape.success_offset);
  const __m256d f_off = _mm256_set1_pd(shape.failure_offset);

  for (std::size_t i = 0; i < n; i += 4) {
    const __m256d lw = load(nodes.log_w, i, n);
    const __m256d l1w = load(nodes.log_1mw, i, n);
    __m256d v = _mm256_fmadd_pd(a, lw, _mm256_fmadd_pd(b, l1w, load(nodes.log_jac, i, n)));
    if (shape.success_form == LogForm::Shifted) {
      v = _mm256_fmadd_pd(ys, _mm256_add_pd(s_off, lw), v);
    } else if (shape.success_form == LogForm::General) {
      const __m256d h = _mm256_fmadd_pd(lower, load(nodes.one_minus_w, i, n),
                                        _mm256_mul_pd(upper, load(nodes.w, i, n)));
      v = _mm256_fmadd_pd(ys, log_pd(h), v);
    }
    if (shape.failure_form == LogForm::Shifted) {
      v = _mm256_fmadd_pd(yf, _mm256_add_pd(f_off, l1w), v);
    } else if (shape.failure_form == LogForm::General) {
      const __m256d h = _mm256_fmadd_pd(c_lower, load(nodes.one_minus_w, i, n),
                                        _mm256_mul_pd(c_upper, load(nodes.w, i, n)));
      v = _mm256_fmadd_pd(yf, log_pd(h), v);
    }
    store(out, i, n, v);
  }
}

void exponential_log_terms_avx2(const NodeSpan& nodes, const ExponentialTerms& p, double* out) {
  const std::size_t n = nodes.size;
  const __m256d a = _mm256_set1_pd(p.a);
  const __m256d b = _mm256_set1_pd(p.b);
  const __m256d slope = _mm256_set1_pd(p.slope);
  for (std::size_t i = 0; i < n; i += 4) {
    __m256d v = _mm256_fmadd_pd(slope, load(nodes.w, i, n), load(nodes.log_jac, i, n));
    v = _mm256_fmadd_pd(b, load(nodes.log_1mw, i, n), v);
    v = _mm256_fmadd_pd(a, load(nodes.log_w, i, n), v);
    store(out, i, n, v);
  }
}

inline double horizontal_max(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int k = 1; k < 4; ++k)
    if (lanes[k] > m) m = lanes[k];
  return m;
}

inline double horizontal_sum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

LseAccumulator log_sum_exp_avx2(const double* x, std::size_t n) {
  LseAccumulator acc;
  if (n == 0) return acc;
  const __m256d neg_inf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256d vmax = neg_inf;
  for (std::size_t i = 0; i < n; i += 4) {
    __m256d v = load(x, i, n);
    if (i + 4 > n) v = _mm256_blendv_pd(neg_inf, v, tail_mask(n - i));
    vmax = _mm256_max_pd(v, vmax);
  }
  acc.max = horizontal_max(vmax);
  if (acc.max == -std::numeric_limits<double>::infinity()) return acc;
  const __m256d shift = _mm256_set1_pd(acc.max);
  __m256d vsum = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n; i += 4) {
    __m256d v = load(x, i, n);
    if (i + 4 > n) v = _mm256_blendv_pd(neg_inf, v, tail_mask(n - i));
    vsum = _mm256_add_pd(vsum, exp_pd(_mm256_sub_pd(v, shift)));
  }
  acc.sum = horizontal_sum(vsum);
  return acc;
}

void vec_log_avx2(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; i += 4) {
    __m256d v = load(x, i, n);
    if (i + 4 > n) v = _mm256_blendv_pd(_mm256_set1_pd(1.0), v, tail_mask(n - i));
    store(out, i, n, log_pd(v));
  }
}

void vec_exp_avx2(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; i += 4) store(out, i, n, exp_pd(load(x, i, n)));
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", binomial_log_terms_avx2, exponential_log_terms_avx2,
                                 log_sum_exp_avx2, vec_log_avx2, vec_exp_avx2};
  return table;
}

}  // namespace mixlink::simd
