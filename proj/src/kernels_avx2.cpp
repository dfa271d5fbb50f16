#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "bball/kernels.hpp"

#define BBALL_AVX2 __attribute__((target("avx2,fma")))

namespace bball::kernels::avx2 {

namespace {

BBALL_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

// Widens 4 mask bytes (0/1) into a 256-bit lane mask.
BBALL_AVX2 inline __m256d mask4(const uint8_t* m) {
  __m256i wide = _mm256_setr_epi64x(m[0] ? -1 : 0, m[1] ? -1 : 0, m[2] ? -1 : 0, m[3] ? -1 : 0);
  return _mm256_castsi256_pd(wide);
}

}  // namespace

BBALL_AVX2 double dot(const double* a, const double* b, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

BBALL_AVX2 double l2sqr(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    out += d * d;
  }
  return out;
}

BBALL_AVX2 double sum(const double* x, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

BBALL_AVX2 double masked_sum(const double* w, const uint8_t* mask, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(w + i), mask4(mask + i)));
  double out = hsum(acc);
  for (; i < n; ++i)
    if (mask[i]) out += w[i];
  return out;
}

BBALL_AVX2 void axpy(double a, const double* x, double* y, size_t n) {
  // mul+add rather than fma keeps results identical to the scalar reference
  __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

BBALL_AVX2 void minmax(const double* x, size_t n, double* lo, double* hi) {
  size_t i = 0;
  double mn = x[0], mx = x[0];
  if (n >= 4) {
    __m256d vmn = _mm256_loadu_pd(x);
    __m256d vmx = vmn;
    for (i = 4; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      vmn = _mm256_min_pd(vmn, v);
      vmx = _mm256_max_pd(vmx, v);
    }
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, vmn);
    mn = tmp[0];
    for (int j = 1; j < 4; ++j)
      if (tmp[j] < mn) mn = tmp[j];
    _mm256_store_pd(tmp, vmx);
    mx = tmp[0];
    for (int j = 1; j < 4; ++j)
      if (tmp[j] > mx) mx = tmp[j];
  }
  for (; i < n; ++i) {
    if (x[i] < mn) mn = x[i];
    if (x[i] > mx) mx = x[i];
  }
  *lo = mn;
  *hi = mx;
}

BBALL_AVX2 void scale01(const double* x, size_t n, double lo, double inv_range, double* out) {
  __m256d vlo = _mm256_set1_pd(lo);
  __m256d vinv = _mm256_set1_pd(inv_range);
  __m256d zero = _mm256_setzero_pd();
  __m256d one = _mm256_set1_pd(1.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vlo), vinv);
    v = _mm256_min_pd(_mm256_max_pd(v, zero), one);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) {
    double v = (x[i] - lo) * inv_range;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    out[i] = v;
  }
}

BBALL_AVX2 void reweight(double* w, const uint8_t* correct, double f_correct, double f_wrong,
                         size_t n) {
  __m256d vc = _mm256_set1_pd(f_correct);
  __m256d vw = _mm256_set1_pd(f_wrong);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d factor = _mm256_blendv_pd(vw, vc, mask4(correct + i));
    _mm256_storeu_pd(w + i, _mm256_mul_pd(_mm256_loadu_pd(w + i), factor));
  }
  for (; i < n; ++i) w[i] *= correct[i] ? f_correct : f_wrong;
}

BBALL_AVX2 void stump_score(double* score, const double* col, double threshold, double above,
                            double below, size_t n) {
  __m256d vthr = _mm256_set1_pd(threshold);
  __m256d va = _mm256_set1_pd(above);
  __m256d vb = _mm256_set1_pd(below);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ge = _mm256_cmp_pd(_mm256_loadu_pd(col + i), vthr, _CMP_GE_OQ);
    __m256d add = _mm256_blendv_pd(vb, va, ge);
    _mm256_storeu_pd(score + i, _mm256_add_pd(_mm256_loadu_pd(score + i), add));
  }
  for (; i < n; ++i) score[i] += col[i] >= threshold ? above : below;
}

}  // namespace bball::kernels::avx2

#endif  // x86_64
