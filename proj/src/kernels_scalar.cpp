#include "bball/kernels.hpp"

namespace bball::kernels::scalar {

double dot(const double* a, const double* b, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double l2sqr(const double* a, const double* b, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum(const double* x, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double masked_sum(const double* w, const uint8_t* mask, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i)
    if (mask[i]) acc += w[i];
  return acc;
}

void axpy(double a, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void minmax(const double* x, size_t n, double* lo, double* hi) {
  double mn = x[0], mx = x[0];
  for (size_t i = 1; i < n; ++i) {
    if (x[i] < mn) mn = x[i];
    if (x[i] > mx) mx = x[i];
  }
  *lo = mn;
  *hi = mx;
}

void scale01(const double* x, size_t n, double lo, double inv_range, double* out) {
  for (size_t i = 0; i < n; ++i) {
    double v = (x[i] - lo) * inv_range;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    out[i] = v;
  }
}

void reweight(double* w, const uint8_t* correct, double f_correct, double f_wrong, size_t n) {
  for (size_t i = 0; i < n; ++i) w[i] *= correct[i] ? f_correct : f_wrong;
}

void stump_score(double* score, const double* col, double threshold, double above,
                 double below, size_t n) {
  for (size_t i = 0; i < n; ++i) score[i] += col[i] >= threshold ? above : below;
}

}  // namespace bball::kernels::scalar
