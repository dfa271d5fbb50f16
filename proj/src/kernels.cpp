#include "bball/kernels.hpp"

#include <atomic>

namespace bball::kernels {

namespace {

struct Table {
  double (*dot)(const double*, const double*, size_t);
  double (*l2sqr)(const double*, const double*, size_t);
  double (*sum)(const double*, size_t);
  double (*masked_sum)(const double*, const uint8_t*, size_t);
  void (*axpy)(double, const double*, double*, size_t);
  void (*minmax)(const double*, size_t, double*, double*);
  void (*scale01)(const double*, size_t, double, double, double*);
  void (*reweight)(double*, const uint8_t*, double, double, size_t);
  void (*stump_score)(double*, const double*, double, double, double, size_t);
};

constexpr Table kScalar{scalar::dot,     scalar::l2sqr,   scalar::sum,
                        scalar::masked_sum, scalar::axpy, scalar::minmax,
                        scalar::scale01, scalar::reweight, scalar::stump_score};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2{avx2::dot,     avx2::l2sqr,   avx2::sum,
                      avx2::masked_sum, avx2::axpy, avx2::minmax,
                      avx2::scale01, avx2::reweight, avx2::stump_score};
#endif

std::atomic<const Table*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::Scalar};

const Table* resolve() {
  const Table* t = g_table.load(std::memory_order_acquire);
  if (t) return t;
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) {
    g_isa.store(Isa::Avx2, std::memory_order_relaxed);
    g_table.store(&kAvx2, std::memory_order_release);
    return &kAvx2;
  }
#endif
  g_isa.store(Isa::Scalar, std::memory_order_relaxed);
  g_table.store(&kScalar, std::memory_order_release);
  return &kScalar;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active() {
  resolve();
  return g_isa.load(std::memory_order_relaxed);
}

void force(Isa isa) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::Avx2) {
    if (!cpu_has_avx2()) return;  // keep current selection
    g_isa.store(Isa::Avx2, std::memory_order_relaxed);
    g_table.store(&kAvx2, std::memory_order_release);
    return;
  }
#endif
  g_isa.store(Isa::Scalar, std::memory_order_relaxed);
  g_table.store(&kScalar, std::memory_order_release);
}

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, size_t n) { return resolve()->dot(a, b, n); }
double l2sqr(const double* a, const double* b, size_t n) { return resolve()->l2sqr(a, b, n); }
double sum(const double* x, size_t n) { return resolve()->sum(x, n); }
double masked_sum(const double* w, const uint8_t* mask, size_t n) {
  return resolve()->masked_sum(w, mask, n);
}
void axpy(double a, const double* x, double* y, size_t n) { resolve()->axpy(a, x, y, n); }
void minmax(const double* x, size_t n, double* lo, double* hi) {
  resolve()->minmax(x, n, lo, hi);
}
void scale01(const double* x, size_t n, double lo, double inv_range, double* out) {
  resolve()->scale01(x, n, lo, inv_range, out);
}
void reweight(double* w, const uint8_t* correct, double f_correct, double f_wrong, size_t n) {
  resolve()->reweight(w, correct, f_correct, f_wrong, n);
}
void stump_score(double* score, const double* col, double threshold, double above, double below,
                 size_t n) {
  resolve()->stump_score(score, col, threshold, above, below, n);
}

}  // namespace bball::kernels
