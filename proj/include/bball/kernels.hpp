#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace bball::kernels {

/// Instruction sets the dispatcher can select between. The scalar kernels are
/// the reference semantics; vector variants must agree with them within
/// floating-point reassociation error (exactly, for element-wise kernels).
enum class Isa { Scalar, Avx2 };

bool cpu_has_avx2();
Isa active();              // resolved once, on first use
void force(Isa isa);       // override, for tests and the --simd flag
std::string isa_name(Isa);

// Reductions (reassociation allowed; vector variants differ from scalar by
// accumulation order only).
double dot(const double* a, const double* b, size_t n);
double l2sqr(const double* a, const double* b, size_t n);
double sum(const double* x, size_t n);
double masked_sum(const double* w, const uint8_t* mask, size_t n);

// Element-wise kernels (must match the scalar reference bit for bit).
void axpy(double a, const double* x, double* y, size_t n);
void minmax(const double* x, size_t n, double* lo, double* hi);
void scale01(const double* x, size_t n, double lo, double inv_range, double* out);
void reweight(double* w, const uint8_t* correct, double f_correct, double f_wrong, size_t n);
void stump_score(double* score, const double* col, double threshold, double above,
                 double below, size_t n);

namespace scalar {
double dot(const double* a, const double* b, size_t n);
double l2sqr(const double* a, const double* b, size_t n);
double sum(const double* x, size_t n);
double masked_sum(const double* w, const uint8_t* mask, size_t n);
void axpy(double a, const double* x, double* y, size_t n);
void minmax(const double* x, size_t n, double* lo, double* hi);
void scale01(const double* x, size_t n, double lo, double inv_range, double* out);
void reweight(double* w, const uint8_t* correct, double f_correct, double f_wrong, size_t n);
void stump_score(double* score, const double* col, double threshold, double above,
                 double below, size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, size_t n);
double l2sqr(const double* a, const double* b, size_t n);
double sum(const double* x, size_t n);
double masked_sum(const double* w, const uint8_t* mask, size_t n);
void axpy(double a, const double* x, double* y, size_t n);
void minmax(const double* x, size_t n, double* lo, double* hi);
void scale01(const double* x, size_t n, double lo, double inv_range, double* out);
void reweight(double* w, const uint8_t* correct, double f_correct, double f_wrong, size_t n);
void stump_score(double* score, const double* col, double threshold, double above,
                 double below, size_t n);
}  // namespace avx2
#endif

}  // namespace bball::kernels
