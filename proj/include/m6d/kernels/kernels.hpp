#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops behind the tensor substrate. Every f32 kernel
// exists as a scalar reference plus AVX2 and AVX-512 lanes; the lane is
// selected once at startup from cpuid (override with M6D_KERNELS=scalar|
// avx2|avx512). The scalar lane is the semantic reference the SIMD lanes are
// equivalence-tested against.
//
// All reductions use a fixed blocked order, so results are reproducible
// run-to-run on the same machine. f64 variants are scalar only; they exist
// for the 64-bit verification mode, where throughput is irrelevant.

namespace m6d::kern {

enum class Isa { scalar = 0, avx2 = 1, avx512 = 2 };

const char* isa_name(Isa isa);
Isa active_isa();          // resolved lazily on first kernel call
bool isa_supported(Isa isa);

struct KernelTable {
  // c[m,n] (+)= a[m,k] * b[k,n]; row-major, contiguous.
  void (*gemm_nn)(const float*, const float*, float*, int, int, int, bool);
  // c[m,n] (+)= a[m,k] * b[n,k]^T
  void (*gemm_nt)(const float*, const float*, float*, int, int, int, bool);
  // c[m,n] (+)= a[k,m]^T * b[k,n]
  void (*gemm_tn)(const float*, const float*, float*, int, int, int, bool);
  void (*add)(const float*, const float*, float*, size_t);
  void (*sub)(const float*, const float*, float*, size_t);
  void (*mul)(const float*, const float*, float*, size_t);
  void (*axpy)(float, const float*, float*, size_t);   // y += a*x
  void (*scale)(float, const float*, float*, size_t);  // out = a*x
  float (*sum)(const float*, size_t);
  float (*dot)(const float*, const float*, size_t);
  float (*max)(const float*, size_t);
};

const KernelTable& table();           // active lane
const KernelTable& table_for(Isa isa);

// Convenience wrappers through the active lane.
inline void gemm_nn(const float* a, const float* b, float* c, int m, int k, int n, bool acc = false) { table().gemm_nn(a, b, c, m, k, n, acc); }
inline void gemm_nt(const float* a, const float* b, float* c, int m, int k, int n, bool acc = false) { table().gemm_nt(a, b, c, m, k, n, acc); }
inline void gemm_tn(const float* a, const float* b, float* c, int m, int k, int n, bool acc = false) { table().gemm_tn(a, b, c, m, k, n, acc); }
inline void add(const float* x, const float* y, float* o, size_t n) { table().add(x, y, o, n); }
inline void sub(const float* x, const float* y, float* o, size_t n) { table().sub(x, y, o, n); }
inline void mul(const float* x, const float* y, float* o, size_t n) { table().mul(x, y, o, n); }
inline void axpy(float a, const float* x, float* y, size_t n) { table().axpy(a, x, y, n); }
inline void scale(float a, const float* x, float* o, size_t n) { table().scale(a, x, o, n); }
inline float sum(const float* x, size_t n) { return table().sum(x, n); }
inline float dot(const float* x, const float* y, size_t n) { return table().dot(x, y, n); }
inline float vmax(const float* x, size_t n) { return table().max(x, n); }

// f64 (verification mode): scalar implementations, same contracts.
void gemm_nn(const double* a, const double* b, double* c, int m, int k, int n, bool acc = false);
void gemm_nt(const double* a, const double* b, double* c, int m, int k, int n, bool acc = false);
void gemm_tn(const double* a, const double* b, double* c, int m, int k, int n, bool acc = false);
void add(const double* x, const double* y, double* o, size_t n);
void sub(const double* x, const double* y, double* o, size_t n);
void mul(const double* x, const double* y, double* o, size_t n);
void axpy(double a, const double* x, double* y, size_t n);
void scale(double a, const double* x, double* o, size_t n);
double sum(const double* x, size_t n);
double dot(const double* x, const double* y, size_t n);
double vmax(const double* x, size_t n);

}  // namespace m6d::kern
