#include <cstddef>

#include "m6d/kernels/kernels.hpp"

// AVX2+FMA lane. Compiled with -mavx2 -mfma; entered only after the runtime
// cpuid check in dispatch.cpp. Row/column tails fall through to the same
// logic as the scalar reference.

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace m6d::kern::avx2 {
namespace {

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
  lo = _mm_add_ss(lo, _mm_shuffle_ps(lo, lo, 0x55));
  return _mm_cvtss_f32(lo);
}

inline float hmax(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_max_ps(lo, hi);
  lo = _mm_max_ps(lo, _mm_movehl_ps(lo, lo));
  lo = _mm_max_ss(lo, _mm_shuffle_ps(lo, lo, 0x55));
  return _mm_cvtss_f32(lo);
}

// 4x16 panel: c[i0..i0+4, j0..j0+16] with the k loop kept sequential per
// accumulator so the per-element accumulation order matches gemm_nn_scalar.
// a_stride_row/a_stride_k cover both the NN (a[i*k+p]) and TN (a[p*m+i])
// indexings with one kernel.
inline void panel_4x16(const float* a, const float* b, float* c, int k, int n,
                       int i0, int j0, int rows, size_t a_row, size_t a_k, bool acc) {
  __m256 r[4][2];
  for (int i = 0; i < rows; ++i) {
    float* ci = c + size_t(i0 + i) * n + j0;
    r[i][0] = acc ? _mm256_loadu_ps(ci) : _mm256_setzero_ps();
    r[i][1] = acc ? _mm256_loadu_ps(ci + 8) : _mm256_setzero_ps();
  }
  for (int p = 0; p < k; ++p) {
    const __m256 b0 = _mm256_loadu_ps(b + size_t(p) * n + j0);
    const __m256 b1 = _mm256_loadu_ps(b + size_t(p) * n + j0 + 8);
    for (int i = 0; i < rows; ++i) {
      const __m256 av = _mm256_broadcast_ss(a + size_t(i0 + i) * a_row + size_t(p) * a_k);
      r[i][0] = _mm256_fmadd_ps(av, b0, r[i][0]);
      r[i][1] = _mm256_fmadd_ps(av, b1, r[i][1]);
    }
  }
  for (int i = 0; i < rows; ++i) {
    float* ci = c + size_t(i0 + i) * n + j0;
    _mm256_storeu_ps(ci, r[i][0]);
    _mm256_storeu_ps(ci + 8, r[i][1]);
  }
}

// Scalar fill-in for edge columns, same accumulation order as the reference.
inline void edge_cols(const float* a, const float* b, float* c, int k, int n,
                      int m, int j0, size_t a_row, size_t a_k, bool acc) {
  for (int i = 0; i < m; ++i) {
    float* ci = c + size_t(i) * n;
    if (!acc)
      for (int j = j0; j < n; ++j) ci[j] = 0.0f;
    for (int p = 0; p < k; ++p) {
      const float av = a[size_t(i) * a_row + size_t(p) * a_k];
      const float* bp = b + size_t(p) * n;
      for (int j = j0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

inline void gemm_bcast(const float* a, const float* b, float* c, int m, int k, int n,
                       size_t a_row, size_t a_k, bool acc) {
  int j0 = 0;
  for (; j0 + 16 <= n; j0 += 16)
    for (int i0 = 0; i0 < m; i0 += 4)
      panel_4x16(a, b, c, k, n, i0, j0, m - i0 < 4 ? m - i0 : 4, a_row, a_k, acc);
  if (j0 < n) edge_cols(a, b, c, k, n, m, j0, a_row, a_k, acc);
}

}  // namespace

void gemm_nn_f32(const float* a, const float* b, float* c, int m, int k, int n, bool acc) {
  gemm_bcast(a, b, c, m, k, n, size_t(k), 1, acc);
}

void gemm_tn_f32(const float* a, const float* b, float* c, int m, int k, int n, bool acc) {
  gemm_bcast(a, b, c, m, k, n, 1, size_t(m), acc);
}

void gemm_nt_f32(const float* a, const float* b, float* c, int m, int k, int n, bool acc) {
  const int k8 = k & ~7;
  for (int i = 0; i < m; ++i) {
    const float* ai = a + size_t(i) * k;
    float* ci = c + size_t(i) * n;
    int j = 0;
    for (; j + 4 <= n; j += 4) {
      const float* b0 = b + size_t(j) * k;
      const float* b1 = b0 + k;
      const float* b2 = b1 + k;
      const float* b3 = b2 + k;
      __m256 s0 = _mm256_setzero_ps(), s1 = s0, s2 = s0, s3 = s0;
      for (int p = 0; p < k8; p += 8) {
        const __m256 av = _mm256_loadu_ps(ai + p);
        s0 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b0 + p), s0);
        s1 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b1 + p), s1);
        s2 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b2 + p), s2);
        s3 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b3 + p), s3);
      }
      float d0 = hsum(s0), d1 = hsum(s1), d2 = hsum(s2), d3 = hsum(s3);
      for (int p = k8; p < k; ++p) {
        d0 += ai[p] * b0[p];
        d1 += ai[p] * b1[p];
        d2 += ai[p] * b2[p];
        d3 += ai[p] * b3[p];
      }
      if (acc) { ci[j] += d0; ci[j + 1] += d1; ci[j + 2] += d2; ci[j + 3] += d3; }
      else { ci[j] = d0; ci[j + 1] = d1; ci[j + 2] = d2; ci[j + 3] = d3; }
    }
    for (; j < n; ++j) {
      const float* bj = b + size_t(j) * k;
      __m256 s = _mm256_setzero_ps();
      for (int p = 0; p < k8; p += 8)
        s = _mm256_fmadd_ps(_mm256_loadu_ps(ai + p), _mm256_loadu_ps(bj + p), s);
      float d = hsum(s);
      for (int p = k8; p < k; ++p) d += ai[p] * bj[p];
      ci[j] = acc ? ci[j] + d : d;
    }
  }
}

void add_f32(const float* x, const float* y, float* o, size_t n) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(o + i, _mm256_add_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) o[i] = x[i] + y[i];
}
void sub_f32(const float* x, const float* y, float* o, size_t n) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(o + i, _mm256_sub_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) o[i] = x[i] - y[i];
}
void mul_f32(const float* x, const float* y, float* o, size_t n) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(o + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) o[i] = x[i] * y[i];
}
void axpy_f32(float a, const float* x, float* y, size_t n) {
  const __m256 av = _mm256_set1_ps(a);
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}
void scale_f32(float a, const float* x, float* o, size_t n) {
  const __m256 av = _mm256_set1_ps(a);
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(o + i, _mm256_mul_ps(av, _mm256_loadu_ps(x + i)));
  for (; i < n; ++i) o[i] = a * x[i];
}
float sum_f32(const float* x, size_t n) {
  __m256 s = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) s = _mm256_add_ps(s, _mm256_loadu_ps(x + i));
  float r = hsum(s);
  for (; i < n; ++i) r += x[i];
  return r;
}
float dot_f32(const float* x, const float* y, size_t n) {
  __m256 s = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8)
    s = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), s);
  float r = hsum(s);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}
float max_f32(const float* x, size_t n) {
  float r = x[0];
  size_t i = 0;
  if (n >= 8) {
    __m256 m = _mm256_loadu_ps(x);
    for (i = 8; i + 8 <= n; i += 8) m = _mm256_max_ps(m, _mm256_loadu_ps(x + i));
    r = hmax(m);
  }
  for (; i < n; ++i)
    if (x[i] > r) r = x[i];
  return r;
}

}  // namespace m6d::kern::avx2

#endif  // x86_64
