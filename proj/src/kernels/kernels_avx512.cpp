#include <cstddef>

#include "m6d/kernels/kernels.hpp"

// AVX-512 lane. Wider panels than the AVX2 lane (8x32 main tile) and masked
// loads/stores for column tails, which keeps every shape on the vector path.

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace m6d::kern::avx512 {
namespace {

// 8x32 panel with a shared b load per k step; a indexing is parameterized so
// NN and TN reuse the kernel (see the AVX2 lane for the layout note).
inline void panel_8x32(const float* a, const float* b, float* c, int k, int n,
                       int i0, int j0, int rows, size_t a_row, size_t a_k, bool acc) {
  __m512 r[8][2];
  for (int i = 0; i < rows; ++i) {
    float* ci = c + size_t(i0 + i) * n + j0;
    r[i][0] = acc ? _mm512_loadu_ps(ci) : _mm512_setzero_ps();
    r[i][1] = acc ? _mm512_loadu_ps(ci + 16) : _mm512_setzero_ps();
  }
  for (int p = 0; p < k; ++p) {
    const __m512 b0 = _mm512_loadu_ps(b + size_t(p) * n + j0);
    const __m512 b1 = _mm512_loadu_ps(b + size_t(p) * n + j0 + 16);
    for (int i = 0; i < rows; ++i) {
      const __m512 av = _mm512_set1_ps(a[size_t(i0 + i) * a_row + size_t(p) * a_k]);
      r[i][0] = _mm512_fmadd_ps(av, b0, r[i][0]);
      r[i][1] = _mm512_fmadd_ps(av, b1, r[i][1]);
    }
  }
  for (int i = 0; i < rows; ++i) {
    float* ci = c + size_t(i0 + i) * n + j0;
    _mm512_storeu_ps(ci, r[i][0]);
    _mm512_storeu_ps(ci + 16, r[i][1]);
  }
}

// Masked single-vector panel for <=16 tail columns.
inline void panel_8x16m(const float* a, const float* b, float* c, int k, int n,
                        int i0, int j0, int rows, int cols, size_t a_row, size_t a_k,
                        bool acc) {
  const __mmask16 mask = __mmask16((1u << cols) - 1u);
  __m512 r[8];
  for (int i = 0; i < rows; ++i) {
    float* ci = c + size_t(i0 + i) * n + j0;
    r[i] = acc ? _mm512_maskz_loadu_ps(mask, ci) : _mm512_setzero_ps();
  }
  for (int p = 0; p < k; ++p) {
    const __m512 bv = _mm512_maskz_loadu_ps(mask, b + size_t(p) * n + j0);
    for (int i = 0; i < rows; ++i) {
      const __m512 av = _mm512_set1_ps(a[size_t(i0 + i) * a_row + size_t(p) * a_k]);
      r[i] = _mm512_fmadd_ps(av, bv, r[i]);
    }
  }
  for (int i = 0; i < rows; ++i)
    _mm512_mask_storeu_ps(c + size_t(i0 + i) * n + j0, mask, r[i]);
}

inline void gemm_bcast(const float* a, const float* b, float* c, int m, int k, int n,
                       size_t a_row, size_t a_k, bool acc) {
  int j0 = 0;
  for (; j0 + 32 <= n; j0 += 32)
    for (int i0 = 0; i0 < m; i0 += 8)
      panel_8x32(a, b, c, k, n, i0, j0, m - i0 < 8 ? m - i0 : 8, a_row, a_k, acc);
  for (; j0 < n; j0 += 16) {
    const int cols = n - j0 < 16 ? n - j0 : 16;
    for (int i0 = 0; i0 < m; i0 += 8)
      panel_8x16m(a, b, c, k, n, i0, j0, m - i0 < 8 ? m - i0 : 8, cols, a_row, a_k, acc);
  }
}

}  // namespace

void gemm_nn_f32(const float* a, const float* b, float* c, int m, int k, int n, bool acc) {
  gemm_bcast(a, b, c, m, k, n, size_t(k), 1, acc);
}

void gemm_tn_f32(const float* a, const float* b, float* c, int m, int k, int n, bool acc) {
  gemm_bcast(a, b, c, m, k, n, 1, size_t(m), acc);
}

void gemm_nt_f32(const float* a, const float* b, float* c, int m, int k, int n, bool acc) {
  const __mmask16 tail = __mmask16((1u << (k & 15)) - 1u);
  const int k16 = k & ~15;
  for (int i = 0; i < m; ++i) {
    const float* ai = a + size_t(i) * k;
    float* ci = c + size_t(i) * n;
    int j = 0;
    for (; j + 4 <= n; j += 4) {
      const float* b0 = b + size_t(j) * k;
      const float* b1 = b0 + k;
      const float* b2 = b1 + k;
      const float* b3 = b2 + k;
      __m512 s0 = _mm512_setzero_ps(), s1 = s0, s2 = s0, s3 = s0;
      for (int p = 0; p < k16; p += 16) {
        const __m512 av = _mm512_loadu_ps(ai + p);
        s0 = _mm512_fmadd_ps(av, _mm512_loadu_ps(b0 + p), s0);
        s1 = _mm512_fmadd_ps(av, _mm512_loadu_ps(b1 + p), s1);
        s2 = _mm512_fmadd_ps(av, _mm512_loadu_ps(b2 + p), s2);
        s3 = _mm512_fmadd_ps(av, _mm512_loadu_ps(b3 + p), s3);
      }
      if (k16 < k) {
        const __m512 av = _mm512_maskz_loadu_ps(tail, ai + k16);
        s0 = _mm512_fmadd_ps(av, _mm512_maskz_loadu_ps(tail, b0 + k16), s0);
        s1 = _mm512_fmadd_ps(av, _mm512_maskz_loadu_ps(tail, b1 + k16), s1);
        s2 = _mm512_fmadd_ps(av, _mm512_maskz_loadu_ps(tail, b2 + k16), s2);
        s3 = _mm512_fmadd_ps(av, _mm512_maskz_loadu_ps(tail, b3 + k16), s3);
      }
      const float d0 = _mm512_reduce_add_ps(s0);
      const float d1 = _mm512_reduce_add_ps(s1);
      const float d2 = _mm512_reduce_add_ps(s2);
      const float d3 = _mm512_reduce_add_ps(s3);
      if (acc) { ci[j] += d0; ci[j + 1] += d1; ci[j + 2] += d2; ci[j + 3] += d3; }
      else { ci[j] = d0; ci[j + 1] = d1; ci[j + 2] = d2; ci[j + 3] = d3; }
    }
    for (; j < n; ++j) {
      const float* bj = b + size_t(j) * k;
      __m512 s = _mm512_setzero_ps();
      for (int p = 0; p < k16; p += 16)
        s = _mm512_fmadd_ps(_mm512_loadu_ps(ai + p), _mm512_loadu_ps(bj + p), s);
      if (k16 < k)
        s = _mm512_fmadd_ps(_mm512_maskz_loadu_ps(tail, ai + k16),
                            _mm512_maskz_loadu_ps(tail, bj + k16), s);
      const float d = _mm512_reduce_add_ps(s);
      ci[j] = acc ? ci[j] + d : d;
    }
  }
}

void add_f32(const float* x, const float* y, float* o, size_t n) {
  size_t i = 0;
  for (; i + 16 <= n; i += 16)
    _mm512_storeu_ps(o + i, _mm512_add_ps(_mm512_loadu_ps(x + i), _mm512_loadu_ps(y + i)));
  if (i < n) {
    const __mmask16 m = __mmask16((1u << (n - i)) - 1u);
    _mm512_mask_storeu_ps(o + i, m,
        _mm512_add_ps(_mm512_maskz_loadu_ps(m, x + i), _mm512_maskz_loadu_ps(m, y + i)));
  }
}
void sub_f32(const float* x, const float* y, float* o, size_t n) {
  size_t i = 0;
  for (; i + 16 <= n; i += 16)
    _mm512_storeu_ps(o + i, _mm512_sub_ps(_mm512_loadu_ps(x + i), _mm512_loadu_ps(y + i)));
  if (i < n) {
    const __mmask16 m = __mmask16((1u << (n - i)) - 1u);
    _mm512_mask_storeu_ps(o + i, m,
        _mm512_sub_ps(_mm512_maskz_loadu_ps(m, x + i), _mm512_maskz_loadu_ps(m, y + i)));
  }
}
void mul_f32(const float* x, const float* y, float* o, size_t n) {
  size_t i = 0;
  for (; i + 16 <= n; i += 16)
    _mm512_storeu_ps(o + i, _mm512_mul_ps(_mm512_loadu_ps(x + i), _mm512_loadu_ps(y + i)));
  if (i < n) {
    const __mmask16 m = __mmask16((1u << (n - i)) - 1u);
    _mm512_mask_storeu_ps(o + i, m,
        _mm512_mul_ps(_mm512_maskz_loadu_ps(m, x + i), _mm512_maskz_loadu_ps(m, y + i)));
  }
}
void axpy_f32(float a, const float* x, float* y, size_t n) {
  const __m512 av = _mm512_set1_ps(a);
  size_t i = 0;
  for (; i + 16 <= n; i += 16)
    _mm512_storeu_ps(y + i, _mm512_fmadd_ps(av, _mm512_loadu_ps(x + i), _mm512_loadu_ps(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}
void scale_f32(float a, const float* x, float* o, size_t n) {
  const __m512 av = _mm512_set1_ps(a);
  size_t i = 0;
  for (; i + 16 <= n; i += 16)
    _mm512_storeu_ps(o + i, _mm512_mul_ps(av, _mm512_loadu_ps(x + i)));
  for (; i < n; ++i) o[i] = a * x[i];
}
float sum_f32(const float* x, size_t n) {
  __m512 s = _mm512_setzero_ps();
  size_t i = 0;
  for (; i + 16 <= n; i += 16) s = _mm512_add_ps(s, _mm512_loadu_ps(x + i));
  float r = _mm512_reduce_add_ps(s);
  for (; i < n; ++i) r += x[i];
  return r;
}
float dot_f32(const float* x, const float* y, size_t n) {
  __m512 s = _mm512_setzero_ps();
  size_t i = 0;
  for (; i + 16 <= n; i += 16)
    s = _mm512_fmadd_ps(_mm512_loadu_ps(x + i), _mm512_loadu_ps(y + i), s);
  float r = _mm512_reduce_add_ps(s);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}
float max_f32(const float* x, size_t n) {
  float r = x[0];
  size_t i = 0;
  if (n >= 16) {
    __m512 m = _mm512_loadu_ps(x);
    for (i = 16; i + 16 <= n; i += 16) m = _mm512_max_ps(m, _mm512_loadu_ps(x + i));
    r = _mm512_reduce_max_ps(m);
  }
  for (; i < n; ++i)
    if (x[i] > r) r = x[i];
  return r;
}

}  // namespace m6d::kern::avx512

#endif  // x86_64
