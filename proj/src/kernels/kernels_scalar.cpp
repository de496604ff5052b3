#include <cstddef>

#include "m6d/kernels/kernels.hpp"

// Scalar reference lane. These are the oracles for the SIMD lanes: keep them
// obviously correct. The i-k-j order in gemm_nn keeps per-element accumulation
// order aligned with the vector lanes' k-sequential accumulators.

namespace m6d::kern::scalar {

void gemm_nn_f32(const float* a, const float* b, float* c, int m, int k, int n, bool acc) {
  for (int i = 0; i < m; ++i) {
    float* ci = c + size_t(i) * n;
    if (!acc)
      for (int j = 0; j < n; ++j) ci[j] = 0.0f;
    const float* ai = a + size_t(i) * k;
    for (int p = 0; p < k; ++p) {
      const float av = ai[p];
      const float* bp = b + size_t(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

void gemm_nt_f32(const float* a, const float* b, float* c, int m, int k, int n, bool acc) {
  for (int i = 0; i < m; ++i) {
    const float* ai = a + size_t(i) * k;
    float* ci = c + size_t(i) * n;
    for (int j = 0; j < n; ++j) {
      const float* bj = b + size_t(j) * k;
      float s = 0.0f;
      for (int p = 0; p < k; ++p) s += ai[p] * bj[p];
      ci[j] = acc ? ci[j] + s : s;
    }
  }
}

void gemm_tn_f32(const float* a, const float* b, float* c, int m, int k, int n, bool acc) {
  if (!acc)
    for (size_t i = 0; i < size_t(m) * n; ++i) c[i] = 0.0f;
  for (int p = 0; p < k; ++p) {
    const float* ap = a + size_t(p) * m;
    const float* bp = b + size_t(p) * n;
    for (int i = 0; i < m; ++i) {
      const float av = ap[i];
      float* ci = c + size_t(i) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

void add_f32(const float* x, const float* y, float* o, size_t n) {
  for (size_t i = 0; i < n; ++i) o[i] = x[i] + y[i];
}
void sub_f32(const float* x, const float* y, float* o, size_t n) {
  for (size_t i = 0; i < n; ++i) o[i] = x[i] - y[i];
}
void mul_f32(const float* x, const float* y, float* o, size_t n) {
  for (size_t i = 0; i < n; ++i) o[i] = x[i] * y[i];
}
void axpy_f32(float a, const float* x, float* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}
void scale_f32(float a, const float* x, float* o, size_t n) {
  for (size_t i = 0; i < n; ++i) o[i] = a * x[i];
}
float sum_f32(const float* x, size_t n) {
  float s = 0.0f;
  for (size_t i = 0; i < n; ++i) s += x[i];
  return s;
}
float dot_f32(const float* x, const float* y, size_t n) {
  float s = 0.0f;
  for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}
float max_f32(const float* x, size_t n) {
  float m = x[0];
  for (size_t i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace m6d::kern::scalar

namespace m6d::kern {

// f64 lane, used only by the 64-bit verification mode.
void gemm_nn(const double* a, const double* b, double* c, int m, int k, int n, bool acc) {
  for (int i = 0; i < m; ++i) {
    double* ci = c + size_t(i) * n;
    if (!acc)
      for (int j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = a + size_t(i) * k;
    for (int p = 0; p < k; ++p) {
      const double av = ai[p];
      const double* bp = b + size_t(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}
void gemm_nt(const double* a, const double* b, double* c, int m, int k, int n, bool acc) {
  for (int i = 0; i < m; ++i) {
    const double* ai = a + size_t(i) * k;
    double* ci = c + size_t(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* bj = b + size_t(j) * k;
      double s = 0.0;
      for (int p = 0; p < k; ++p) s += ai[p] * bj[p];
      ci[j] = acc ? ci[j] + s : s;
    }
  }
}
void gemm_tn(const double* a, const double* b, double* c, int m, int k, int n, bool acc) {
  if (!acc)
    for (size_t i = 0; i < size_t(m) * n; ++i) c[i] = 0.0;
  for (int p = 0; p < k; ++p) {
    const double* ap = a + size_t(p) * m;
    const double* bp = b + size_t(p) * n;
    for (int i = 0; i < m; ++i) {
      const double av = ap[i];
      double* ci = c + size_t(i) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}
void add(const double* x, const double* y, double* o, size_t n) {
  for (size_t i = 0; i < n; ++i) o[i] = x[i] + y[i];
}
void sub(const double* x, const double* y, double* o, size_t n) {
  for (size_t i = 0; i < n; ++i) o[i] = x[i] - y[i];
}
void mul(const double* x, const double* y, double* o, size_t n) {
  for (size_t i = 0; i < n; ++i) o[i] = x[i] * y[i];
}
void axpy(double a, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}
void scale(double a, const double* x, double* o, size_t n) {
  for (size_t i = 0; i < n; ++i) o[i] = a * x[i];
}
double sum(const double* x, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i];
  return s;
}
double dot(const double* x, const double* y, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}
double vmax(const double* x, size_t n) {
  double m = x[0];
  for (size_t i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace m6d::kern
