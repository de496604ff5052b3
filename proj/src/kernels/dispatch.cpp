#include <cstdlib>
#include <cstring>
#include <mutex>

#include "m6d/errors.hpp"
#include "m6d/kernels/kernels.hpp"

namespace m6d::kern {

namespace scalar {
void gemm_nn_f32(const float*, const float*, float*, int, int, int, bool);
void gemm_nt_f32(const float*, const float*, float*, int, int, int, bool);
void gemm_tn_f32(const float*, const float*, float*, int, int, int, bool);
void add_f32(const float*, const float*, float*, size_t);
void sub_f32(const float*, const float*, float*, size_t);
void mul_f32(const float*, const float*, float*, size_t);
void axpy_f32(float, const float*, float*, size_t);
void scale_f32(float, const float*, float*, size_t);
float sum_f32(const float*, size_t);
float dot_f32(const float*, const float*, size_t);
float max_f32(const float*, size_t);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void gemm_nn_f32(const float*, const float*, float*, int, int, int, bool);
void gemm_nt_f32(const float*, const float*, float*, int, int, int, bool);
void gemm_tn_f32(const float*, const float*, float*, int, int, int, bool);
void add_f32(const float*, const float*, float*, size_t);
void sub_f32(const float*, const float*, float*, size_t);
void mul_f32(const float*, const float*, float*, size_t);
void axpy_f32(float, const float*, float*, size_t);
void scale_f32(float, const float*, float*, size_t);
float sum_f32(const float*, size_t);
float dot_f32(const float*, const float*, size_t);
float max_f32(const float*, size_t);
}  // namespace avx2
namespace avx512 {
void gemm_nn_f32(const float*, const float*, float*, int, int, int, bool);
void gemm_nt_f32(const float*, const float*, float*, int, int, int, bool);
void gemm_tn_f32(const float*, const float*, float*, int, int, int, bool);
void add_f32(const float*, const float*, float*, size_t);
void sub_f32(const float*, const float*, float*, size_t);
void mul_f32(const float*, const float*, float*, size_t);
void axpy_f32(float, const float*, float*, size_t);
void scale_f32(float, const float*, float*, size_t);
float sum_f32(const float*, size_t);
float dot_f32(const float*, const float*, size_t);
float max_f32(const float*, size_t);
}  // namespace avx512
#endif

namespace {

constexpr KernelTable kScalarTable = {
    scalar::gemm_nn_f32, scalar::gemm_nt_f32, scalar::gemm_tn_f32,
    scalar::add_f32, scalar::sub_f32, scalar::mul_f32,
    scalar::axpy_f32, scalar::scale_f32,
    scalar::sum_f32, scalar::dot_f32, scalar::max_f32};

#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2Table = {
    avx2::gemm_nn_f32, avx2::gemm_nt_f32, avx2::gemm_tn_f32,
    avx2::add_f32, avx2::sub_f32, avx2::mul_f32,
    avx2::axpy_f32, avx2::scale_f32,
    avx2::sum_f32, avx2::dot_f32, avx2::max_f32};
constexpr KernelTable kAvx512Table = {
    avx512::gemm_nn_f32, avx512::gemm_nt_f32, avx512::gemm_tn_f32,
    avx512::add_f32, avx512::sub_f32, avx512::mul_f32,
    avx512::axpy_f32, avx512::scale_f32,
    avx512::sum_f32, avx512::dot_f32, avx512::max_f32};
#endif

Isa g_active = Isa::scalar;
std::once_flag g_once;

void resolve() {
  Isa pick = Isa::scalar;
  if (isa_supported(Isa::avx512)) pick = Isa::avx512;
  else if (isa_supported(Isa::avx2)) pick = Isa::avx2;
  if (const char* env = std::getenv("M6D_KERNELS")) {
    Isa forced;
    if (std::strcmp(env, "scalar") == 0) forced = Isa::scalar;
    else if (std::strcmp(env, "avx2") == 0) forced = Isa::avx2;
    else if (std::strcmp(env, "avx512") == 0) forced = Isa::avx512;
    else throw ConfigError("M6D_KERNELS must be scalar, avx2 or avx512");
    if (!isa_supported(forced))
      throw ConfigError(std::string("M6D_KERNELS=") + env + " not supported on this CPU");
    pick = forced;
  }
  g_active = pick;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    case Isa::avx512:
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512dq");
#else
    case Isa::avx2:
    case Isa::avx512:
      return false;
#endif
  }
  return false;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::avx512: return "avx512";
  }
  return "?";
}

Isa active_isa() {
  std::call_once(g_once, resolve);
  return g_active;
}

const KernelTable& table_for(Isa isa) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::avx512) return kAvx512Table;
  if (isa == Isa::avx2) return kAvx2Table;
#endif
  (void)isa;
  return kScalarTable;
}

const KernelTable& table() { return table_for(active_isa()); }

}  // namespace m6d::kern
