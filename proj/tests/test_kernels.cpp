#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "m6d/kernels/kernels.hpp"
#include "m6d/rng.hpp"

using namespace m6d;

namespace {

std::vector<float> random_vec(Rng& rng, size_t n, float lo = -1.0f, float hi = 1.0f) {
  std::vector<float> v(n);
  for (auto& x : v) x = float(rng.uniform(lo, hi));
  return v;
}

double max_rel_err(const std::vector<float>& a, const std::vector<float>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(double(a[i])), std::abs(double(b[i])), 1e-4});
    worst = std::max(worst, std::abs(double(a[i]) - double(b[i])) / denom);
  }
  return worst;
}

// every compiled-and-supported lane
std::vector<kern::Isa> lanes() {
  std::vector<kern::Isa> out = {kern::Isa::scalar};
  if (kern::isa_supported(kern::Isa::avx2)) out.push_back(kern::Isa::avx2);
  if (kern::isa_supported(kern::Isa::avx512)) out.push_back(kern::Isa::avx512);
  return out;
}

}  // namespace

TEST_CASE("gemm lanes agree with the scalar reference across shapes") {
  Rng rng(42);
  const auto& ref = kern::table_for(kern::Isa::scalar);
  // shapes cover the panel sizes, the masked tails and tiny edges
  const int shapes[][3] = {{1, 1, 1},   {3, 5, 7},    {8, 16, 32},  {9, 17, 33},
                           {4, 4, 4},   {64, 128, 9}, {13, 135, 128}, {256, 48, 128},
                           {2, 768, 128}, {31, 3, 31}};
  for (auto isa : lanes()) {
    const auto& t = kern::table_for(isa);
    for (const auto& s : shapes) {
      const int m = s[0], k = s[1], n = s[2];
      const auto a = random_vec(rng, size_t(m) * k);
      const auto at = random_vec(rng, size_t(k) * m);
      const auto b = random_vec(rng, size_t(k) * n);
      const auto bt = random_vec(rng, size_t(n) * k);
      std::vector<float> c0(size_t(m) * n), c1(size_t(m) * n);

      ref.gemm_nn(a.data(), b.data(), c0.data(), m, k, n, false);
      t.gemm_nn(a.data(), b.data(), c1.data(), m, k, n, false);
      CHECK(max_rel_err(c0, c1) < 2e-5);

      ref.gemm_nt(a.data(), bt.data(), c0.data(), m, k, n, false);
      t.gemm_nt(a.data(), bt.data(), c1.data(), m, k, n, false);
      CHECK(max_rel_err(c0, c1) < 2e-5);

      ref.gemm_tn(at.data(), b.data(), c0.data(), m, k, n, false);
      t.gemm_tn(at.data(), b.data(), c1.data(), m, k, n, false);
      CHECK(max_rel_err(c0, c1) < 2e-5);

      // accumulate mode
      auto acc0 = random_vec(rng, size_t(m) * n);
      auto acc1 = acc0;
      ref.gemm_nn(a.data(), b.data(), acc0.data(), m, k, n, true);
      t.gemm_nn(a.data(), b.data(), acc1.data(), m, k, n, true);
      CHECK(max_rel_err(acc0, acc1) < 2e-5);
    }
  }
}

TEST_CASE("gemm matches a double-precision oracle") {
  Rng rng(7);
  const int m = 17, k = 63, n = 29;
  const auto a = random_vec(rng, size_t(m) * k);
  const auto b = random_vec(rng, size_t(k) * n);
  std::vector<float> c(size_t(m) * n);
  kern::gemm_nn(a.data(), b.data(), c.data(), m, k, n, false);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int p = 0; p < k; ++p) s += double(a[i * k + p]) * double(b[p * n + j]);
      CHECK(std::abs(s - double(c[size_t(i) * n + j])) < 1e-4);
    }
}

TEST_CASE("elementwise and reduction lanes agree") {
  Rng rng(99);
  for (auto isa : lanes()) {
    const auto& t = kern::table_for(isa);
    const auto& ref = kern::table_for(kern::Isa::scalar);
    for (size_t n : {size_t(1), size_t(7), size_t(16), size_t(17), size_t(1000), size_t(4096)}) {
      const auto x = random_vec(rng, n);
      const auto y = random_vec(rng, n);
      std::vector<float> o0(n), o1(n);

      ref.add(x.data(), y.data(), o0.data(), n);
      t.add(x.data(), y.data(), o1.data(), n);
      CHECK(o0 == o1);  // no reassociation in elementwise ops
      ref.sub(x.data(), y.data(), o0.data(), n);
      t.sub(x.data(), y.data(), o1.data(), n);
      CHECK(o0 == o1);
      ref.mul(x.data(), y.data(), o0.data(), n);
      t.mul(x.data(), y.data(), o1.data(), n);
      CHECK(o0 == o1);
      ref.scale(1.7f, x.data(), o0.data(), n);
      t.scale(1.7f, x.data(), o1.data(), n);
      CHECK(o0 == o1);

      o0 = y;
      o1 = y;
      ref.axpy(0.3f, x.data(), o0.data(), n);
      t.axpy(0.3f, x.data(), o1.data(), n);
      for (size_t i = 0; i < n; ++i) CHECK(o0[i] == doctest::Approx(o1[i]).epsilon(1e-6));

      CHECK(double(ref.sum(x.data(), n)) ==
            doctest::Approx(double(t.sum(x.data(), n))).epsilon(1e-5));
      CHECK(double(ref.dot(x.data(), y.data(), n)) ==
            doctest::Approx(double(t.dot(x.data(), y.data(), n))).epsilon(1e-4));
      CHECK(ref.max(x.data(), n) == t.max(x.data(), n));
    }
  }
}

TEST_CASE("reductions are deterministic across repeated calls") {
  Rng rng(3);
  const auto x = random_vec(rng, 12345);
  const float s1 = kern::sum(x.data(), x.size());
  const float s2 = kern::sum(x.data(), x.size());
  CHECK(s1 == s2);
}

TEST_CASE("active lane reports a supported ISA") {
  const kern::Isa isa = kern::active_isa();
  CHECK(kern::isa_supported(isa));
  CHECK(kern::isa_name(isa) != nullptr);
}
