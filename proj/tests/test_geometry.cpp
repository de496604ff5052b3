#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "m6d/errors.hpp"
#include "m6d/geom/metrics.hpp"
#include "m6d/geom/pose.hpp"
#include "m6d/rng.hpp"
#include "m6d/synth/catalog.hpp"
#include "m6d/synth/scene.hpp"

using namespace m6d;
using geom::Mat3;
using geom::Pose;
using geom::Vec3;

namespace {

Pose random_pose(Rng& rng, double tmax = 0.5) {
  Pose p;
  p.rotation = synth::random_rotation(rng);
  for (auto& v : p.translation) v = rng.uniform(-tmax, tmax);
  return p;
}

geom::TriMesh random_mesh(Rng& rng, int n) {
  geom::TriMesh m;
  for (int i = 0; i < n; ++i)
    m.vertices.push_back({rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)});
  return m;
}

}  // namespace

TEST_CASE("compose: identity and inverse") {
  const Pose id;
  CHECK(compose(id, id).valid());
  Rng rng(11);
  const Pose p = random_pose(rng);
  const Pose q = compose(p, invert(p));
  for (int i = 0; i < 9; ++i)
    CHECK(q.rotation[i] == doctest::Approx(geom::mat3_identity()[i]).epsilon(0).scale(1));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(q.translation[i]) < 1e-12);
  CHECK(geom::rotation_angle_between(q.rotation, geom::mat3_identity()) < 1e-12);
}

TEST_CASE("compose matches element-wise matrix product oracle") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Pose a = random_pose(rng), b = random_pose(rng);
    const Pose c = compose(a, b);
    CHECK(c.valid(1e-9));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += a.rotation[i * 3 + k] * b.rotation[k * 3 + j];
        CHECK(c.rotation[i * 3 + j] == doctest::Approx(s).epsilon(1e-12));
      }
    // composition applies b first
    Rng prng(trial);
    const Vec3 x = {prng.uniform(-1, 1), prng.uniform(-1, 1), prng.uniform(-1, 1)};
    const Vec3 lhs = c.apply(x);
    const Vec3 rhs = a.apply(b.apply(x));
    for (int i = 0; i < 3; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
  }
}

TEST_CASE("project: axis cases and depth guard") {
  geom::CameraIntrinsics k{100, 100, 64, 64, 128, 128};
  const auto p = geom::project({{0, 0, 1}, {0.1, 0, 1}}, k);
  CHECK(p[0][0] == doctest::Approx(64.0));
  CHECK(p[0][1] == doctest::Approx(64.0));
  CHECK(p[1][0] == doctest::Approx(74.0));
  CHECK(p[1][1] == doctest::Approx(64.0));
  CHECK_THROWS_AS(geom::project({{0, 0, -1}}, k), NonPositiveDepth);
  CHECK_THROWS_AS(geom::project({{0, 0, 0}}, k), NonPositiveDepth);
}

TEST_CASE("diameter: cube, segment, brute force") {
  geom::TriMesh cube;
  for (int i = 0; i < 8; ++i)
    cube.vertices.push_back({i & 1 ? 0.5 : -0.5, i & 2 ? 0.5 : -0.5, i & 4 ? 0.5 : -0.5});
  CHECK(geom::diameter(cube) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  geom::TriMesh seg;
  seg.vertices = {{0, 0, 0}, {2, 0, 0}};
  CHECK(geom::diameter(seg) == doctest::Approx(2.0));

  geom::TriMesh one;
  one.vertices = {{0, 0, 0}};
  CHECK_THROWS_AS(geom::diameter(one), TooFewVertices);

  Rng rng(5);
  const auto mesh = random_mesh(rng, 50);
  double brute = 0.0;
  for (size_t i = 0; i < mesh.vertices.size(); ++i)
    for (size_t j = 0; j < mesh.vertices.size(); ++j) {
      double d = 0;
      for (int a = 0; a < 3; ++a) {
        const double dd = mesh.vertices[i][a] - mesh.vertices[j][a];
        d += dd * dd;
      }
      brute = std::max(brute, std::sqrt(d));
    }
  CHECK(geom::diameter(mesh) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("add metric: identity, translation, brute force") {
  Rng rng(21);
  const auto mesh = random_mesh(rng, 50);
  const Pose gt = random_pose(rng);
  CHECK(geom::add_metric(gt, gt, mesh) == doctest::Approx(0.0));

  Pose shifted = gt;
  shifted.translation[0] += 0.03;
  shifted.translation[2] -= 0.04;
  CHECK(geom::add_metric(shifted, gt, mesh) == doctest::Approx(0.05).epsilon(1e-12));

  for (int trial = 0; trial < 10; ++trial) {
    const Pose est = random_pose(rng), ref = random_pose(rng);
    double brute = 0.0;
    for (const auto& x : mesh.vertices) {
      const Vec3 pe = est.apply(x), pg = ref.apply(x);
      brute += std::sqrt((pe[0] - pg[0]) * (pe[0] - pg[0]) + (pe[1] - pg[1]) * (pe[1] - pg[1]) +
                         (pe[2] - pg[2]) * (pe[2] - pg[2]));
    }
    brute /= double(mesh.vertices.size());
    CHECK(geom::add_metric(est, ref, mesh) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("add-s metric: symmetry case and nearest-neighbor oracle") {
  geom::TriMesh cube;
  for (int i = 0; i < 8; ++i)
    cube.vertices.push_back({i & 1 ? 0.5 : -0.5, i & 2 ? 0.5 : -0.5, i & 4 ? 0.5 : -0.5});

  Rng rng(31);
  const Pose gt = random_pose(rng);
  CHECK(geom::add_s_metric(gt, gt, cube) == doctest::Approx(0.0));

  Pose rot90;  // 90 degrees about z maps the cube vertex set onto itself
  rot90.rotation = {0, -1, 0, 1, 0, 0, 0, 0, 1};
  const Pose est = compose(gt, rot90);
  CHECK(geom::add_s_metric(est, gt, cube) < 1e-12);
  CHECK(geom::add_metric(est, gt, cube) > 0.1);

  // oracle + adds <= add on random pairs
  for (int trial = 0; trial < 10; ++trial) {
    const auto mesh = random_mesh(rng, 50);
    const Pose a = random_pose(rng), b = random_pose(rng);
    double brute = 0.0;
    for (const auto& x : mesh.vertices) {
      const Vec3 p = a.apply(x);
      double best = 1e300;
      for (const auto& y : mesh.vertices) {
        const Vec3 q = b.apply(y);
        const double d = std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) +
                                   (p[2] - q[2]) * (p[2] - q[2]));
        best = std::min(best, d);
      }
      brute += best;
    }
    brute /= double(mesh.vertices.size());
    const double adds = geom::add_s_metric(a, b, mesh);
    CHECK(adds == doctest::Approx(brute).epsilon(1e-12));
    CHECK(adds <= geom::add_metric(a, b, mesh) + 1e-15);
  }
}

TEST_CASE("add metric invariant under shared left-composition") {
  Rng rng(41);
  const auto mesh = random_mesh(rng, 40);
  const Pose est = random_pose(rng), gt = random_pose(rng), g = random_pose(rng);
  const double before = geom::add_metric(est, gt, mesh);
  const double after = geom::add_metric(compose(g, est), compose(g, gt), mesh);
  CHECK(before == doctest::Approx(after).epsilon(1e-9));
}

TEST_CASE("catalog symmetries map vertex sets onto themselves") {
  for (const auto& entry : synth::make_catalog()) {
    for (const auto& sym : entry.mesh.symmetries) {
      Pose gt;
      gt.translation = {0.05, -0.02, 0.8};
      const double adds = geom::add_s_metric(compose(gt, sym), gt, entry.mesh);
      CHECK_MESSAGE(adds < 1e-9, entry.name);
    }
  }
}

TEST_CASE("add_recall: counting") {
  CHECK(geom::add_recall({{0.0, 1.0}, {0.0, 2.0}}, 0.05) == doctest::Approx(1.0));
  CHECK(geom::add_recall({{0.01, 1.0}, {0.2, 1.0}}, 0.1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(geom::add_recall({}, 0.1), EmptyInput);

  Rng rng(51);
  std::vector<std::pair<double, double>> vals;
  for (int i = 0; i < 100; ++i) vals.push_back({rng.uniform(0, 0.3), rng.uniform(0.5, 2.0)});
  int count = 0;
  for (const auto& [v, d] : vals)
    if (v < 0.1 * d) ++count;
  CHECK(geom::add_recall(vals, 0.1) == doctest::Approx(count / 100.0));
}

TEST_CASE("auc_of_add: endpoints, step function, monotonicity") {
  CHECK(geom::auc_of_add({0.0, 0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(geom::auc_of_add({0.2, 0.5}) == doctest::Approx(0.0));
  CHECK(geom::auc_of_add(std::vector<double>(10, 0.05), 0.10) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(geom::auc_of_add({}), EmptyInput);

  Rng rng(61);
  std::vector<double> vals;
  for (int i = 0; i < 30; ++i) vals.push_back(rng.uniform(0, 0.2));
  const double before = geom::auc_of_add(vals);
  vals[7] *= 0.5;  // improving one value cannot lower the area
  CHECK(geom::auc_of_add(vals) >= before - 1e-12);
}

TEST_CASE("rot6d: identity, scale invariance, orthonormality, round trip") {
  const Mat3 id = geom::rot6d_to_matrix({1, 0, 0, 0, 1, 0});
  for (int i = 0; i < 9; ++i) CHECK(id[i] == doctest::Approx(geom::mat3_identity()[i]));
  const Mat3 scaled = geom::rot6d_to_matrix({2, 0, 0, 0, 3, 0});
  for (int i = 0; i < 9; ++i) CHECK(scaled[i] == doctest::Approx(geom::mat3_identity()[i]));

  CHECK_THROWS_AS(geom::rot6d_to_matrix({0, 0, 0, 0, 1, 0}), DegenerateInput);
  CHECK_THROWS_AS(geom::rot6d_to_matrix({1, 0, 0, 2, 0, 0}), DegenerateInput);

  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 6> r;
    for (auto& v : r) v = rng.uniform(-2, 2);
    Mat3 m;
    try {
      m = geom::rot6d_to_matrix(r);
    } catch (const DegenerateInput&) {
      continue;
    }
    Pose p;
    p.rotation = m;
    CHECK(p.valid(1e-9));
    // round trip through the first two columns
    const Mat3 back = geom::rot6d_to_matrix(geom::matrix_to_rot6d(m));
    for (int i = 0; i < 9; ++i) CHECK(std::abs(back[i] - m[i]) < 1e-12);
  }
}

TEST_CASE("site encode/decode: axis case, round trip, depth guard") {
  geom::CameraIntrinsics k{572, 572, 320, 240, 640, 480};
  geom::CropDesc crop{320, 240, 128, 256};
  const double r = 256.0 / 128.0;
  const Vec3 t = geom::site_decode({0, 0, r * 1.0}, crop, k);
  CHECK(t[0] == doctest::Approx(0.0));
  CHECK(t[1] == doctest::Approx(0.0));
  CHECK(t[2] == doctest::Approx(1.0));

  CHECK_THROWS_AS(geom::site_decode({0, 0, 0}, crop, k), NonPositiveDepth);

  Rng rng(81);
  for (int trial = 0; trial < 100; ++trial) {
    geom::CropDesc c{rng.uniform(100, 500), rng.uniform(100, 380), rng.uniform(40, 200), 256};
    const Vec3 tt = {rng.uniform(-0.4, 0.4), rng.uniform(-0.3, 0.3), rng.uniform(0.4, 2.5)};
    const Vec3 back = geom::site_decode(geom::site_encode(tt, c, k), c, k);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(back[i] - tt[i]) < 1e-9);
  }
}

TEST_CASE("mesh save/load round trip with symmetries") {
  const auto catalog = synth::make_catalog();
  const auto& cyl = catalog[2];
  const std::string path = "test_mesh_roundtrip.txt";
  geom::save_mesh(cyl.mesh, path);
  const geom::TriMesh back = geom::load_mesh(path);
  REQUIRE(back.vertices.size() == cyl.mesh.vertices.size());
  REQUIRE(back.triangles.size() == cyl.mesh.triangles.size());
  REQUIRE(back.symmetries.size() == cyl.mesh.symmetries.size());
  for (size_t i = 0; i < back.vertices.size(); ++i)
    for (int a = 0; a < 3; ++a)
      CHECK(back.vertices[i][a] == doctest::Approx(cyl.mesh.vertices[i][a]).epsilon(1e-12));
  std::remove(path.c_str());
  std::remove((path + ".sym").c_str());
}
