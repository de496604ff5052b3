#include "m6d/synth/catalog.hpp"

#include <cmath>
#include <map>

namespace m6d::synth {

using geom::Pose;
using geom::TriMesh;
using geom::Vec3;

namespace {

constexpr double kPi = 3.14159265358979323846;

// One subdivided rectangle face. `origin` is the corner, `du`/`dv` span it.
void add_grid_face(TriMesh& m, const Vec3& origin, const Vec3& du, const Vec3& dv, int g) {
  const int base = int(m.vertices.size());
  for (int i = 0; i <= g; ++i)
    for (int j = 0; j <= g; ++j) {
      const double a = double(i) / g, b = double(j) / g;
      m.vertices.push_back({origin[0] + a * du[0] + b * dv[0],
                            origin[1] + a * du[1] + b * dv[1],
                            origin[2] + a * du[2] + b * dv[2]});
    }
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      const int v00 = base + i * (g + 1) + j;
      const int v01 = v00 + 1;
      const int v10 = v00 + (g + 1);
      const int v11 = v10 + 1;
      m.triangles.push_back({v00, v10, v11});
      m.triangles.push_back({v00, v11, v01});
    }
}

void append_mesh(TriMesh& dst, const TriMesh& src, const Vec3& offset) {
  const int base = int(dst.vertices.size());
  for (const Vec3& v : src.vertices)
    dst.vertices.push_back({v[0] + offset[0], v[1] + offset[1], v[2] + offset[2]});
  for (const auto& t : src.triangles)
    dst.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
}

}  // namespace

std::vector<Pose> z_rotation_symmetries(int count) {
  std::vector<Pose> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double a = 2.0 * kPi * double(k) / double(count);
    Pose p;
    p.rotation = {std::cos(a), -std::sin(a), 0.0,
                  std::sin(a), std::cos(a), 0.0,
                  0.0, 0.0, 1.0};
    if (k == 0) p.rotation = geom::mat3_identity();
    out.push_back(p);
  }
  return out;
}

TriMesh make_box(double sx, double sy, double sz, int grid) {
  TriMesh m;
  const double hx = sx * 0.5, hy = sy * 0.5, hz = sz * 0.5;
  add_grid_face(m, {-hx, -hy, hz}, {2 * hx, 0, 0}, {0, 2 * hy, 0}, grid);    // +z
  add_grid_face(m, {-hx, hy, -hz}, {2 * hx, 0, 0}, {0, -2 * hy, 0}, grid);   // -z
  add_grid_face(m, {hx, -hy, -hz}, {0, 2 * hy, 0}, {0, 0, 2 * hz}, grid);    // +x
  add_grid_face(m, {-hx, -hy, hz}, {0, 2 * hy, 0}, {0, 0, -2 * hz}, grid);   // -x
  add_grid_face(m, {-hx, hy, hz}, {2 * hx, 0, 0}, {0, 0, -2 * hz}, grid);    // +y
  add_grid_face(m, {-hx, -hy, -hz}, {2 * hx, 0, 0}, {0, 0, 2 * hz}, grid);   // -y
  return m;
}

TriMesh make_cylinder(double radius, double height, int segments, int rings) {
  TriMesh m;
  const double hz = height * 0.5;
  // side rings bottom-up, angular index fastest
  for (int r = 0; r <= rings; ++r) {
    const double z = -hz + height * double(r) / rings;
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * kPi * double(s) / segments;
      m.vertices.push_back({radius * std::cos(a), radius * std::sin(a), z});
    }
  }
  auto side = [&](int r, int s) { return r * segments + (s % segments); };
  for (int r = 0; r < rings; ++r)
    for (int s = 0; s < segments; ++s) {
      m.triangles.push_back({side(r, s), side(r, s + 1), side(r + 1, s + 1)});
      m.triangles.push_back({side(r, s), side(r + 1, s + 1), side(r + 1, s)});
    }
  const int bottom_center = int(m.vertices.size());
  m.vertices.push_back({0, 0, -hz});
  const int top_center = int(m.vertices.size());
  m.vertices.push_back({0, 0, hz});
  for (int s = 0; s < segments; ++s) {
    m.triangles.push_back({bottom_center, side(0, s + 1), side(0, s)});
    m.triangles.push_back({top_center, side(rings, s), side(rings, s + 1)});
  }
  m.symmetries = z_rotation_symmetries(segments);
  return m;
}

TriMesh make_cone(double radius, double height, int segments) {
  TriMesh m;
  const double hz = height * 0.5;
  for (int s = 0; s < segments; ++s) {
    const double a = 2.0 * kPi * double(s) / segments;
    m.vertices.push_back({radius * std::cos(a), radius * std::sin(a), -hz});
  }
  const int base_center = segments;
  m.vertices.push_back({0, 0, -hz});
  const int apex = segments + 1;
  m.vertices.push_back({0, 0, hz});
  for (int s = 0; s < segments; ++s) {
    const int s1 = (s + 1) % segments;
    m.triangles.push_back({apex, s, s1});
    m.triangles.push_back({base_center, s1, s});
  }
  return m;
}

TriMesh make_icosphere(double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) * 0.5;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<int, 3>> tris = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
      {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
      {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  auto normalize = [&](Vec3 v) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return Vec3{v[0] / n, v[1] / n, v[2] / n};
  };
  for (Vec3& v : verts) v = normalize(v);

  for (int iter = 0; iter < subdivisions; ++iter) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const Vec3 m = normalize({(verts[a][0] + verts[b][0]) * 0.5,
                                (verts[a][1] + verts[b][1]) * 0.5,
                                (verts[a][2] + verts[b][2]) * 0.5});
      verts.push_back(m);
      const int idx = int(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& tr : tris) {
      const int ab = mid(tr[0], tr[1]);
      const int bc = mid(tr[1], tr[2]);
      const int ca = mid(tr[2], tr[0]);
      next.push_back({tr[0], ab, ca});
      next.push_back({tr[1], bc, ab});
      next.push_back({tr[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }

  TriMesh m;
  m.vertices.reserve(verts.size());
  for (const Vec3& v : verts)
    m.vertices.push_back({v[0] * radius, v[1] * radius, v[2] * radius});
  m.triangles = tris;
  return m;
}

TriMesh make_l_bracket() {
  TriMesh m;
  const TriMesh arm_x = make_box(0.14, 0.03, 0.03, 2);
  const TriMesh arm_y = make_box(0.03, 0.08, 0.03, 2);
  append_mesh(m, arm_x, {0.0, -0.04, 0.0});
  append_mesh(m, arm_y, {-0.055, 0.015, 0.0});
  return m;
}

TriMesh make_torus(double major_r, double minor_r, int major_seg, int minor_seg) {
  TriMesh m;
  for (int i = 0; i < major_seg; ++i) {
    const double th = 2.0 * kPi * double(i) / major_seg;
    for (int j = 0; j < minor_seg; ++j) {
      const double ph = 2.0 * kPi * double(j) / minor_seg;
      const double rr = major_r + minor_r * std::cos(ph);
      m.vertices.push_back({rr * std::cos(th), rr * std::sin(th), minor_r * std::sin(ph)});
    }
  }
  auto vid = [&](int i, int j) { return (i % major_seg) * minor_seg + (j % minor_seg); };
  for (int i = 0; i < major_seg; ++i)
    for (int j = 0; j < minor_seg; ++j) {
      m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  m.symmetries = z_rotation_symmetries(major_seg);
  return m;
}

TriMesh make_prism(double side, double length, int rings) {
  TriMesh m;
  const double rad = side / std::sqrt(2.0);
  const double hz = length * 0.5;
  const int segments = 4;
  for (int r = 0; r <= rings; ++r) {
    const double z = -hz + length * double(r) / rings;
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * kPi * (double(s) + 0.5) / segments;
      m.vertices.push_back({rad * std::cos(a), rad * std::sin(a), z});
    }
  }
  auto vid = [&](int r, int s) { return r * segments + (s % segments); };
  for (int r = 0; r < rings; ++r)
    for (int s = 0; s < segments; ++s) {
      m.triangles.push_back({vid(r, s), vid(r, s + 1), vid(r + 1, s + 1)});
      m.triangles.push_back({vid(r, s), vid(r + 1, s + 1), vid(r + 1, s)});
    }
  const int bottom_center = int(m.vertices.size());
  m.vertices.push_back({0, 0, -hz});
  const int top_center = int(m.vertices.size());
  m.vertices.push_back({0, 0, hz});
  for (int s = 0; s < segments; ++s) {
    m.triangles.push_back({bottom_center, vid(0, s + 1), vid(0, s)});
    m.triangles.push_back({top_center, vid(rings, s), vid(rings, s + 1)});
  }
  m.symmetries = z_rotation_symmetries(segments);
  return m;
}

TriMesh make_quad(double half_x, double half_y) {
  TriMesh m;
  m.vertices = {{-half_x, -half_y, 0}, {half_x, -half_y, 0},
                {half_x, half_y, 0}, {-half_x, half_y, 0}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

std::vector<CatalogEntry> make_catalog() {
  std::vector<CatalogEntry> cat;
  cat.push_back({"box", make_box(0.12, 0.09, 0.07), {0.85f, 0.30f, 0.25f}});
  cat.push_back({"long_box", make_box(0.20, 0.05, 0.05), {0.25f, 0.60f, 0.85f}});
  cat.push_back({"cylinder", make_cylinder(0.045, 0.14), {0.30f, 0.75f, 0.35f}});
  cat.push_back({"cone", make_cone(0.055, 0.13), {0.90f, 0.75f, 0.20f}});
  cat.push_back({"icosphere", make_icosphere(0.06), {0.70f, 0.35f, 0.80f}});
  cat.push_back({"l_bracket", make_l_bracket(), {0.90f, 0.50f, 0.15f}});
  cat.push_back({"torus", make_torus(0.055, 0.022), {0.20f, 0.70f, 0.70f}});
  cat.push_back({"prism", make_prism(0.06, 0.13), {0.60f, 0.60f, 0.60f}});
  for (auto& e : cat) e.mesh.validate();
  return cat;
}

}  // namespace m6d::synth
