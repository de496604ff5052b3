#include "m6d/geom/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "m6d/errors.hpp"

namespace m6d::geom {

void TriMesh::validate() const {
  const int n = int(vertices.size());
  for (const auto& t : triangles)
    for (int idx : t)
      if (idx < 0 || idx >= n) throw FormatViolation("triangle index out of range");
  if (symmetries.empty()) throw FormatViolation("symmetry list must contain the identity");
  bool has_identity = false;
  for (const Pose& s : symmetries) {
    if (!s.valid(1e-9)) throw FormatViolation("symmetry transform is not a rigid rotation");
    double dev = 0.0;
    const Mat3 id = mat3_identity();
    for (int i = 0; i < 9; ++i) dev = std::max(dev, std::abs(s.rotation[i] - id[i]));
    for (int i = 0; i < 3; ++i) dev = std::max(dev, std::abs(s.translation[i]));
    if (dev < 1e-12) has_identity = true;
  }
  if (!has_identity) throw FormatViolation("symmetry list must contain the identity");
}

Aabb mesh_aabb(const TriMesh& mesh) {
  if (mesh.vertices.empty()) throw TooFewVertices("mesh_aabb: empty mesh");
  Aabb box{mesh.vertices[0], mesh.vertices[0]};
  for (const Vec3& v : mesh.vertices)
    for (int a = 0; a < 3; ++a) {
      box.lo[a] = std::min(box.lo[a], v[a]);
      box.hi[a] = std::max(box.hi[a], v[a]);
    }
  return box;
}

double diameter(const TriMesh& mesh) {
  const auto& v = mesh.vertices;
  if (v.size() < 2) throw TooFewVertices("diameter requires >= 2 vertices");
  double best = 0.0;
  for (size_t i = 0; i + 1 < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j) {
      const double dx = v[i][0] - v[j][0];
      const double dy = v[i][1] - v[j][1];
      const double dz = v[i][2] - v[j][2];
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 > best) best = d2;
    }
  return std::sqrt(best);
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open mesh file for writing: " + path);
  char buf[160];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.12g %.12g %.12g\n", v[0], v[1], v[2]);
    out << buf;
  }
  for (const auto& t : mesh.triangles) {
    std::snprintf(buf, sizeof buf, "f %d %d %d\n", t[0], t[1], t[2]);
    out << buf;
  }
  if (!out) throw IoFailure("write failed: " + path);

  std::ofstream sym(path + ".sym");
  if (!sym) throw IoFailure("cannot open symmetry sidecar for writing: " + path + ".sym");
  for (const Pose& s : mesh.symmetries) {
    sym << "symmetry =";
    for (double v : s.rotation) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      sym << buf;
    }
    for (double v : s.translation) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      sym << buf;
    }
    sym << "\n";
  }
  if (!sym) throw IoFailure("write failed: " + path + ".sym");
}

TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open mesh file: " + path);
  TriMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      if (!(ss >> v[0] >> v[1] >> v[2])) throw FormatViolation("bad vertex line: " + line);
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<int, 3> t;
      if (!(ss >> t[0] >> t[1] >> t[2])) throw FormatViolation("bad face line: " + line);
      mesh.triangles.push_back(t);
    } else {
      throw FormatViolation("unknown mesh record: " + line);
    }
  }

  const std::string sym_path = path + ".sym";
  if (std::filesystem::exists(sym_path)) {
    std::ifstream sym(sym_path);
    if (!sym) throw IoFailure("cannot open symmetry sidecar: " + sym_path);
    mesh.symmetries.clear();
    while (std::getline(sym, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos || line.substr(0, eq).find("symmetry") == std::string::npos)
        throw FormatViolation("bad symmetry record: " + line);
      std::istringstream ss(line.substr(eq + 1));
      Pose p;
      for (double& v : p.rotation)
        if (!(ss >> v)) throw FormatViolation("truncated symmetry record: " + line);
      for (double& v : p.translation)
        if (!(ss >> v)) throw FormatViolation("truncated symmetry record: " + line);
      mesh.symmetries.push_back(p);
    }
    if (mesh.symmetries.empty()) mesh.symmetries.push_back(Pose{});
  }
  mesh.validate();
  return mesh;
}

}  // namespace m6d::geom
