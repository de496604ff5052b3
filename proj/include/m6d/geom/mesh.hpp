#pragma once

#include <array>
#include <string>
#include <vector>

#include "m6d/geom/pose.hpp"

namespace m6d::geom {

// Object CAD model in its own model frame, plus the rigid transforms that map
// the model onto itself (identity always present, first).
struct TriMesh {
  std::vector<Vec3> vertices;                 // meters
  std::vector<std::array<int, 3>> triangles;  // vertex indices
  std::vector<Pose> symmetries = {Pose{}};

  bool has_nontrivial_symmetry() const { return symmetries.size() > 1; }
  void validate() const;  // index ranges, identity present, symmetry poses valid
};

struct Aabb {
  Vec3 lo{0, 0, 0}, hi{0, 0, 0};
};
Aabb mesh_aabb(const TriMesh& mesh);

// Maximum pairwise vertex distance. Throws TooFewVertices below 2 vertices.
double diameter(const TriMesh& mesh);

// Text format: `v x y z` / `f i j k` (0-based) lines; symmetries live in a
// `<path>.sym` sidecar, one `symmetry = r00..r22 tx ty tz` line each.
void save_mesh(const TriMesh& mesh, const std::string& path);
TriMesh load_mesh(const std::string& path);

}  // namespace m6d::geom
