#pragma once

#include <array>
#include <string>
#include <vector>

#include "m6d/geom/mesh.hpp"

namespace m6d::synth {

struct CatalogEntry {
  std::string name;
  geom::TriMesh mesh;
  std::array<float, 3> albedo;
};

// The eight procedural objects. Deterministic; cylinder, torus and prism
// carry non-trivial rotational symmetry lists about their main axis.
std::vector<CatalogEntry> make_catalog();

// Building blocks, exposed for tests.
geom::TriMesh make_box(double sx, double sy, double sz, int grid = 4);
geom::TriMesh make_cylinder(double radius, double height, int segments = 24, int rings = 4);
geom::TriMesh make_cone(double radius, double height, int segments = 24);
geom::TriMesh make_icosphere(double radius, int subdivisions = 2);
geom::TriMesh make_l_bracket();
geom::TriMesh make_torus(double major_r, double minor_r, int major_seg = 16, int minor_seg = 8);
geom::TriMesh make_prism(double side, double length, int rings = 4);
geom::TriMesh make_quad(double half_x, double half_y);  // background plane

std::vector<geom::Pose> z_rotation_symmetries(int count);

}  // namespace m6d::synth
