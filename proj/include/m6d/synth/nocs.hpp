#pragma once

#include "m6d/geom/mesh.hpp"

namespace m6d::synth {

// Normalized object coordinates: model point mapped into the unit cube by the
// mesh AABB, clamped. Throws DegenerateAABB when an axis has no extent.
geom::Vec3 nocs_encode(const geom::Vec3& point, const geom::Aabb& box);
geom::Vec3 nocs_decode(const geom::Vec3& coded, const geom::Aabb& box);

inline geom::Vec3 nocs_encode(const geom::Vec3& point, const geom::TriMesh& mesh) {
  return nocs_encode(point, geom::mesh_aabb(mesh));
}
inline geom::Vec3 nocs_decode(const geom::Vec3& coded, const geom::TriMesh& mesh) {
  return nocs_decode(coded, geom::mesh_aabb(mesh));
}

}  // namespace m6d::synth
