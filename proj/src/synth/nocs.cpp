#include "m6d/synth/nocs.hpp"

#include <algorithm>

#include "m6d/errors.hpp"

namespace m6d::synth {

geom::Vec3 nocs_encode(const geom::Vec3& point, const geom::Aabb& box) {
  geom::Vec3 out;
  for (int a = 0; a < 3; ++a) {
    const double extent = box.hi[a] - box.lo[a];
    if (extent <= 0.0) throw DegenerateAABB("nocs_encode: AABB has no extent on an axis");
    out[a] = std::clamp((point[a] - box.lo[a]) / extent, 0.0, 1.0);
  }
  return out;
}

geom::Vec3 nocs_decode(const geom::Vec3& coded, const geom::Aabb& box) {
  geom::Vec3 out;
  for (int a = 0; a < 3; ++a) {
    const double extent = box.hi[a] - box.lo[a];
    if (extent <= 0.0) throw DegenerateAABB("nocs_decode: AABB has no extent on an axis");
    out[a] = box.lo[a] + coded[a] * extent;
  }
  return out;
}

}  // namespace m6d::synth
