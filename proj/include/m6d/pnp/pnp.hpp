#pragma once

#include <cstdint>
#include <vector>

#include "m6d/geom/mesh.hpp"
#include "m6d/geom/pose.hpp"

namespace m6d::pnp {

struct Correspondence2D3D {
  geom::Vec2 pixel;        // full-image frame
  geom::Vec3 model_point;  // model frame, meters
  double weight = 1.0;     // in [0, 1]
};

// Dense maps -> correspondence list. Map pixels with mask > threshold decode
// their stored normalized coordinates through the mesh AABB; pixel centers
// are mapped from the crop frame back to full-image coordinates.
std::vector<Correspondence2D3D> correspondences_from_maps(
    const std::vector<float>& cor, const std::vector<float>& mask, int map_res,
    const geom::TriMesh& mesh, const geom::CropDesc& crop, double mask_threshold = 0.5);

// DLT minimal/overdetermined solve with SVD-nearest-rotation projection and a
// planar fallback for coplanar model points. Throws TooFewPoints (< 6) and
// DegenerateConfiguration (rank-deficient image configurations).
geom::Pose pnp_minimal(const std::vector<Correspondence2D3D>& corrs,
                       const geom::CameraIntrinsics& k);

// Gauss-Newton on weighted reprojection error; rotation updated on SO(3) via
// exponential-map increments, halving line search, never increases the error.
geom::Pose refine_pose(const geom::Pose& init, const std::vector<Correspondence2D3D>& corrs,
                       const geom::CameraIntrinsics& k, int iters = 20);

struct RansacResult {
  geom::Pose pose;
  std::vector<uint8_t> inliers;  // aligned with the input list
  int inlier_count = 0;
  int iterations_used = 0;
};

RansacResult pnp_ransac(const std::vector<Correspondence2D3D>& corrs,
                        const geom::CameraIntrinsics& k, double inlier_px = 2.0,
                        int max_iters = 500, uint64_t seed = 0);

double reprojection_rms(const geom::Pose& pose, const std::vector<Correspondence2D3D>& corrs,
                        const geom::CameraIntrinsics& k);

}  // namespace m6d::pnp
