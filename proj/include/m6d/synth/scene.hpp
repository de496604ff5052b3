#pragma once

#include <cstdint>
#include <vector>

#include "m6d/rng.hpp"
#include "m6d/synth/catalog.hpp"
#include "m6d/synth/raster.hpp"

namespace m6d::synth {

struct SceneSample {
  ModalityMaps maps;
  geom::Pose gt_pose;
  int object_id = 0;
  geom::CameraIntrinsics intrinsics;  // full-image camera
  geom::CropDesc crop;
  double visible_fraction = 1.0;
  bool occlusion_warning = false;  // banded occlusion target not reached
};

struct SceneGenConfig {
  geom::CameraIntrinsics camera{572.0, 572.0, 320.0, 240.0, 640, 480};
  double occlusion_target = 0.0;  // in [0, 1)
  int sra_k = 8;
  int rgb_res = 256;
  int map_res = 64;
  int max_attempts = 50;
  double crop_margin = 1.4;  // crop side as a multiple of the 2D box
};

// One synthetic training sample: random target pose, occluders resampled
// until the visible fraction lies within +-0.15 of (1 - occlusion_target),
// checkerboard background plane, modality maps rendered at crop scale.
// Deterministic per seed.
SceneSample make_scene(uint64_t seed, const std::vector<CatalogEntry>& catalog,
                       const SceneGenConfig& cfg = {});

// Uniform rotation on SO(3) (quaternion method).
geom::Mat3 random_rotation(Rng& rng);

}  // namespace m6d::synth
