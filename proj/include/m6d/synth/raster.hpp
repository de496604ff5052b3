#pragma once

#include <cstdint>
#include <vector>

#include "m6d/geom/mesh.hpp"
#include "m6d/geom/pose.hpp"
#include "m6d/synth/sra.hpp"

namespace m6d::synth {

struct Material {
  std::array<float, 3> albedo{0.7f, 0.7f, 0.7f};
  // checker_cell > 0 switches to a model-frame xy checkerboard between
  // albedo and albedo2 (used by the background plane).
  std::array<float, 3> albedo2{0.2f, 0.2f, 0.2f};
  double checker_cell = 0.0;
};

struct SceneObject {
  const geom::TriMesh* mesh = nullptr;
  geom::Pose pose;
  Material material;
};

// Aligned multi-modal ground truth for one crop. rgb values are quantized to
// the 8-bit grid at render time so the on-disk PNG round-trips bit-exactly.
struct ModalityMaps {
  int rgb_res = 256;
  int map_res = 64;
  std::vector<float> rgb;     // rgb_res^2 * 3, in [0,1]
  std::vector<float> cor;     // map_res^2 * 3, in [0,1], zero outside mask
  std::vector<uint8_t> mask;  // map_res^2, 0/1
  std::vector<uint8_t> sra;   // map_res^2, 0 background, 1..K fragments
  std::vector<float> depth;   // map_res^2, meters, 0 = empty
};

// Nearest-surface buffers of one z-buffer pass at res x res.
struct RasterPass {
  int res = 0;
  std::vector<float> depth;     // 0 = empty
  std::vector<int32_t> obj;     // -1 = empty
  std::vector<int32_t> tri;
  std::vector<double> point;    // interpolated model-frame point, res^2 * 3
  std::vector<double> normals;  // camera-frame face normal per (obj,tri), flattened
  std::vector<int> normal_offset;  // per object, into normals
};

// Perspective z-buffer pass with pixel-center sampling at (col+0.5, row+0.5).
// Throws NonPositiveDepth if any transformed vertex has z <= 1e-9.
RasterPass render_pass(const std::vector<SceneObject>& objects,
                       const geom::CameraIntrinsics& k, int res);

struct RasterConfig {
  int rgb_res = 256;
  int map_res = 64;
  int sra_k = 8;
  // Fragment centers of the target mesh; computed via sra_labels when null.
  const std::vector<geom::Vec3>* sra_centers = nullptr;
};

// Full modality render: Lambert-shaded RGB at rgb_res, correspondence/mask/
// surface-region/depth maps at map_res. `k` describes the rgb_res frame.
ModalityMaps rasterize(const std::vector<SceneObject>& objects, int target_index,
                       const geom::CameraIntrinsics& k, const RasterConfig& cfg = {});

}  // namespace m6d::synth
