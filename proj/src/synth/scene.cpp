#include "m6d/synth/scene.hpp"

#include <algorithm>
#include <cmath>

#include "m6d/errors.hpp"

namespace m6d::synth {

using geom::CropDesc;
using geom::Mat3;
using geom::Pose;
using geom::Vec3;

geom::Mat3 random_rotation(Rng& rng) {
  // unit quaternion from 4 normals
  double q[4];
  double n = 0.0;
  for (double& v : q) {
    v = rng.normal();
    n += v * v;
  }
  n = std::sqrt(n);
  for (double& v : q) v /= n;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
          2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
          2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
}

namespace {

int count_target_pixels(const std::vector<SceneObject>& objects,
                        const geom::CameraIntrinsics& k_map, int map_res) {
  const RasterPass pass = render_pass(objects, k_map, map_res);
  int count = 0;
  for (int32_t o : pass.obj)
    if (o == 0) ++count;
  return count;
}

geom::CameraIntrinsics map_intrinsics(const geom::CameraIntrinsics& k256, int rgb_res,
                                      int map_res) {
  const double s = double(map_res) / double(rgb_res);
  geom::CameraIntrinsics km = k256;
  km.fx *= s;
  km.fy *= s;
  km.cx *= s;
  km.cy *= s;
  km.width = km.height = map_res;
  return km;
}

}  // namespace

SceneSample make_scene(uint64_t seed, const std::vector<CatalogEntry>& catalog,
                       const SceneGenConfig& cfg) {
  if (catalog.empty()) throw EmptyInput("make_scene: empty catalog");
  if (cfg.occlusion_target < 0.0 || cfg.occlusion_target >= 1.0)
    throw ConfigError("make_scene: occlusion_target must lie in [0, 1)");
  const auto& cam = cfg.camera;

  Rng rng(derive_seed(seed, 1));
  SceneSample sample;
  sample.intrinsics = cam;
  sample.object_id = int(rng.below(catalog.size()));
  const CatalogEntry& target = catalog[sample.object_id];

  Pose pose;
  pose.rotation = random_rotation(rng);
  const double tz = rng.uniform(0.5, 2.0);
  const double px = rng.uniform(0.38 * cam.width, 0.62 * cam.width);
  const double py = rng.uniform(0.38 * cam.height, 0.62 * cam.height);
  pose.translation = {(px - cam.cx) * tz / cam.fx, (py - cam.cy) * tz / cam.fy, tz};
  sample.gt_pose = pose;

  // 2D box of the unoccluded target in the full frame
  std::vector<Vec3> cam_pts;
  cam_pts.reserve(target.mesh.vertices.size());
  for (const Vec3& v : target.mesh.vertices) cam_pts.push_back(pose.apply(v));
  const auto proj = geom::project(cam_pts, cam);
  double u0 = proj[0][0], u1 = proj[0][0], v0 = proj[0][1], v1 = proj[0][1];
  for (const auto& p : proj) {
    u0 = std::min(u0, p[0]);
    u1 = std::max(u1, p[0]);
    v0 = std::min(v0, p[1]);
    v1 = std::max(v1, p[1]);
  }
  const double box_side = std::max(u1 - u0, v1 - v0);
  double side = std::clamp(cfg.crop_margin * box_side, 40.0,
                           double(std::min(cam.width, cam.height)));
  double ccx = std::clamp(0.5 * (u0 + u1), side * 0.5, cam.width - side * 0.5);
  double ccy = std::clamp(0.5 * (v0 + v1), side * 0.5, cam.height - side * 0.5);
  sample.crop = CropDesc{ccx, ccy, side, cfg.rgb_res};

  const geom::CameraIntrinsics k256 = geom::crop_intrinsics(cam, sample.crop, cfg.rgb_res);
  const geom::CameraIntrinsics k_map = map_intrinsics(k256, cfg.rgb_res, cfg.map_res);

  const SraPartition part =
      sra_labels(target.mesh, std::min<int>(cfg.sra_k, int(target.mesh.vertices.size())));

  std::vector<SceneObject> base = {{&target.mesh, pose, Material{target.albedo}}};
  const int full_pixels = count_target_pixels(base, k_map, cfg.map_res);
  const double target_diam = geom::diameter(target.mesh);

  // Occluder search: resample layouts until the visible fraction lands in the
  // +-0.15 band around (1 - occlusion_target); keep the closest attempt.
  const double want = 1.0 - cfg.occlusion_target;
  std::vector<SceneObject> best_occluders;
  double best_err = cfg.occlusion_target;  // error of the empty layout
  bool accepted = cfg.occlusion_target == 0.0;

  for (int attempt = 0; attempt < cfg.max_attempts && !accepted; ++attempt) {
    Rng arng(derive_seed(seed, 100 + uint64_t(attempt)));
    const int desired = int(std::lround(cfg.occlusion_target * 4.0));
    int n_occ = std::clamp(desired + arng.uniform_int(-1, 1), 1, 4);

    std::vector<SceneObject> occluders;
    for (int i = 0; i < n_occ; ++i) {
      const auto& entry = catalog[arng.below(catalog.size())];
      Pose opose;
      opose.rotation = random_rotation(arng);
      const double f = arng.uniform(0.35, 0.85);
      const double oz = f * tz;
      const double spread = 0.25 + 0.3 * cfg.occlusion_target;
      const double ou = ccx + arng.uniform(-spread, spread) * side * f;
      const double ov = ccy + arng.uniform(-spread, spread) * side * f;
      opose.translation = {(ou - cam.cx) * oz / cam.fx, (ov - cam.cy) * oz / cam.fy, oz};
      occluders.push_back({&entry.mesh, opose, Material{entry.albedo}});
    }

    std::vector<SceneObject> scene = base;
    scene.insert(scene.end(), occluders.begin(), occluders.end());
    const int vis = count_target_pixels(scene, k_map, cfg.map_res);
    const double vf = full_pixels > 0 ? double(vis) / double(full_pixels) : 0.0;
    const double err = std::abs(vf - want);
    if (err < best_err) {
      best_err = err;
      best_occluders = std::move(occluders);
    }
    if (err <= 0.15) accepted = true;
  }
  sample.occlusion_warning = !accepted;

  // Background plane behind the target, checkerboard albedo.
  Rng brng(derive_seed(seed, 7));
  const double z_bg = tz + 0.5 * target_diam + brng.uniform(0.15, 0.5);
  const double half_x = (0.5 * cam.width + std::abs(ccx - cam.cx)) / cam.fx * z_bg * 1.3;
  const double half_y = (0.5 * cam.height + std::abs(ccy - cam.cy)) / cam.fy * z_bg * 1.3;
  const geom::TriMesh plane_mesh = make_quad(half_x, half_y);
  Material plane_mat;
  for (int c = 0; c < 3; ++c) {
    plane_mat.albedo[c] = float(brng.uniform(0.15, 0.9));
    plane_mat.albedo2[c] = float(brng.uniform(0.15, 0.9));
  }
  plane_mat.checker_cell = brng.uniform(0.05, 0.15);
  Pose plane_pose;
  plane_pose.translation = {0.0, 0.0, z_bg};

  std::vector<SceneObject> scene = base;
  scene.insert(scene.end(), best_occluders.begin(), best_occluders.end());
  scene.push_back({&plane_mesh, plane_pose, plane_mat});

  RasterConfig rcfg;
  rcfg.rgb_res = cfg.rgb_res;
  rcfg.map_res = cfg.map_res;
  rcfg.sra_k = cfg.sra_k;
  rcfg.sra_centers = &part.centers;
  sample.maps = rasterize(scene, 0, k256, rcfg);

  // final visible fraction from the actual render (plane never occludes)
  if (full_pixels > 0) {
    int vis = 0;
    for (uint8_t m : sample.maps.mask) vis += m;
    sample.visible_fraction = double(vis) / double(full_pixels);
  } else {
    sample.visible_fraction = 0.0;
    sample.occlusion_warning = true;
  }
  return sample;
}

}  // namespace m6d::synth
