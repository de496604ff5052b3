#include "m6d/synth/raster.hpp"

#include <algorithm>
#include <cmath>

#include "m6d/errors.hpp"
#include "m6d/synth/nocs.hpp"

namespace m6d::synth {

using geom::Vec3;

namespace {

inline double edge_fn(double ax, double ay, double bx, double by, double px, double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

}  // namespace

RasterPass render_pass(const std::vector<SceneObject>& objects,
                       const geom::CameraIntrinsics& k, int res) {
  RasterPass pass;
  pass.res = res;
  const size_t npix = size_t(res) * res;
  pass.depth.assign(npix, 0.0f);
  pass.obj.assign(npix, -1);
  pass.tri.assign(npix, -1);
  pass.point.assign(npix * 3, 0.0);
  pass.normal_offset.resize(objects.size() + 1, 0);

  // camera-frame vertices + projections per object
  std::vector<std::vector<Vec3>> cam(objects.size());
  std::vector<std::vector<geom::Vec2>> pix(objects.size());
  size_t total_tris = 0;
  for (size_t o = 0; o < objects.size(); ++o) {
    const auto& obj = objects[o];
    cam[o].reserve(obj.mesh->vertices.size());
    for (const Vec3& v : obj.mesh->vertices) {
      const Vec3 c = obj.pose.apply(v);
      if (c[2] <= 1e-9) throw NonPositiveDepth("rasterize: vertex behind camera");
      cam[o].push_back(c);
    }
    pix[o] = geom::project(cam[o], k);
    pass.normal_offset[o] = int(total_tris);
    total_tris += obj.mesh->triangles.size();
  }
  pass.normal_offset[objects.size()] = int(total_tris);
  pass.normals.assign(total_tris * 3, 0.0);

  for (size_t o = 0; o < objects.size(); ++o) {
    const auto& mesh = *objects[o].mesh;
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      const Vec3& c0 = cam[o][tri[0]];
      const Vec3& c1 = cam[o][tri[1]];
      const Vec3& c2 = cam[o][tri[2]];

      // camera-frame face normal, oriented toward the camera
      Vec3 e1 = {c1[0] - c0[0], c1[1] - c0[1], c1[2] - c0[2]};
      Vec3 e2 = {c2[0] - c0[0], c2[1] - c0[1], c2[2] - c0[2]};
      Vec3 nrm = {e1[1] * e2[2] - e1[2] * e2[1],
                  e1[2] * e2[0] - e1[0] * e2[2],
                  e1[0] * e2[1] - e1[1] * e2[0]};
      const double nl = std::sqrt(nrm[0] * nrm[0] + nrm[1] * nrm[1] + nrm[2] * nrm[2]);
      if (nl > 0) {
        for (double& x : nrm) x /= nl;
        if (nrm[2] > 0) for (double& x : nrm) x = -x;
      }
      const size_t nidx = size_t(pass.normal_offset[o] + int(t)) * 3;
      pass.normals[nidx] = nrm[0];
      pass.normals[nidx + 1] = nrm[1];
      pass.normals[nidx + 2] = nrm[2];

      const geom::Vec2& p0 = pix[o][tri[0]];
      const geom::Vec2& p1 = pix[o][tri[1]];
      const geom::Vec2& p2 = pix[o][tri[2]];
      const double area = edge_fn(p0[0], p0[1], p1[0], p1[1], p2[0], p2[1]);
      if (std::abs(area) < 1e-12) continue;

      const int x0 = std::max(0, int(std::floor(std::min({p0[0], p1[0], p2[0]}) - 0.5)));
      const int x1 = std::min(res - 1, int(std::ceil(std::max({p0[0], p1[0], p2[0]}))));
      const int y0 = std::max(0, int(std::floor(std::min({p0[1], p1[1], p2[1]}) - 0.5)));
      const int y1 = std::min(res - 1, int(std::ceil(std::max({p0[1], p1[1], p2[1]}))));
      if (x0 > x1 || y0 > y1) continue;

      const Vec3& m0 = mesh.vertices[tri[0]];
      const Vec3& m1 = mesh.vertices[tri[1]];
      const Vec3& m2 = mesh.vertices[tri[2]];
      const double iz0 = 1.0 / c0[2], iz1 = 1.0 / c1[2], iz2 = 1.0 / c2[2];

      for (int y = y0; y <= y1; ++y) {
        const double py = y + 0.5;
        for (int x = x0; x <= x1; ++x) {
          const double px = x + 0.5;
          double w0 = edge_fn(p1[0], p1[1], p2[0], p2[1], px, py);
          double w1 = edge_fn(p2[0], p2[1], p0[0], p0[1], px, py);
          double w2 = edge_fn(p0[0], p0[1], p1[0], p1[1], px, py);
          if (area < 0) { w0 = -w0; w1 = -w1; w2 = -w2; }
          if (w0 < 0 || w1 < 0 || w2 < 0) continue;
          const double ws = w0 + w1 + w2;
          if (ws <= 0) continue;
          const double b0 = w0 / ws, b1 = w1 / ws, b2 = w2 / ws;
          const double inv_z = b0 * iz0 + b1 * iz1 + b2 * iz2;
          const double z = 1.0 / inv_z;
          const size_t idx = size_t(y) * res + x;
          if (pass.depth[idx] != 0.0f && z >= double(pass.depth[idx])) continue;
          pass.depth[idx] = float(z);
          pass.obj[idx] = int32_t(o);
          pass.tri[idx] = int32_t(t);
          // perspective-correct model-frame point
          for (int a = 0; a < 3; ++a)
            pass.point[idx * 3 + a] =
                z * (b0 * m0[a] * iz0 + b1 * m1[a] * iz1 + b2 * m2[a] * iz2);
        }
      }
    }
  }
  return pass;
}

ModalityMaps rasterize(const std::vector<SceneObject>& objects, int target_index,
                       const geom::CameraIntrinsics& k, const RasterConfig& cfg) {
  if (target_index < 0 || target_index >= int(objects.size()))
    throw DegenerateInput("rasterize: target index out of range");

  ModalityMaps maps;
  maps.rgb_res = cfg.rgb_res;
  maps.map_res = cfg.map_res;
  maps.rgb.assign(size_t(cfg.rgb_res) * cfg.rgb_res * 3, 0.0f);
  maps.cor.assign(size_t(cfg.map_res) * cfg.map_res * 3, 0.0f);
  maps.mask.assign(size_t(cfg.map_res) * cfg.map_res, 0);
  maps.sra.assign(size_t(cfg.map_res) * cfg.map_res, 0);
  maps.depth.assign(size_t(cfg.map_res) * cfg.map_res, 0.0f);

  // --- shaded RGB pass ---
  const RasterPass rp = render_pass(objects, k, cfg.rgb_res);
  for (size_t i = 0; i < rp.obj.size(); ++i) {
    const int o = rp.obj[i];
    if (o < 0) continue;
    const Material& mat = objects[o].material;
    const float* alb = mat.albedo.data();
    if (mat.checker_cell > 0.0) {
      const double u = std::floor(rp.point[i * 3] / mat.checker_cell);
      const double v = std::floor(rp.point[i * 3 + 1] / mat.checker_cell);
      if ((long(u) + long(v)) & 1) alb = mat.albedo2.data();
    }
    const size_t nidx = size_t(rp.normal_offset[o] + rp.tri[i]) * 3;
    const double diffuse = std::max(0.0, -rp.normals[nidx + 2]);
    const double intensity = std::min(1.0, 0.3 + 0.7 * diffuse);
    for (int c = 0; c < 3; ++c) {
      const double v = std::clamp(double(alb[c]) * intensity, 0.0, 1.0);
      maps.rgb[i * 3 + c] = float(std::lround(v * 255.0)) / 255.0f;
    }
  }

  // --- geometric maps pass ---
  const double s = double(cfg.map_res) / double(cfg.rgb_res);
  geom::CameraIntrinsics km = k;
  km.fx *= s;
  km.fy *= s;
  km.cx *= s;
  km.cy *= s;
  km.width = km.height = cfg.map_res;
  const RasterPass mp = render_pass(objects, km, cfg.map_res);

  const geom::Aabb box = geom::mesh_aabb(*objects[target_index].mesh);
  SraPartition owned;
  const std::vector<Vec3>* centers = cfg.sra_centers;
  if (!centers) {
    owned = sra_labels(*objects[target_index].mesh,
                       std::min<int>(cfg.sra_k, int(objects[target_index].mesh->vertices.size())));
    centers = &owned.centers;
  }

  for (size_t i = 0; i < mp.obj.size(); ++i) {
    maps.depth[i] = mp.depth[i];
    if (mp.obj[i] != target_index) continue;
    maps.mask[i] = 1;
    const Vec3 mpnt = {mp.point[i * 3], mp.point[i * 3 + 1], mp.point[i * 3 + 2]};
    const Vec3 n = nocs_encode(mpnt, box);
    for (int a = 0; a < 3; ++a) maps.cor[i * 3 + a] = float(n[a]);
    maps.sra[i] = uint8_t(sra_label_of_point(mpnt, *centers));
  }
  return maps;
}

}  // namespace m6d::synth
