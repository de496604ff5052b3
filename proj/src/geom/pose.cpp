#include "m6d/geom/pose.hpp"

#include <cmath>

#include "m6d/errors.hpp"

namespace m6d::geom {

Mat3 mat3_identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[i * 3 + k] * b[k * 3 + j];
      c[i * 3 + j] = s;
    }
  return c;
}

Mat3 mat3_transpose(const Mat3& m) {
  return {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]};
}

double mat3_det(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

bool Pose::valid(double tol) const {
  const Mat3 rtr = mat3_mul(mat3_transpose(rotation), rotation);
  const Mat3 id = mat3_identity();
  for (int i = 0; i < 9; ++i)
    if (std::abs(rtr[i] - id[i]) > tol) return false;
  if (std::abs(mat3_det(rotation) - 1.0) > tol) return false;
  for (double v : translation)
    if (!std::isfinite(v)) return false;
  return true;
}

Pose compose(const Pose& a, const Pose& b) {
  Pose c;
  c.rotation = mat3_mul(a.rotation, b.rotation);
  const Vec3 rt = mat3_apply(a.rotation, b.translation);
  c.translation = {rt[0] + a.translation[0], rt[1] + a.translation[1], rt[2] + a.translation[2]};
  return c;
}

Pose invert(const Pose& p) {
  Pose q;
  q.rotation = mat3_transpose(p.rotation);
  const Vec3 rt = mat3_apply(q.rotation, p.translation);
  q.translation = {-rt[0], -rt[1], -rt[2]};
  return q;
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const Mat3 d = mat3_mul(mat3_transpose(a), b);
  double c = (d[0] + d[4] + d[8] - 1.0) * 0.5;
  c = c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
  return std::acos(c);
}

Vec2 project_one(const Vec3& p, const CameraIntrinsics& k) {
  if (p[2] <= 1e-9) throw NonPositiveDepth("projection requires z > 1e-9");
  return {k.fx * p[0] / p[2] + k.cx, k.fy * p[1] / p[2] + k.cy};
}

std::vector<Vec2> project(const std::vector<Vec3>& points, const CameraIntrinsics& k) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const Vec3& p : points) out.push_back(project_one(p, k));
  return out;
}

Mat3 rot6d_to_matrix(const std::array<double, 6>& r) {
  const Vec3 a1 = {r[0], r[1], r[2]};
  const Vec3 a2 = {r[3], r[4], r[5]};
  const double n1 = std::sqrt(a1[0] * a1[0] + a1[1] * a1[1] + a1[2] * a1[2]);
  if (n1 < 1e-8) throw DegenerateInput("rot6d: first column near zero");
  const Vec3 b1 = {a1[0] / n1, a1[1] / n1, a1[2] / n1};
  const double d = b1[0] * a2[0] + b1[1] * a2[1] + b1[2] * a2[2];
  const Vec3 u = {a2[0] - d * b1[0], a2[1] - d * b1[1], a2[2] - d * b1[2]};
  const double n2 = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  if (n2 < 1e-8) throw DegenerateInput("rot6d: columns near parallel");
  const Vec3 b2 = {u[0] / n2, u[1] / n2, u[2] / n2};
  const Vec3 b3 = {b1[1] * b2[2] - b1[2] * b2[1],
                   b1[2] * b2[0] - b1[0] * b2[2],
                   b1[0] * b2[1] - b1[1] * b2[0]};
  return {b1[0], b2[0], b3[0],
          b1[1], b2[1], b3[1],
          b1[2], b2[2], b3[2]};
}

std::array<double, 6> matrix_to_rot6d(const Mat3& m) {
  return {m[0], m[3], m[6], m[1], m[4], m[7]};
}

CameraIntrinsics crop_intrinsics(const CameraIntrinsics& k, const CropDesc& crop, int res) {
  const double r = double(res) / crop.side;
  CameraIntrinsics ck;
  ck.fx = k.fx * r;
  ck.fy = k.fy * r;
  ck.cx = (k.cx - (crop.cx - crop.side * 0.5)) * r;
  ck.cy = (k.cy - (crop.cy - crop.side * 0.5)) * r;
  ck.width = res;
  ck.height = res;
  return ck;
}

Vec3 site_encode(const Vec3& t, const CropDesc& crop, const CameraIntrinsics& k) {
  if (t[2] <= 0.0) throw NonPositiveDepth("site_encode: t_z must be positive");
  if (crop.side <= 0.0) throw DegenerateInput("site_encode: crop side must be positive");
  const double ox = k.fx * t[0] / t[2] + k.cx;
  const double oy = k.fy * t[1] / t[2] + k.cy;
  const double r = double(crop.out_size) / crop.side;
  return {(ox - crop.cx) / crop.side, (oy - crop.cy) / crop.side, t[2] * r};
}

Vec3 site_decode(const Vec3& gamma, const CropDesc& crop, const CameraIntrinsics& k) {
  if (gamma[2] <= 0.0) throw NonPositiveDepth("site_decode: gamma_z must be positive");
  if (crop.side <= 0.0) throw DegenerateInput("site_decode: crop side must be positive");
  const double r = double(crop.out_size) / crop.side;
  const double ox = crop.cx + gamma[0] * crop.side;
  const double oy = crop.cy + gamma[1] * crop.side;
  const double tz = gamma[2] / r;
  return {(ox - k.cx) * tz / k.fx, (oy - k.cy) * tz / k.fy, tz};
}

}  // namespace m6d::geom
