#pragma once

#include <array>
#include <vector>

namespace m6d::geom {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<double, 9>;  // row-major

inline Vec3 mat3_apply(const Mat3& m, const Vec3& v) {
  return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
          m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
          m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

Mat3 mat3_mul(const Mat3& a, const Mat3& b);
Mat3 mat3_transpose(const Mat3& m);
double mat3_det(const Mat3& m);
Mat3 mat3_identity();

// Rigid transform of an object in camera frame: x_cam = rotation * x + translation.
struct Pose {
  Mat3 rotation = mat3_identity();
  Vec3 translation = {0.0, 0.0, 0.0};

  Vec3 apply(const Vec3& x) const {
    Vec3 r = mat3_apply(rotation, x);
    return {r[0] + translation[0], r[1] + translation[1], r[2] + translation[2]};
  }
  // Orthonormality and det(R)=1, both within tol.
  bool valid(double tol = 1e-9) const;
};

Pose compose(const Pose& a, const Pose& b);  // applies b first, then a
Pose invert(const Pose& p);

// Geodesic angle between two rotations, radians.
double rotation_angle_between(const Mat3& a, const Mat3& b);

struct CameraIntrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;

  bool valid() const {
    return fx > 0 && fy > 0 && width > 0 && height > 0 &&
           cx >= 0 && cx < width && cy >= 0 && cy < height;
  }
};

// Pinhole projection of camera-frame points to continuous pixel coordinates.
// Throws NonPositiveDepth if any z <= 1e-9.
std::vector<Vec2> project(const std::vector<Vec3>& points, const CameraIntrinsics& k);
Vec2 project_one(const Vec3& p, const CameraIntrinsics& k);

// Gram-Schmidt decode of the 6d rotation parameterization (first two matrix
// columns). Throws DegenerateInput on near-zero or near-parallel inputs.
Mat3 rot6d_to_matrix(const std::array<double, 6>& r);
std::array<double, 6> matrix_to_rot6d(const Mat3& m);

// Square crop of the full image: center/side in full-image pixels, resampled
// to an output square of out_size pixels.
struct CropDesc {
  double cx = 0, cy = 0;  // crop center, full-image pixels
  double side = 0;        // square side, full-image pixels
  int out_size = 256;     // output resolution the zoom ratio refers to
};

// Scale-invariant translation encoding: gamma = (offset of the projected
// centroid within the crop, depth * zoom ratio).
Vec3 site_encode(const Vec3& t, const CropDesc& crop, const CameraIntrinsics& k);
Vec3 site_decode(const Vec3& gamma, const CropDesc& crop, const CameraIntrinsics& k);

// Intrinsics of the virtual camera that images exactly the crop square at
// res x res pixels. Used by the rasterizer and by map-to-image coordinate
// transforms.
CameraIntrinsics crop_intrinsics(const CameraIntrinsics& k, const CropDesc& crop, int res);

}  // namespace m6d::geom
