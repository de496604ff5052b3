#include "m6d/pnp/pnp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "m6d/errors.hpp"
#include "m6d/rng.hpp"
#include "m6d/synth/nocs.hpp"

namespace m6d::pnp {

using geom::Mat3;
using geom::Pose;
using geom::Vec2;
using geom::Vec3;

namespace {

Eigen::Matrix3d to_eigen(const Mat3& m) {
  Eigen::Matrix3d e;
  e << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
  return e;
}

Mat3 from_eigen(const Eigen::Matrix3d& e) {
  return {e(0, 0), e(0, 1), e(0, 2), e(1, 0), e(1, 1), e(1, 2), e(2, 0), e(2, 1), e(2, 2)};
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& w) {
  const double th = w.norm();
  if (th < 1e-12) return Eigen::Matrix3d::Identity();
  const Eigen::Vector3d a = w / th;
  Eigen::Matrix3d ax;
  ax << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(th) * ax + (1 - std::cos(th)) * ax * ax;
}

int count_positive_depth(const Pose& p, const std::vector<Correspondence2D3D>& corrs) {
  int n = 0;
  for (const auto& c : corrs)
    if (p.apply(c.model_point)[2] > 1e-9) ++n;
  return n;
}

// Mean-squared weighted reprojection error; +inf when a depth goes nonpositive.
double mse(const Pose& p, const std::vector<Correspondence2D3D>& corrs,
           const geom::CameraIntrinsics& k) {
  double total = 0.0, wsum = 0.0;
  for (const auto& c : corrs) {
    const Vec3 q = p.apply(c.model_point);
    if (q[2] <= 1e-9) return std::numeric_limits<double>::infinity();
    const double u = k.fx * q[0] / q[2] + k.cx;
    const double v = k.fy * q[1] / q[2] + k.cy;
    const double du = u - c.pixel[0], dv = v - c.pixel[1];
    total += c.weight * (du * du + dv * dv);
    wsum += c.weight;
  }
  return wsum > 0 ? total / wsum : 0.0;
}

// Image-plane spread test: collinear pixel sets cannot constrain a camera.
void check_pixel_spread(const std::vector<Correspondence2D3D>& corrs) {
  double mu = 0, mv = 0;
  for (const auto& c : corrs) {
    mu += c.pixel[0];
    mv += c.pixel[1];
  }
  mu /= double(corrs.size());
  mv /= double(corrs.size());
  double a = 0, b = 0, d = 0;
  for (const auto& c : corrs) {
    const double du = c.pixel[0] - mu, dv = c.pixel[1] - mv;
    a += du * du;
    b += du * dv;
    d += dv * dv;
  }
  const double tr = a + d;
  const double det = a * d - b * b;
  const double disc = std::sqrt(std::max(0.0, tr * tr * 0.25 - det));
  const double lmin = tr * 0.5 - disc;
  const double lmax = tr * 0.5 + disc;
  if (lmax <= 0.0 || lmin < 1e-8 * lmax)
    throw DegenerateConfiguration("pnp: image points are (near-)collinear");
}

Pose planar_pnp(const std::vector<Correspondence2D3D>& corrs, const geom::CameraIntrinsics& k,
                const Eigen::Vector3d& centroid, const Eigen::Matrix3d& frame) {
  // plane coordinates of the model points in the PCA frame (e3 = normal)
  const size_t n = corrs.size();
  std::vector<Eigen::Vector2d> plane(n);
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d x(corrs[i].model_point[0], corrs[i].model_point[1],
                            corrs[i].model_point[2]);
    const Eigen::Vector3d w = frame * (x - centroid);
    plane[i] = {w.x(), w.y()};
  }

  // normalized homography DLT, plane -> normalized camera ray coordinates
  Eigen::Vector2d mc = Eigen::Vector2d::Zero(), mp = Eigen::Vector2d::Zero();
  for (size_t i = 0; i < n; ++i) {
    mc += plane[i];
    mp += Eigen::Vector2d((corrs[i].pixel[0] - k.cx) / k.fx, (corrs[i].pixel[1] - k.cy) / k.fy);
  }
  mc /= double(n);
  mp /= double(n);
  double sc = 0, sp = 0;
  for (size_t i = 0; i < n; ++i) {
    sc += (plane[i] - mc).norm();
    sp += (Eigen::Vector2d((corrs[i].pixel[0] - k.cx) / k.fx,
                           (corrs[i].pixel[1] - k.cy) / k.fy) -
           mp)
              .norm();
  }
  sc = sc > 1e-12 * double(n) ? std::sqrt(2.0) * double(n) / sc : 1.0;
  sp = sp > 1e-12 * double(n) ? std::sqrt(2.0) * double(n) / sp : 1.0;

  Eigen::Matrix<double, 9, 9> ata = Eigen::Matrix<double, 9, 9>::Zero();
  for (size_t i = 0; i < n; ++i) {
    const double wx = (plane[i].x() - mc.x()) * sc;
    const double wy = (plane[i].y() - mc.y()) * sc;
    const double u = ((corrs[i].pixel[0] - k.cx) / k.fx - mp.x()) * sp;
    const double v = ((corrs[i].pixel[1] - k.cy) / k.fy - mp.y()) * sp;
    Eigen::Matrix<double, 9, 1> r1, r2;
    r1 << wx, wy, 1, 0, 0, 0, -u * wx, -u * wy, -u;
    r2 << 0, 0, 0, wx, wy, 1, -v * wx, -v * wy, -v;
    ata += r1 * r1.transpose() + r2 * r2.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> eig(ata);
  const Eigen::Matrix<double, 9, 1> h = eig.eigenvectors().col(0);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);

  // undo normalizations: ray = Tp^-1 * Hn * Tc
  Eigen::Matrix3d tp = Eigen::Matrix3d::Identity(), tc = Eigen::Matrix3d::Identity();
  tc(0, 0) = sc;
  tc(1, 1) = sc;
  tc(0, 2) = -sc * mc.x();
  tc(1, 2) = -sc * mc.y();
  tp(0, 0) = sp;
  tp(1, 1) = sp;
  tp(0, 2) = -sp * mp.x();
  tp(1, 2) = -sp * mp.y();
  Eigen::Matrix3d hmat = tp.inverse() * hn * tc;

  const double lambda = 2.0 / (hmat.col(0).norm() + hmat.col(1).norm());
  hmat *= lambda;
  Eigen::Matrix<double, 3, 2> r12 = hmat.leftCols<2>();
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(r12, Eigen::ComputeFullU | Eigen::ComputeFullV);
  r12 = svd.matrixU().leftCols<2>() * svd.matrixV().transpose();
  Eigen::Matrix3d rp;
  rp.col(0) = r12.col(0);
  rp.col(1) = r12.col(1);
  rp.col(2) = r12.col(0).cross(r12.col(1));
  Eigen::Vector3d tpv = hmat.col(2);

  Pose pose;
  const Eigen::Matrix3d r = rp * frame;
  const Eigen::Vector3d t = tpv - r * centroid;
  pose.rotation = from_eigen(r);
  pose.translation = {t.x(), t.y(), t.z()};
  if (count_positive_depth(pose, corrs) * 2 < int(n)) {
    // flip the sign choice of the homography scale
    rp.col(0) = -rp.col(0);
    rp.col(1) = -rp.col(1);
    rp.col(2) = rp.col(0).cross(rp.col(1));
    tpv = -tpv;
    const Eigen::Matrix3d r2 = rp * frame;
    const Eigen::Vector3d t2 = tpv - r2 * centroid;
    pose.rotation = from_eigen(r2);
    pose.translation = {t2.x(), t2.y(), t2.z()};
  }
  return pose;
}

}  // namespace

std::vector<Correspondence2D3D> correspondences_from_maps(
    const std::vector<float>& cor, const std::vector<float>& mask, int map_res,
    const geom::TriMesh& mesh, const geom::CropDesc& crop, double mask_threshold) {
  if (int(mask.size()) != map_res * map_res || cor.size() != mask.size() * 3)
    throw ShapeMismatch("correspondences_from_maps: map sizes disagree");
  const geom::Aabb box = geom::mesh_aabb(mesh);
  const double step = crop.side / double(map_res);
  const double x0 = crop.cx - crop.side * 0.5;
  const double y0 = crop.cy - crop.side * 0.5;
  std::vector<Correspondence2D3D> out;
  for (int i = 0; i < map_res; ++i)
    for (int j = 0; j < map_res; ++j) {
      const size_t idx = size_t(i) * map_res + j;
      if (double(mask[idx]) <= mask_threshold) continue;
      Correspondence2D3D c;
      c.pixel = {x0 + (j + 0.5) * step, y0 + (i + 0.5) * step};
      c.model_point = synth::nocs_decode(
          Vec3{double(cor[idx * 3]), double(cor[idx * 3 + 1]), double(cor[idx * 3 + 2])}, box);
      c.weight = std::clamp(double(mask[idx]), 0.0, 1.0);
      out.push_back(c);
    }
  return out;
}

geom::Pose pnp_minimal(const std::vector<Correspondence2D3D>& corrs,
                       const geom::CameraIntrinsics& k) {
  const size_t n = corrs.size();
  if (n < 6) throw TooFewPoints("pnp_minimal: need >= 6 correspondences");
  check_pixel_spread(corrs);

  // model point statistics: centroid, PCA frame, planarity
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& c : corrs)
    centroid += Eigen::Vector3d(c.model_point[0], c.model_point[1], c.model_point[2]);
  centroid /= double(n);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& c : corrs) {
    const Eigen::Vector3d d =
        Eigen::Vector3d(c.model_point[0], c.model_point[1], c.model_point[2]) - centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> pca(cov);
  const double ev_min = pca.eigenvalues()(0);
  const double ev_max = pca.eigenvalues()(2);
  if (ev_max <= 0.0)
    throw DegenerateConfiguration("pnp: model points coincide");

  if (ev_min < 1e-8 * ev_max) {
    // coplanar model points: homography route
    Eigen::Matrix3d frame;
    frame.row(0) = pca.eigenvectors().col(2).transpose();
    frame.row(1) = pca.eigenvectors().col(1).transpose();
    frame.row(2) = pca.eigenvectors().col(0).transpose();
    if (frame.determinant() < 0) frame.row(2) = -frame.row(2);
    return planar_pnp(corrs, k, centroid, frame);
  }

  // Hartley-normalized DLT on ray coordinates
  Eigen::Vector2d mp = Eigen::Vector2d::Zero();
  for (const auto& c : corrs)
    mp += Eigen::Vector2d((c.pixel[0] - k.cx) / k.fx, (c.pixel[1] - k.cy) / k.fy);
  mp /= double(n);
  double sp = 0, s3 = 0;
  for (const auto& c : corrs) {
    sp += (Eigen::Vector2d((c.pixel[0] - k.cx) / k.fx, (c.pixel[1] - k.cy) / k.fy) - mp).norm();
    s3 += (Eigen::Vector3d(c.model_point[0], c.model_point[1], c.model_point[2]) - centroid)
              .norm();
  }
  sp = std::sqrt(2.0) * double(n) / sp;
  s3 = std::sqrt(3.0) * double(n) / s3;

  Eigen::Matrix<double, 12, 12> ata = Eigen::Matrix<double, 12, 12>::Zero();
  for (const auto& c : corrs) {
    const Eigen::Vector3d xs =
        (Eigen::Vector3d(c.model_point[0], c.model_point[1], c.model_point[2]) - centroid) * s3;
    const double u = ((c.pixel[0] - k.cx) / k.fx - mp.x()) * sp;
    const double v = ((c.pixel[1] - k.cy) / k.fy - mp.y()) * sp;
    Eigen::Matrix<double, 12, 1> r1, r2;
    r1 << xs.x(), xs.y(), xs.z(), 1, 0, 0, 0, 0, -u * xs.x(), -u * xs.y(), -u * xs.z(), -u;
    r2 << 0, 0, 0, 0, xs.x(), xs.y(), xs.z(), 1, -v * xs.x(), -v * xs.y(), -v * xs.z(), -v;
    const double w = std::max(c.weight, 1e-3);
    ata += w * (r1 * r1.transpose() + r2 * r2.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 12, 12>> eig(ata);
  if (eig.eigenvalues()(1) < 1e-12 * std::max(eig.eigenvalues()(11), 1e-300))
    throw DegenerateConfiguration("pnp: DLT system is rank deficient");
  const Eigen::Matrix<double, 12, 1> p = eig.eigenvectors().col(0);

  Eigen::Matrix<double, 3, 4> pn;
  pn << p(0), p(1), p(2), p(3), p(4), p(5), p(6), p(7), p(8), p(9), p(10), p(11);
  // undo normalizations: rays = Tp^-1 * Pn * [s3*(X - centroid); 1]
  Eigen::Matrix3d tp = Eigen::Matrix3d::Identity();
  tp(0, 0) = sp;
  tp(1, 1) = sp;
  tp(0, 2) = -sp * mp.x();
  tp(1, 2) = -sp * mp.y();
  Eigen::Matrix4d tu = Eigen::Matrix4d::Identity() * s3;
  tu(3, 3) = 1.0;
  tu.block<3, 1>(0, 3) = -s3 * centroid;
  Eigen::Matrix<double, 3, 4> pm = tp.inverse() * pn * tu;

  Pose best;
  int best_depth = -1;
  for (int sign = 0; sign < 2; ++sign) {
    const Eigen::Matrix<double, 3, 4> ps = sign ? (-pm).eval() : pm;
    const Eigen::Matrix3d m = ps.leftCols<3>();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double scale = svd.singularValues().mean();
    if (scale < 1e-14) throw DegenerateConfiguration("pnp: zero-scale projection");
    Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0) continue;  // mirrored; the other sign handles it
    Pose cand;
    cand.rotation = from_eigen(r);
    const Eigen::Vector3d t = ps.col(3) / scale;
    cand.translation = {t.x(), t.y(), t.z()};
    const int depth = count_positive_depth(cand, corrs);
    if (depth > best_depth) {
      best_depth = depth;
      best = cand;
    }
  }
  if (best_depth < 0) throw DegenerateConfiguration("pnp: no orientation-consistent solution");
  return best;
}

geom::Pose refine_pose(const geom::Pose& init, const std::vector<Correspondence2D3D>& corrs,
                       const geom::CameraIntrinsics& k, int iters) {
  if (corrs.empty()) throw TooFewPoints("refine_pose: empty correspondence list");
  Eigen::Matrix3d r = to_eigen(init.rotation);
  Eigen::Vector3d t(init.translation[0], init.translation[1], init.translation[2]);
  Pose best = init;
  double best_err = mse(best, corrs, k);

  for (int it = 0; it < iters; ++it) {
    Eigen::Matrix<double, 6, 6> h = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
    for (const auto& c : corrs) {
      const Eigen::Vector3d x(c.model_point[0], c.model_point[1], c.model_point[2]);
      const Eigen::Vector3d q = r * x + t;
      if (q.z() <= 1e-9) continue;  // handled by the line search below
      const double iz = 1.0 / q.z();
      Eigen::Matrix<double, 2, 3> dpi;
      dpi << k.fx * iz, 0, -k.fx * q.x() * iz * iz, 0, k.fy * iz, -k.fy * q.y() * iz * iz;
      Eigen::Matrix<double, 2, 6> jac;
      Eigen::Matrix3d qx;
      qx << 0, -q.z(), q.y(), q.z(), 0, -q.x(), -q.y(), q.x(), 0;
      jac.leftCols<3>() = dpi * (-qx);  // d(exp(w)q)/dw at w=0 is -[q]x
      jac.rightCols<3>() = dpi;
      const Eigen::Vector2d res(k.fx * q.x() * iz + k.cx - c.pixel[0],
                                k.fy * q.y() * iz + k.cy - c.pixel[1]);
      h += c.weight * jac.transpose() * jac;
      g += c.weight * jac.transpose() * res;
    }
    Eigen::Matrix<double, 6, 1> delta = h.ldlt().solve(-g);
    if (!delta.allFinite()) break;
    if (delta.norm() < 1e-10) break;

    // halving line search; never accept an increase
    bool improved = false;
    for (int half = 0; half < 12; ++half) {
      const Eigen::Matrix3d r_new = rodrigues(delta.head<3>()) * r;
      const Eigen::Vector3d t_new = t + delta.tail<3>();
      Pose cand;
      cand.rotation = from_eigen(nearest_rotation(r_new));
      cand.translation = {t_new.x(), t_new.y(), t_new.z()};
      const double err = mse(cand, corrs, k);
      if (err <= best_err) {
        best = cand;
        best_err = err;
        r = to_eigen(cand.rotation);
        t = t_new;
        improved = true;
        break;
      }
      delta *= 0.5;
    }
    if (!improved) break;
  }
  return best;
}

double reprojection_rms(const geom::Pose& pose, const std::vector<Correspondence2D3D>& corrs,
                        const geom::CameraIntrinsics& k) {
  const double v = mse(pose, corrs, k);
  return std::isfinite(v) ? std::sqrt(v) : v;
}

RansacResult pnp_ransac(const std::vector<Correspondence2D3D>& corrs,
                        const geom::CameraIntrinsics& k, double inlier_px, int max_iters,
                        uint64_t seed) {
  if (corrs.size() < 6) throw TooFewPoints("pnp_ransac: need >= 6 correspondences");

  // subsample cap keeps per-solve cost bounded (deterministic per seed)
  std::vector<int> index(corrs.size());
  for (size_t i = 0; i < corrs.size(); ++i) index[i] = int(i);
  constexpr size_t kCap = 2000;
  Rng rng(derive_seed(seed, 0xC0FFEE));
  std::vector<int> active = index;
  if (corrs.size() > kCap) {
    active.resize(kCap);
    const auto pick = rng.sample_without_replacement(int(corrs.size()), int(kCap));
    for (size_t i = 0; i < kCap; ++i) active[i] = pick[i];
  }
  std::vector<Correspondence2D3D> pool(active.size());
  for (size_t i = 0; i < active.size(); ++i) pool[i] = corrs[active[i]];

  const double thr2 = inlier_px * inlier_px;
  auto count_inliers = [&](const Pose& p, std::vector<uint8_t>* mask) {
    int count = 0;
    if (mask) mask->assign(corrs.size(), 0);
    for (size_t i = 0; i < corrs.size(); ++i) {
      const Vec3 q = p.apply(corrs[i].model_point);
      if (q[2] <= 1e-9) continue;
      const double du = k.fx * q[0] / q[2] + k.cx - corrs[i].pixel[0];
      const double dv = k.fy * q[1] / q[2] + k.cy - corrs[i].pixel[1];
      if (du * du + dv * dv < thr2) {
        ++count;
        if (mask) (*mask)[i] = 1;
      }
    }
    return count;
  };

  Pose best_pose;
  int best_count = -1;
  int best_iter = -1;
  for (int it = 0; it < max_iters; ++it) {
    const auto pick = rng.sample_without_replacement(int(pool.size()), 6);
    std::vector<Correspondence2D3D> minimal(6);
    for (int i = 0; i < 6; ++i) minimal[i] = pool[pick[i]];
    Pose cand;
    try {
      cand = pnp_minimal(minimal, k);
    } catch (const DegenerateConfiguration&) {
      continue;
    }
    const int count = count_inliers(cand, nullptr);
    if (count > best_count) {
      best_count = count;
      best_pose = cand;
      best_iter = it;
    }
    if (best_count > int(0.9 * double(corrs.size()))) break;
  }
  if (best_count < 6) throw NoConsensus("pnp_ransac: consensus below 6 inliers");

  // final solve + refine on the consensus set
  std::vector<uint8_t> mask;
  count_inliers(best_pose, &mask);
  std::vector<Correspondence2D3D> inlier_set;
  for (size_t i = 0; i < corrs.size(); ++i)
    if (mask[i]) inlier_set.push_back(corrs[i]);
  Pose final_pose = best_pose;
  try {
    if (inlier_set.size() >= 6) final_pose = pnp_minimal(inlier_set, k);
  } catch (const DegenerateConfiguration&) {
    final_pose = best_pose;
  }
  if (mse(final_pose, inlier_set, k) > mse(best_pose, inlier_set, k)) final_pose = best_pose;
  final_pose = refine_pose(final_pose, inlier_set, k);

  RansacResult result;
  result.pose = final_pose;
  result.inlier_count = count_inliers(final_pose, &result.inliers);
  result.iterations_used = best_iter + 1;
  result.pose.rotation = from_eigen(nearest_rotation(to_eigen(final_pose.rotation)));
  return result;
}

}  // namespace m6d::pnp
