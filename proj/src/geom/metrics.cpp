#include "m6d/geom/metrics.hpp"

#include <cmath>

#include "m6d/errors.hpp"

namespace m6d::geom {

namespace {
inline double dist(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}
}  // namespace

double add_metric(const Pose& est, const Pose& gt, const TriMesh& mesh) {
  if (mesh.vertices.empty()) throw TooFewVertices("add_metric: empty mesh");
  double total = 0.0;
  for (const Vec3& x : mesh.vertices) total += dist(est.apply(x), gt.apply(x));
  return total / double(mesh.vertices.size());
}

double add_s_metric(const Pose& est, const Pose& gt, const TriMesh& mesh) {
  if (mesh.vertices.empty()) throw TooFewVertices("add_s_metric: empty mesh");
  std::vector<Vec3> gt_pts;
  gt_pts.reserve(mesh.vertices.size());
  for (const Vec3& y : mesh.vertices) gt_pts.push_back(gt.apply(y));
  double total = 0.0;
  for (const Vec3& x : mesh.vertices) {
    const Vec3 p = est.apply(x);
    double best = dist(p, gt_pts[0]);
    for (size_t j = 1; j < gt_pts.size(); ++j) {
      const double d = dist(p, gt_pts[j]);
      if (d < best) best = d;
    }
    total += best;
  }
  return total / double(mesh.vertices.size());
}

double add_recall(const std::vector<std::pair<double, double>>& value_and_diameter,
                  double threshold_fraction) {
  if (value_and_diameter.empty()) throw EmptyInput("add_recall: empty input");
  if (threshold_fraction <= 0.0) throw DegenerateInput("add_recall: threshold must be positive");
  size_t hits = 0;
  for (const auto& [value, diam] : value_and_diameter)
    if (value < threshold_fraction * diam) ++hits;
  return double(hits) / double(value_and_diameter.size());
}

double auc_of_add(const std::vector<double>& values, double max_threshold) {
  if (values.empty()) throw EmptyInput("auc_of_add: empty input");
  if (max_threshold <= 0.0) throw DegenerateInput("auc_of_add: max_threshold must be positive");
  constexpr int kGrid = 1000;
  double area = 0.0;
  double prev = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double tau = max_threshold * double(i) / double(kGrid - 1);
    size_t hits = 0;
    for (double v : values)
      if (v <= tau) ++hits;
    const double acc = double(hits) / double(values.size());
    if (i > 0) area += 0.5 * (acc + prev) * (max_threshold / double(kGrid - 1));
    prev = acc;
  }
  return area / max_threshold;
}

}  // namespace m6d::geom
