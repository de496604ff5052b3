#include "m6d/synth/sra.hpp"

#include <cmath>

#include "m6d/errors.hpp"

namespace m6d::synth {

namespace {
inline double dist2(const geom::Vec3& a, const geom::Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}
}  // namespace

SraPartition sra_labels(const geom::TriMesh& mesh, int k) {
  const auto& v = mesh.vertices;
  const int n = int(v.size());
  if (k < 1 || k > n) throw TooFewVertices("sra_labels: need 1 <= k <= vertex count");

  geom::Vec3 centroid{0, 0, 0};
  for (const auto& p : v)
    for (int a = 0; a < 3; ++a) centroid[a] += p[a];
  for (int a = 0; a < 3; ++a) centroid[a] /= double(n);

  // Seed: minimal index among vertices at maximal centroid distance.
  int seed = 0;
  double best = dist2(v[0], centroid);
  for (int i = 1; i < n; ++i) {
    const double d = dist2(v[i], centroid);
    if (d > best) {
      best = d;
      seed = i;
    }
  }

  SraPartition part;
  std::vector<int> center_idx = {seed};
  std::vector<double> nearest(n);
  for (int i = 0; i < n; ++i) nearest[i] = dist2(v[i], v[seed]);
  while (int(center_idx.size()) < k) {
    int pick = 0;
    double far2 = -1.0;
    for (int i = 0; i < n; ++i)
      if (nearest[i] > far2) {
        far2 = nearest[i];
        pick = i;
      }
    center_idx.push_back(pick);
    for (int i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], dist2(v[i], v[pick]));
  }

  part.centers.reserve(k);
  for (int idx : center_idx) part.centers.push_back(v[idx]);
  part.labels.resize(n);
  for (int i = 0; i < n; ++i) part.labels[i] = sra_label_of_point(v[i], part.centers);
  return part;
}

int sra_label_of_point(const geom::Vec3& p, const std::vector<geom::Vec3>& centers) {
  int best = 0;
  double d = dist2(p, centers[0]);
  for (int c = 1; c < int(centers.size()); ++c) {
    const double dc = dist2(p, centers[c]);
    if (dc < d) {
      d = dc;
      best = c;
    }
  }
  return best + 1;
}

}  // namespace m6d::synth
