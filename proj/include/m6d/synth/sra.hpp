#pragma once

#include <vector>

#include "m6d/geom/mesh.hpp"

namespace m6d::synth {

// Surface-region labels: k fragment centers picked by farthest-point sampling
// (seeded at the minimal-index vertex among those farthest from the centroid),
// every vertex labeled by its nearest center. Labels are 1-based; 0 is
// reserved for background in rendered maps. Fully deterministic.
struct SraPartition {
  std::vector<geom::Vec3> centers;  // size k
  std::vector<int> labels;          // per vertex, in {1..k}
};

SraPartition sra_labels(const geom::TriMesh& mesh, int k);

// Nearest fragment center of an arbitrary model-frame point (1-based id).
int sra_label_of_point(const geom::Vec3& p, const std::vector<geom::Vec3>& centers);

}  // namespace m6d::synth
