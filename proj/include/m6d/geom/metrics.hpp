#pragma once

#include <map>
#include <vector>

#include "m6d/geom/mesh.hpp"
#include "m6d/geom/pose.hpp"

namespace m6d::geom {

// Mean deviation of transformed model vertices between estimate and ground
// truth (ADD), and its closest-point variant for symmetric objects (ADD-S).
double add_metric(const Pose& est, const Pose& gt, const TriMesh& mesh);
double add_s_metric(const Pose& est, const Pose& gt, const TriMesh& mesh);

// Fraction of entries whose metric value is below threshold_fraction times
// their object diameter.
double add_recall(const std::vector<std::pair<double, double>>& value_and_diameter,
                  double threshold_fraction);

// Area under the accuracy-vs-threshold curve over [0, max_threshold],
// trapezoid rule on a uniform 1000-point grid, normalized to [0, 1].
double auc_of_add(const std::vector<double>& values, double max_threshold = 0.10);

struct MetricReport {
  std::map<double, double> recall_at;  // threshold fraction of diameter -> recall
  double auc_add = 0.0;
  double auc_add_s = 0.0;
};

}  // namespace m6d::geom
