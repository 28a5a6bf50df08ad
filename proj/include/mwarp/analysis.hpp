#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mwarp/parallel.hpp"
#include "mwarp/trajectory.hpp"

namespace mwarp {

enum class Metric { dh, ds, dx };

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric) noexcept;

struct DistanceMatrix {
  Eigen::MatrixXd values;
  Metric metric = Metric::ds;
  std::vector<std::string> ids;
};

/// Pairwise distances; each unordered pair is computed once and mirrored.
/// The reference point is ignored for dx.
DistanceMatrix distance_matrix(std::span<const Trajectory> trajectories, Metric metric,
                               const Point& reference, Execution exec = Execution::parallel,
                               std::vector<std::string> ids = {});

struct Classification {
  std::vector<std::string> predictions;
  double rate = 0.0;
};

/// Leave-one-out k-nearest-neighbour vote. Vote ties go to the tied label
/// that occurs nearest to the query.
Classification knn_classify(const DistanceMatrix& dm, std::span<const std::string> labels, int k);

struct Merge {
  std::size_t left;   // cluster ids: leaves 0..n-1, merge s creates id n+s
  std::size_t right;
  double height;
  std::size_t size;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;
};

/// Average-linkage (UPGMA) agglomerative clustering.
Dendrogram hierarchical_cluster(const DistanceMatrix& dm);

/// Flat cluster labels 0..k-1 after undoing the last k-1 merges; clusters are
/// numbered by their smallest leaf index.
std::vector<int> cut_clusters(const Dendrogram& dendrogram, std::size_t clusters);

/// Classical (Torgerson) MDS. Each output column is oriented so that its
/// largest-magnitude entry is positive.
Eigen::MatrixXd mds(const Eigen::MatrixXd& distances, int dim = 2);

}  // namespace mwarp
