#include "mwarp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "mwarp/registration.hpp"
#include "mwarp/stats.hpp"

namespace mwarp {

Metric parse_metric(std::string_view name) {
  if (name == "dh") return Metric::dh;
  if (name == "ds") return Metric::ds;
  if (name == "dx") return Metric::dx;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::dh:
      return "dh";
    case Metric::ds:
      return "ds";
    case Metric::dx:
      return "dx";
  }
  return "?";
}

DistanceMatrix distance_matrix(std::span<const Trajectory> trajectories, Metric metric,
                               const Point& reference, Execution exec,
                               std::vector<std::string> ids) {
  const std::size_t n = trajectories.size();
  if (ids.empty()) {
    for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  }
  if (ids.size() != n) throw std::invalid_argument("distance_matrix: ids do not match trajectories");

  std::vector<std::optional<Tsrvf>> h(n);
  if (metric != Metric::dx) {
    for_each_index(n, exec, [&](std::size_t i) {
      h[i].emplace(compute_tsrvf(trajectories[i], reference));
    });
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> values(pairs.size());
  for_each_index(pairs.size(), exec, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    switch (metric) {
      case Metric::dh:
        values[p] = dh(*h[i], *h[j]);
        break;
      case Metric::ds:
        values[p] = ds(*h[i], *h[j]);
        break;
      case Metric::dx:
        values[p] = dx(trajectories[i], trajectories[j]);
        break;
    }
  });

  DistanceMatrix dm{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                    metric, std::move(ids)};
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto i = static_cast<Eigen::Index>(pairs[p].first);
    const auto j = static_cast<Eigen::Index>(pairs[p].second);
    dm.values(i, j) = values[p];
    dm.values(j, i) = values[p];
  }
  return dm;
}

Classification knn_classify(const DistanceMatrix& dm, std::span<const std::string> labels, int k) {
  const auto n = static_cast<std::size_t>(dm.values.rows());
  if (labels.size() != n) throw std::invalid_argument("knn_classify: one label per trajectory required");
  if (n < 2) throw InsufficientDataError("knn_classify: need at least 2 trajectories");
  if (k < 1 || static_cast<std::size_t>(k) > n - 1) {
    throw std::invalid_argument("knn_classify: k must be in [1, n-1]");
  }
  Classification out;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) <
             dm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b));
    });
    std::map<std::string, std::pair<int, std::size_t>> votes;  // label -> (count, first rank)
    for (std::size_t r = 0; r < static_cast<std::size_t>(k); ++r) {
      auto [it, inserted] = votes.try_emplace(labels[order[r]], 0, r);
      ++it->second.first;
    }
    const auto winner = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
      if (a.second.first != b.second.first) return a.second.first < b.second.first;
      return a.second.second > b.second.second;
    });
    out.predictions.push_back(winner->first);
    if (winner->first == labels[i]) ++correct;
  }
  out.rate = static_cast<double>(correct) / static_cast<double>(n);
  return out;
}

Dendrogram hierarchical_cluster(const DistanceMatrix& dm) {
  const auto n = static_cast<std::size_t>(dm.values.rows());
  if (n < 2) throw InsufficientDataError("hierarchical_cluster: need at least 2 items");
  Dendrogram out;
  out.leaves = n;

  std::vector<std::size_t> id(n);
  std::vector<std::size_t> size(n, 1);
  std::iota(id.begin(), id.end(), 0);
  std::vector<bool> active(n, true);
  Eigen::MatrixXd d = dm.values;

  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t a = 0;
    std::size_t b = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const double v = d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (v < best) {
          best = v;
          a = i;
          b = j;
        }
      }
    }
    const std::size_t merged = size[a] + size[b];
    for (std::size_t o = 0; o < n; ++o) {
      if (!active[o] || o == a || o == b) continue;
      const auto ia = static_cast<Eigen::Index>(a);
      const auto ib = static_cast<Eigen::Index>(b);
      const auto io = static_cast<Eigen::Index>(o);
      const double v = (static_cast<double>(size[a]) * d(ia, io) +
                        static_cast<double>(size[b]) * d(ib, io)) /
                       static_cast<double>(merged);
      d(ia, io) = v;
      d(io, ia) = v;
    }
    out.merges.push_back(Merge{std::min(id[a], id[b]), std::max(id[a], id[b]), best, merged});
    active[b] = false;
    size[a] = merged;
    id[a] = n + step;
  }
  return out;
}

std::vector<int> cut_clusters(const Dendrogram& dendrogram, std::size_t clusters) {
  const std::size_t n = dendrogram.leaves;
  if (clusters < 1 || clusters > n) throw std::invalid_argument("cut_clusters: bad cluster count");
  std::vector<std::size_t> parent(2 * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t s = 0; s < n - clusters; ++s) {
    const auto& m = dendrogram.merges[s];
    parent[find(m.left)] = n + s;
    parent[find(m.right)] = n + s;
  }
  std::map<std::size_t, int> numbering;
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    const auto [it, inserted] = numbering.try_emplace(root, static_cast<int>(numbering.size()));
    labels[i] = it->second;
  }
  return labels;
}

Eigen::MatrixXd mds(const Eigen::MatrixXd& distances, int dim) {
  const Eigen::Index n = distances.rows();
  if (distances.cols() != n || n < 1) throw std::invalid_argument("mds: matrix must be square");
  if (dim < 1 || dim > n) throw std::invalid_argument("mds: dim must be in [1, n]");
  const Eigen::MatrixXd sq = distances.array().square().matrix();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd gram = -0.5 * centering * sq * centering;
  gram = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  Eigen::MatrixXd out(n, dim);
  for (int k = 0; k < dim; ++k) {
    const Eigen::Index col = n - 1 - k;
    const double lambda = std::max(eig.eigenvalues()(col), 0.0);
    Eigen::VectorXd v = eig.eigenvectors().col(col) * std::sqrt(lambda);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    out.col(k) = v;
  }
  return out;
}

}  // namespace mwarp
