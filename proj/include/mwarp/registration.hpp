#pragma once

// Pairwise elastic registration of TSRVFs by dynamic programming.
//
// The warp gamma is searched over piecewise-linear monotone paths on the
// T x T grid whose segments are steps (a, b) with 1 <= a, b <= 4 and
// gcd(a, b) = 1. The cost of a segment is
//
//     int |h1(t) - h2(gamma(t)) sqrt(gamma'(t))|^2 dt
//
// evaluated by three-point Gauss-Legendre quadrature with linear
// interpolation of h1 and h2.

#include <array>
#include <span>
#include <vector>

#include "mwarp/trajectory.hpp"

namespace mwarp {

struct GridStep {
  int di;  // along h1 (time t)
  int dj;  // along h2 (gamma(t))
};

struct GridNode {
  int i;
  int j;
};

/// The eleven coprime steps, ordered by closeness to slope 1 (the DP
/// prefers earlier steps on equal cost).
std::span<const GridStep> dp_stencil() noexcept;

struct AlignResult {
  Warp warp;
  /// dh(h1, (h2, warp)).
  double distance;
  /// Discrete objective value at the optimum (sum of segment costs).
  double path_cost;
  std::vector<GridNode> path;
};

/// Cost of matching h1 on [t_k, t_i] with h2 on [t_l, t_j] along a line.
/// Inputs are metric-whitened value matrices (Euclidean norm == metric norm).
double segment_cost(const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2, GridNode from,
                    GridNode to);

/// Values scaled so that the Euclidean norm equals the Riemannian norm at c.
Eigen::MatrixXd whitened(const Tsrvf& h);

/// Optimal gamma such that (h2, gamma) is closest to h1.
AlignResult align_pair(const Tsrvf& h1, const Tsrvf& h2);

/// Symmetrized elastic distance min(align(h1,h2), align(h2,h1)).
double ds(const Tsrvf& h1, const Tsrvf& h2);
double ds(const Trajectory& alpha1, const Trajectory& alpha2, const Point& reference);

}  // namespace mwarp
