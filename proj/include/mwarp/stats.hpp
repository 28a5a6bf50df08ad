#pragma once

// Karcher means of points and trajectory sets, and cross-sectional
// second-order statistics of aligned trajectories.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mwarp/parallel.hpp"
#include "mwarp/trajectory.hpp"

namespace mwarp {

struct KarcherPointOptions {
  double step = 0.5;
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
};

/// Fixed point of p <- exp(p, step * mean_i log(p, p_i)).
/// Throws NoConvergenceError after max_iterations.
Point karcher_mean_points(const Manifold& manifold, std::span<const Point> points,
                          const KarcherPointOptions& options = {});

enum class ReferenceMode { fixed, start_mean, manifold_default };

struct ReferencePolicy {
  ReferenceMode mode = ReferenceMode::manifold_default;
  std::optional<Point> point;  // used by ReferenceMode::fixed
};

Point resolve_reference(const ReferencePolicy& policy, std::span<const Trajectory> trajectories);

/// Per-time covariance of shooting vectors v_i(t) = log(mu(t), alpha_i(t)),
/// expressed in a metric-orthonormal basis of T_mu(t)(M).
struct CrossSectionalStats {
  std::vector<Eigen::MatrixXd> basis;       // ambient x d, one per time
  std::vector<Eigen::MatrixXd> covariance;  // d x d
  std::vector<double> rho;                  // trace of covariance
  std::vector<Eigen::MatrixXd> modes;       // U(t), columns by decreasing variance
  std::vector<Eigen::VectorXd> singular_values;
};

/// On S2 and SE(2) the basis is the manifold's canonical frame; on the
/// q-sphere it is the top (n - 1) principal subspace of the shooting vectors.
CrossSectionalStats cross_sectional_stats(const Trajectory& mean,
                                          std::span<const Trajectory> aligned,
                                          Execution exec = Execution::parallel);

/// Trapezoidal integral over [0, 1] of a function sampled on the uniform grid.
double integrate(std::span<const double> values);

/// Cross-sectional distance: trapezoidal integral of pointwise geodesic distances.
double dx(const Trajectory& alpha1, const Trajectory& alpha2);

struct KarcherOptions {
  int max_iterations = 50;
  double relative_tolerance = 1e-4;
  Execution exec = Execution::parallel;
};

struct KarcherSummary {
  Trajectory mean;
  Tsrvf mean_tsrvf;
  std::vector<Trajectory> aligned;
  std::vector<Warp> warps;
  CrossSectionalStats stats;
  /// E = sum_i ds(mu, alpha_i)^2 at the starting medoid and after each
  /// accepted update.
  std::vector<double> energy_trace;
  std::size_t initial_index;
  int iterations;
  bool converged;
};

/// Karcher mean of trajectories under the elastic distance: medoid start,
/// DP alignment to the current mean TSRVF, averaging in T_c(M), integral
/// curve from the point mean of the starting points, repeat until the
/// relative energy decrease falls below the tolerance. An update that raises
/// the energy is rejected and the previous mean returned.
KarcherSummary karcher_mean_trajectories(std::span<const Trajectory> trajectories,
                                         const Point& reference,
                                         const KarcherOptions& options = {});

/// No-registration baseline: pointwise Karcher mean at each time and the
/// cross-sectional statistics of the raw trajectories around it.
struct PointwiseSummary {
  Trajectory mean;
  CrossSectionalStats stats;
};

PointwiseSummary pointwise_summary(std::span<const Trajectory> trajectories,
                                   Execution exec = Execution::parallel);

}  // namespace mwarp
