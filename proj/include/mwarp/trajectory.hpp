#pragma once

// Trajectories, time warps and transported square-root vector fields.
//
// Every discrete object here is sampled on the uniform grid
// t_i = i / (T - 1), i = 0..T-1.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mwarp/manifold.hpp"

namespace mwarp {

class Trajectory {
 public:
  Trajectory(ManifoldPtr manifold, std::vector<Point> points);

  const Manifold& manifold() const noexcept { return *manifold_; }
  const ManifoldPtr& manifold_ptr() const noexcept { return manifold_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const noexcept { return points_; }
  double time(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(points_.size() - 1);
  }

  /// Constant-speed geodesic interpolation between neighbouring samples.
  Point at(double t) const;

 private:
  ManifoldPtr manifold_;
  std::vector<Point> points_;
};

/// Boundary-fixed, nondecreasing time warp sampled on the uniform grid.
class Warp {
 public:
  explicit Warp(std::vector<double> values);

  static Warp identity(std::size_t size);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Piecewise-linear evaluation at t in [0, 1].
  double operator()(double t) const;
  /// Finite-difference derivative at each grid point.
  std::vector<double> derivative() const;
  /// (this o inner)(t) = this(inner(t)).
  Warp compose(const Warp& inner) const;
  /// Generalized inverse of the piecewise-linear warp, resampled on the grid.
  Warp inverse() const;
  double sup_distance(const Warp& other) const;

 private:
  std::vector<double> values_;
};

/// Transported square-root vector field: T tangent vectors at reference c.
class Tsrvf {
 public:
  Tsrvf(ManifoldPtr manifold, Point reference, Eigen::MatrixXd values);

  const Manifold& manifold() const noexcept { return *manifold_; }
  const ManifoldPtr& manifold_ptr() const noexcept { return manifold_; }
  const Point& reference() const noexcept { return reference_; }
  /// ambient_dim x T, column i is h(t_i).
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  TangentVector value(std::size_t i) const {
    return TangentVector{reference_, values_.col(static_cast<Eigen::Index>(i))};
  }

 private:
  ManifoldPtr manifold_;
  Point reference_;
  Eigen::MatrixXd values_;
};

/// Velocity field by intrinsic log-map differences: central in the interior,
/// one-sided at the ends. Column i is tangent at alpha(t_i).
Eigen::MatrixXd velocities(const Trajectory& alpha);

Tsrvf compute_tsrvf(const Trajectory& alpha, const Point& reference);

/// Geodesic Euler integration of beta' = |V| V with V = (h)_{c -> beta}.
Trajectory reconstruct(const Point& start, const Tsrvf& h);

/// Trapezoidal L2 distance between two TSRVFs at the same reference point.
double dh(const Tsrvf& h1, const Tsrvf& h2);
double l2_norm(const Tsrvf& h);

/// (h, gamma)(t) = h(gamma(t)) sqrt(gamma'(t)).
Tsrvf warp_action(const Tsrvf& h, const Warp& gamma);

/// alpha o gamma, sampled on the same grid.
Trajectory warp_trajectory(const Trajectory& alpha, const Warp& gamma);

/// Uniform grid of the given size on [0, 1].
std::vector<double> uniform_grid(std::size_t size);

}  // namespace mwarp
