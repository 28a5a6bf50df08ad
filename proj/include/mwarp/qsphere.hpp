#pragma once

// Pre-shape sphere of planar closed curves.
//
// A curve is sampled at n points s_i = i/n of the circle S^1 and represented
// by its q-function q(s) = beta'(s) / sqrt(|beta'(s)|). After rescaling the
// curve to unit length the q-functions lie on the unit sphere of
// L^2(S^1, R^2) under the discrete inner product
//
//     <q1, q2> = sum_i <q1(s_i), q2(s_i)> / n.
//
// Ambient layout: [qx_0, qy_0, qx_1, qy_1, ...].

#include <utility>

#include <Eigen/Core>

#include "mwarp/manifold.hpp"

namespace mwarp {

/// Closed planar curve; the last sample connects back to the first.
struct PlanarCurve {
  Eigen::Matrix2Xd samples;
};

inline constexpr int kDefaultContourPoints = 100;

class QSphere final : public Manifold {
 public:
  explicit QSphere(int points = kDefaultContourPoints);

  ManifoldKind kind() const noexcept override { return ManifoldKind::qsphere; }
  std::string_view name() const noexcept override { return "qsphere"; }
  Eigen::Index ambient_dim() const noexcept override { return 2 * points_; }
  Eigen::Index dim() const noexcept override { return 2 * points_ - 1; }
  const Eigen::VectorXd& metric_weights() const noexcept override {
    return weights_;
  }
  int points() const noexcept { return points_; }

  Eigen::VectorXd exp_coords(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& v) const override;
  Eigen::VectorXd log_coords(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& q) const override;
  double dist_coords(const Eigen::VectorXd& p,
                     const Eigen::VectorXd& q) const override;
  Eigen::VectorXd transport_coords(const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& q) const override;

  Eigen::VectorXd project_point(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd project_tangent(const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& v) const override;
  bool contains(const Point& p) const override;
  bool is_tangent(const TangentVector& v) const override;
  Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& p) const override;
  /// q-function of the unit circle on this grid.
  Point default_reference() const override;
  bool within_injectivity(const Eigen::VectorXd& p,
                          const Eigen::VectorXd& v) const override;

 private:
  int points_;
  Eigen::VectorXd weights_;
};

/// Arc-length resampling of a closed polygon to n points, starting at the
/// first sample. Consecutive duplicate samples are dropped first.
PlanarCurve resample_closed(const PlanarCurve& curve, int n);

/// q-function of a closed curve: resampled to n points by arc length,
/// rescaled to unit length, central differences on the circular index.
/// Throws DegenerateCurveError if a derivative vanishes.
Point q_function(const PlanarCurve& curve, int n = kDefaultContourPoints);

/// Optimal rotation of q2 onto q1 (Procrustes over SO(2)).
/// Returns R and the pointwise-rotated q2.
std::pair<Eigen::Matrix2d, Point> rotation_align(const Point& q1, const Point& q2);

}  // namespace mwarp
