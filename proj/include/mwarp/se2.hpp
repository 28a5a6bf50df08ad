#pragma once

#include <Eigen/Core>

#include "mwarp/manifold.hpp"

namespace mwarp {

/// SE(2) with the product metric trace(X1^T X2) on SO(2) plus a weighted
/// Euclidean metric on the translation.
///
/// Ambient layout of a point: [O00, O01, O10, O11, x, y] with O row-major.
/// A tangent vector at (O, x) uses the same layout for (O*A, u), A skew.
class SE2 final : public Manifold {
 public:
  explicit SE2(double translation_weight = 1.0);

  ManifoldKind kind() const noexcept override { return ManifoldKind::se2; }
  std::string_view name() const noexcept override { return "se2"; }
  Eigen::Index ambient_dim() const noexcept override { return 6; }
  Eigen::Index dim() const noexcept override { return 3; }
  const Eigen::VectorXd& metric_weights() const noexcept override {
    return weights_;
  }
  double translation_weight() const noexcept { return weight_; }

  Eigen::VectorXd exp_coords(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& v) const override;
  Eigen::VectorXd log_coords(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& q) const override;
  double dist_coords(const Eigen::VectorXd& p,
                     const Eigen::VectorXd& q) const override;
  /// Rotation part W at O_p maps to O_q O_p^T W; translation part is unchanged.
  Eigen::VectorXd transport_coords(const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& q) const override;

  Eigen::VectorXd project_point(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd project_tangent(const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& v) const override;
  bool contains(const Point& p) const override;
  bool is_tangent(const TangentVector& v) const override;
  Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& p) const override;
  Point default_reference() const override;
  bool within_injectivity(const Eigen::VectorXd& p,
                          const Eigen::VectorXd& v) const override;

  static Point make_point(double theta, double x, double y);
  static Eigen::Matrix2d rotation(const Eigen::VectorXd& coords);
  static double heading(const Eigen::VectorXd& coords);
  /// Skew generator coefficient w of a tangent vector: O^T W = [[0,-w],[w,0]].
  static double angular_rate(const Eigen::VectorXd& p, const Eigen::VectorXd& v);

 private:
  double weight_;
  Eigen::VectorXd weights_;
};

Eigen::Matrix2d rotation2d(double theta);

}  // namespace mwarp
