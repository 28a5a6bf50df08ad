#pragma once

#include <Eigen/Core>

#include "mwarp/manifold.hpp"

namespace mwarp {

/// Unit 2-sphere in R^3 with the metric induced by the embedding.
class Sphere final : public Manifold {
 public:
  Sphere();

  ManifoldKind kind() const noexcept override { return ManifoldKind::sphere; }
  std::string_view name() const noexcept override { return "s2"; }
  Eigen::Index ambient_dim() const noexcept override { return 3; }
  Eigen::Index dim() const noexcept override { return 2; }
  const Eigen::VectorXd& metric_weights() const noexcept override {
    return weights_;
  }

  Eigen::VectorXd exp_coords(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& v) const override;
  Eigen::VectorXd log_coords(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& q) const override;
  double dist_coords(const Eigen::VectorXd& p,
                     const Eigen::VectorXd& q) const override;
  /// Closed form along the great circle: v - 2<v,q>/|p+q|^2 (p+q).
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

 private:
  Eigen::VectorXd weights_;
};

// Geographic convention: (lat, lon) in degrees maps to
// (cos lon cos lat, sin lon cos lat, sin lat).
Point from_geographic(double lat_deg, double lon_deg);
Eigen::Vector2d to_geographic(const Point& p);

}  // namespace mwarp
