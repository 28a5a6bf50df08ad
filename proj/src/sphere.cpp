#include "mwarp/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

namespace mwarp {
namespace {

constexpr double kPointTol = 1e-10;
constexpr double kDrift = 0.5 * kPointTol;

// atan2 form keeps full precision for nearly equal points, where the clamped
// arccos loses about half the significant digits.
double angle_between(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const double c = std::clamp(p.dot(q), -1.0, 1.0);
  const double s = (q - c * p).norm();
  return std::atan2(s, c);
}

void require_not_antipodal(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (angle_between(p, q) >= std::numbers::pi - kCutLocusTolerance) {
    throw CutLocusError("s2: points are antipodal");
  }
}

}  // namespace

Sphere::Sphere() : weights_(Eigen::VectorXd::Ones(3)) {}

Eigen::VectorXd Sphere::exp_coords(const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& v) const {
  const double theta = v.norm();
  if (theta < 1e-12) return p;
  return project_point(std::cos(theta) * p + (std::sin(theta) / theta) * v);
}

Eigen::VectorXd Sphere::log_coords(const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& q) const {
  require_not_antipodal(p, q);
  const double d = angle_between(p, q);
  Eigen::VectorXd u = q - p.dot(q) * p;
  const double un = u.norm();
  if (d == 0.0 || un < 1e-300) return Eigen::VectorXd::Zero(3);
  return project_tangent(p, (d / un) * u);
}

double Sphere::dist_coords(const Eigen::VectorXd& p,
                           const Eigen::VectorXd& q) const {
  return angle_between(p, q);
}

Eigen::VectorXd Sphere::transport_coords(const Eigen::VectorXd& v,
                                         const Eigen::VectorXd& p,
                                         const Eigen::VectorXd& q) const {
  require_not_antipodal(p, q);
  const Eigen::VectorXd s = p + q;
  return project_tangent(q, v - (2.0 * v.dot(q) / s.squaredNorm()) * s);
}

Eigen::VectorXd Sphere::project_point(const Eigen::VectorXd& x) const {
  const double n = x.norm();
  if (std::abs(n - 1.0) > kDrift) return x / n;
  return x;
}

Eigen::VectorXd Sphere::project_tangent(const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& v) const {
  const double r = v.dot(p);
  if (std::abs(r) > kDrift) return v - r * p;
  return v;
}

bool Sphere::contains(const Point& p) const {
  return p.coords.size() == 3 && p.coords.allFinite() &&
         std::abs(p.coords.norm() - 1.0) <= kPointTol;
}

bool Sphere::is_tangent(const TangentVector& v) const {
  return contains(v.base) && v.components.size() == 3 &&
         v.components.allFinite() &&
         std::abs(v.components.dot(v.base.coords)) <=
             kPointTol * std::max(1.0, v.components.norm());
}

Eigen::MatrixXd Sphere::tangent_basis(const Eigen::VectorXd& p) const {
  Eigen::Index axis = 0;
  p.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  a(axis) = 1.0;
  const Eigen::Vector3d pp = p.head<3>();
  const Eigen::Vector3d e1 = (a - a.dot(pp) * pp).normalized();
  const Eigen::Vector3d e2 = pp.cross(e1);
  Eigen::MatrixXd basis(3, 2);
  basis.col(0) = e1;
  basis.col(1) = e2;
  return basis;
}

Point Sphere::default_reference() const {
  return Point{Eigen::Vector3d(0.0, 0.0, 1.0)};
}

bool Sphere::within_injectivity(const Eigen::VectorXd&,
                                const Eigen::VectorXd& v) const {
  return v.norm() < std::numbers::pi - kCutLocusTolerance;
}

Point from_geographic(double lat_deg, double lon_deg) {
  const double lat = lat_deg * std::numbers::pi / 180.0;
  const double lon = lon_deg * std::numbers::pi / 180.0;
  return Point{Eigen::Vector3d(std::cos(lon) * std::cos(lat),
                               std::sin(lon) * std::cos(lat), std::sin(lat))};
}

Eigen::Vector2d to_geographic(const Point& p) {
  const auto& x = p.coords;
  const double lat = std::asin(std::clamp(x(2), -1.0, 1.0));
  const double lon = std::atan2(x(1), x(0));
  return {lat * 180.0 / std::numbers::pi, lon * 180.0 / std::numbers::pi};
}

}  // namespace mwarp
