#include "mwarp/se2.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

namespace mwarp {
namespace {

constexpr double kPointTol = 1e-10;
constexpr double kDrift = 5e-11;

Eigen::Matrix2d unpack(const Eigen::VectorXd& v) {
  Eigen::Matrix2d m;
  m << v(0), v(1), v(2), v(3);
  return m;
}

void pack(const Eigen::Matrix2d& m, Eigen::VectorXd& v) {
  v(0) = m(0, 0);
  v(1) = m(0, 1);
  v(2) = m(1, 0);
  v(3) = m(1, 1);
}

Eigen::Matrix2d skew(double w) {
  Eigen::Matrix2d a;
  a << 0.0, -w, w, 0.0;
  return a;
}

double relative_angle(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const Eigen::Matrix2d r = unpack(p).transpose() * unpack(q);
  return std::atan2(r(1, 0) - r(0, 1), r(0, 0) + r(1, 1));
}

}  // namespace

Eigen::Matrix2d rotation2d(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

SE2::SE2(double translation_weight)
    : weight_(translation_weight), weights_(6) {
  if (!(translation_weight > 0.0) || !std::isfinite(translation_weight)) {
    throw std::invalid_argument("se2: translation weight must be positive");
  }
  weights_ << 1.0, 1.0, 1.0, 1.0, weight_, weight_;
}

Eigen::VectorXd SE2::exp_coords(const Eigen::VectorXd& p,
                                const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(6);
  pack(unpack(p) * rotation2d(angular_rate(p, v)), out);
  out.tail<2>() = p.tail<2>() + v.tail<2>();
  return project_point(out);
}

Eigen::VectorXd SE2::log_coords(const Eigen::VectorXd& p,
                                const Eigen::VectorXd& q) const {
  const double dtheta = relative_angle(p, q);
  if (std::abs(dtheta) >= std::numbers::pi - kCutLocusTolerance) {
    throw CutLocusError("se2: relative rotation is a half turn");
  }
  Eigen::VectorXd out(6);
  pack(unpack(p) * skew(dtheta), out);
  out.tail<2>() = q.tail<2>() - p.tail<2>();
  return out;
}

double SE2::dist_coords(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const {
  const double dtheta = relative_angle(p, q);
  return std::sqrt(2.0 * dtheta * dtheta +
                   weight_ * (q.tail<2>() - p.tail<2>()).squaredNorm());
}

Eigen::VectorXd SE2::transport_coords(const Eigen::VectorXd& v,
                                      const Eigen::VectorXd& p,
                                      const Eigen::VectorXd& q) const {
  Eigen::VectorXd out(6);
  pack(unpack(q) * unpack(p).transpose() * unpack(v), out);
  out.tail<2>() = v.tail<2>();
  return project_tangent(q, out);
}

Eigen::VectorXd SE2::project_point(const Eigen::VectorXd& x) const {
  const Eigen::Matrix2d o = unpack(x);
  const double drift = std::max(
      (o.transpose() * o - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(),
      std::abs(o.determinant() - 1.0));
  if (drift <= kDrift) return x;
  // Polar factor of a 2x2 matrix with positive determinant.
  Eigen::VectorXd out = x;
  pack(rotation2d(std::atan2(o(1, 0) - o(0, 1), o(0, 0) + o(1, 1))), out);
  return out;
}

Eigen::VectorXd SE2::project_tangent(const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& v) const {
  const Eigen::Matrix2d o = unpack(p);
  const Eigen::Matrix2d a = o.transpose() * unpack(v);
  if ((a + a.transpose()).cwiseAbs().maxCoeff() <= kDrift) return v;
  Eigen::VectorXd out = v;
  pack(o * (0.5 * (a - a.transpose())), out);
  return out;
}

bool SE2::contains(const Point& p) const {
  if (p.coords.size() != 6 || !p.coords.allFinite()) return false;
  const Eigen::Matrix2d o = unpack(p.coords);
  return (o.transpose() * o - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <=
             kPointTol &&
         std::abs(o.determinant() - 1.0) <= kPointTol;
}

bool SE2::is_tangent(const TangentVector& v) const {
  if (!contains(v.base) || v.components.size() != 6 || !v.components.allFinite()) {
    return false;
  }
  const Eigen::Matrix2d a = unpack(v.base.coords).transpose() * unpack(v.components);
  return (a + a.transpose()).cwiseAbs().maxCoeff() <=
         kPointTol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

Eigen::MatrixXd SE2::tangent_basis(const Eigen::VectorXd& p) const {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(6, 3);
  Eigen::VectorXd col = Eigen::VectorXd::Zero(6);
  pack(unpack(p) * skew(1.0 / std::sqrt(2.0)), col);
  basis.col(0) = col;
  basis(4, 1) = 1.0 / std::sqrt(weight_);
  basis(5, 2) = 1.0 / std::sqrt(weight_);
  return basis;
}

Point SE2::default_reference() const { return make_point(0.0, 0.0, 0.0); }

bool SE2::within_injectivity(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& v) const {
  return std::abs(angular_rate(p, v)) < std::numbers::pi - kCutLocusTolerance;
}

Point SE2::make_point(double theta, double x, double y) {
  Eigen::VectorXd c(6);
  pack(rotation2d(theta), c);
  c(4) = x;
  c(5) = y;
  return Point{c};
}

Eigen::Matrix2d SE2::rotation(const Eigen::VectorXd& coords) { return unpack(coords); }

double SE2::heading(const Eigen::VectorXd& coords) {
  return std::atan2(coords(2), coords(0));
}

double SE2::angular_rate(const Eigen::VectorXd& p, const Eigen::VectorXd& v) {
  const Eigen::Matrix2d a = unpack(p).transpose() * unpack(v);
  return 0.5 * (a(1, 0) - a(0, 1));
}

}  // namespace mwarp
