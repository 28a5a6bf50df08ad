#include "mwarp/qsphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace mwarp {
namespace {

constexpr double kPointTol = 1e-8;
constexpr double kDrift = 0.5 * kPointTol;

}  // namespace

QSphere::QSphere(int points) : points_(points) {
  if (points < 8) throw std::invalid_argument("qsphere: need at least 8 points");
  weights_ = Eigen::VectorXd::Constant(2 * points, 1.0 / points);
}

Eigen::VectorXd QSphere::exp_coords(const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& v) const {
  const double theta = norm_coords(v);
  if (theta < 1e-12) return p;
  return project_point(std::cos(theta) * p + (std::sin(theta) / theta) * v);
}

double QSphere::dist_coords(const Eigen::VectorXd& p,
                            const Eigen::VectorXd& q) const {
  const double c = std::clamp(inner_coords(p, q), -1.0, 1.0);
  return std::atan2(norm_coords(q - c * p), c);
}

Eigen::VectorXd QSphere::log_coords(const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& q) const {
  const double d = dist_coords(p, q);
  if (d >= std::numbers::pi - kCutLocusTolerance) {
    throw CutLocusError("qsphere: q-functions are antipodal");
  }
  const Eigen::VectorXd u = q - inner_coords(p, q) * p;
  const double un = norm_coords(u);
  if (d == 0.0 || un < 1e-300) return Eigen::VectorXd::Zero(p.size());
  return project_tangent(p, (d / un) * u);
}

Eigen::VectorXd QSphere::transport_coords(const Eigen::VectorXd& v,
                                          const Eigen::VectorXd& p,
                                          const Eigen::VectorXd& q) const {
  if (dist_coords(p, q) >= std::numbers::pi - kCutLocusTolerance) {
    throw CutLocusError("qsphere: q-functions are antipodal");
  }
  const Eigen::VectorXd s = p + q;
  return project_tangent(q, v - (2.0 * inner_coords(v, q) / inner_coords(s, s)) * s);
}

Eigen::VectorXd QSphere::project_point(const Eigen::VectorXd& x) const {
  const double n = norm_coords(x);
  if (std::abs(n - 1.0) > kDrift) return x / n;
  return x;
}

Eigen::VectorXd QSphere::project_tangent(const Eigen::VectorXd& p,
                                         const Eigen::VectorXd& v) const {
  const double r = inner_coords(v, p);
  if (std::abs(r) > kDrift) return v - r * p;
  return v;
}

bool QSphere::contains(const Point& p) const {
  return p.coords.size() == ambient_dim() && p.coords.allFinite() &&
         std::abs(norm_coords(p.coords) - 1.0) <= kPointTol;
}

bool QSphere::is_tangent(const TangentVector& v) const {
  return contains(v.base) && v.components.size() == ambient_dim() &&
         v.components.allFinite() &&
         std::abs(inner_coords(v.components, v.base.coords)) <=
             kPointTol * std::max(1.0, norm_coords(v.components));
}

Eigen::MatrixXd QSphere::tangent_basis(const Eigen::VectorXd& p) const {
  // Householder completion of the (metric-scaled) base point.
  const double scale = std::sqrt(static_cast<double>(points_));
  const Eigen::VectorXd scaled = p / scale;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(scaled);
  const Eigen::MatrixXd q = qr.householderQ();
  return scale * q.rightCols(ambient_dim() - 1);
}

Point QSphere::default_reference() const {
  PlanarCurve circle{Eigen::Matrix2Xd(2, points_)};
  for (int i = 0; i < points_; ++i) {
    const double s = 2.0 * std::numbers::pi * i / points_;
    circle.samples.col(i) << std::cos(s), std::sin(s);
  }
  return q_function(circle, points_);
}

bool QSphere::within_injectivity(const Eigen::VectorXd&,
                                 const Eigen::VectorXd& v) const {
  return norm_coords(v) < std::numbers::pi - kCutLocusTolerance;
}

PlanarCurve resample_closed(const PlanarCurve& curve, int n) {
  if (n < 8) throw std::invalid_argument("resample_closed: need n >= 8");
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(curve.samples.cols()));
  for (Eigen::Index i = 0; i < curve.samples.cols(); ++i) {
    const Eigen::Vector2d x = curve.samples.col(i);
    if (!x.allFinite()) throw DegenerateCurveError("curve has non-finite samples");
    if (pts.empty() || (x - pts.back()).norm() > 1e-14) pts.push_back(x);
  }
  while (pts.size() > 1 && (pts.back() - pts.front()).norm() <= 1e-14) pts.pop_back();
  if (pts.size() < 3) throw DegenerateCurveError("curve has fewer than 3 distinct samples");

  const std::size_t m = pts.size();
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    cum[i + 1] = cum[i] + (pts[(i + 1) % m] - pts[i]).norm();
  }
  const double length = cum[m];
  if (!(length > 0.0)) throw DegenerateCurveError("curve has zero length");

  PlanarCurve out{Eigen::Matrix2Xd(2, n)};
  std::size_t seg = 0;
  for (int k = 0; k < n; ++k) {
    const double target = length * k / n;
    while (seg + 1 < m && cum[seg + 1] <= target) ++seg;
    const double span = cum[seg + 1] - cum[seg];
    const double f = span > 0.0 ? (target - cum[seg]) / span : 0.0;
    out.samples.col(k) = (1.0 - f) * pts[seg] + f * pts[(seg + 1) % m];
  }
  return out;
}

Point q_function(const PlanarCurve& curve, int n) {
  const PlanarCurve r = resample_closed(curve, n);
  double length = 0.0;
  for (int i = 0; i < n; ++i) length += (r.samples.col((i + 1) % n) - r.samples.col(i)).norm();
  const double ds = 1.0 / n;

  Eigen::VectorXd q(2 * n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d d =
        (r.samples.col((i + 1) % n) - r.samples.col((i + n - 1) % n)) / (2.0 * ds * length);
    const double speed = d.norm();
    if (speed < 1e-10) throw DegenerateCurveError("curve derivative vanishes");
    q.segment<2>(2 * i) = d / std::sqrt(speed);
  }
  q /= std::sqrt(q.squaredNorm() / n);
  return Point{q};
}

std::pair<Eigen::Matrix2d, Point> rotation_align(const Point& q1, const Point& q2) {
  if (q1.coords.size() != q2.coords.size() || q1.coords.size() % 2 != 0) {
    throw std::invalid_argument("rotation_align: size mismatch");
  }
  const Eigen::Index n = q1.coords.size() / 2;
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    m += q1.coords.segment<2>(2 * i) * q2.coords.segment<2>(2 * i).transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2d d = Eigen::Matrix2d::Identity();
  d(1, 1) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Eigen::Matrix2d rot = svd.matrixU() * d * svd.matrixV().transpose();

  Eigen::VectorXd aligned(q2.coords.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    aligned.segment<2>(2 * i) = rot * q2.coords.segment<2>(2 * i);
  }
  return {rot, Point{aligned}};
}

}  // namespace mwarp
