#include "mwarp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mwarp {
namespace {

constexpr double kZeroSpeed = 1e-12;

// Locates t in cell k with fraction f such that t = (k + f) / (n - 1).
std::pair<std::size_t, double> locate(double t, std::size_t n) {
  const double u = std::clamp(t, 0.0, 1.0) * static_cast<double>(n - 1);
  const auto k = std::min(static_cast<std::size_t>(u), n - 2);
  return {k, u - static_cast<double>(k)};
}

}  // namespace

std::vector<double> uniform_grid(std::size_t size) {
  std::vector<double> t(size);
  for (std::size_t i = 0; i < size; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(size - 1);
  }
  return t;
}

// ---------------------------------------------------------------- Trajectory

Trajectory::Trajectory(ManifoldPtr manifold, std::vector<Point> points)
    : manifold_(std::move(manifold)), points_(std::move(points)) {
  if (!manifold_) throw std::invalid_argument("trajectory: null manifold");
  if (points_.size() < 3) throw std::invalid_argument("trajectory: need T >= 3 samples");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!manifold_->contains(points_[i])) {
      throw std::invalid_argument("trajectory: sample " + std::to_string(i) +
                                  " is not a point of " + std::string(manifold_->name()));
    }
  }
}

Point Trajectory::at(double t) const {
  const auto [k, f] = locate(t, points_.size());
  if (f == 0.0) return points_[k];
  if (f == 1.0) return points_[k + 1];
  const auto& m = *manifold_;
  const auto& p = points_[k].coords;
  return Point{m.exp_coords(p, f * m.log_coords(p, points_[k + 1].coords))};
}

// ---------------------------------------------------------------------- Warp

Warp::Warp(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("warp: need at least 2 samples");
  constexpr double tol = 1e-9;
  if (std::abs(values_.front()) > tol || std::abs(values_.back() - 1.0) > tol) {
    throw std::invalid_argument("warp: must satisfy gamma(0) = 0 and gamma(1) = 1");
  }
  values_.front() = 0.0;
  values_.back() = 1.0;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < values_[i - 1] - tol) {
      throw std::invalid_argument("warp: must be nondecreasing");
    }
    values_[i] = std::clamp(values_[i], values_[i - 1], 1.0);
  }
}

Warp Warp::identity(std::size_t size) { return Warp(uniform_grid(size)); }

double Warp::operator()(double t) const {
  const auto [k, f] = locate(t, values_.size());
  return (1.0 - f) * values_[k] + f * values_[k + 1];
}

std::vector<double> Warp::derivative() const {
  const std::size_t n = values_.size();
  const double step = 1.0 / static_cast<double>(n - 1);
  std::vector<double> d(n);
  d[0] = (values_[1] - values_[0]) / step;
  d[n - 1] = (values_[n - 1] - values_[n - 2]) / step;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = (values_[i + 1] - values_[i - 1]) / (2.0 * step);
  }
  return d;
}

Warp Warp::compose(const Warp& inner) const {
  std::vector<double> out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = (*this)(inner[i]);
  return Warp(std::move(out));
}

Warp Warp::inverse() const {
  const std::size_t n = values_.size();
  const auto grid = uniform_grid(n);
  std::vector<double> out(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = grid[i];
    while (k + 2 < n && values_[k + 1] < y) ++k;
    const double span = values_[k + 1] - values_[k];
    const double f = span > 0.0 ? std::clamp((y - values_[k]) / span, 0.0, 1.0) : 0.0;
    out[i] = grid[k] + f * (grid[k + 1] - grid[k]);
  }
  out.front() = 0.0;
  out.back() = 1.0;
  return Warp(std::move(out));
}

double Warp::sup_distance(const Warp& other) const {
  if (other.size() != size()) throw std::invalid_argument("warp: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    worst = std::max(worst, std::abs(values_[i] - other.values_[i]));
  }
  return worst;
}

// --------------------------------------------------------------------- Tsrvf

Tsrvf::Tsrvf(ManifoldPtr manifold, Point reference, Eigen::MatrixXd values)
    : manifold_(std::move(manifold)), reference_(std::move(reference)), values_(std::move(values)) {
  if (!manifold_) throw std::invalid_argument("tsrvf: null manifold");
  if (values_.rows() != manifold_->ambient_dim() || values_.cols() < 3) {
    throw std::invalid_argument("tsrvf: values must be ambient_dim x T with T >= 3");
  }
  if (!values_.allFinite()) throw std::invalid_argument("tsrvf: non-finite values");
}

// ---------------------------------------------------------------- operations

Eigen::MatrixXd velocities(const Trajectory& alpha) {
  const auto& m = alpha.manifold();
  const std::size_t n = alpha.size();
  const double step = 1.0 / static_cast<double>(n - 1);
  Eigen::MatrixXd v(m.ambient_dim(), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = alpha[i].coords;
    try {
      Eigen::VectorXd d;
      if (i == 0) {
        d = m.log_coords(p, alpha[1].coords) / step;
      } else if (i + 1 == n) {
        d = -m.log_coords(p, alpha[n - 2].coords) / step;
      } else {
        d = (m.log_coords(p, alpha[i + 1].coords) - m.log_coords(p, alpha[i - 1].coords)) /
            (2.0 * step);
      }
      v.col(static_cast<Eigen::Index>(i)) = d;
    } catch (const CutLocusError& e) {
      throw CutLocusError(e.what(), i);
    }
  }
  return v;
}

Tsrvf compute_tsrvf(const Trajectory& alpha, const Point& reference) {
  const auto& m = alpha.manifold();
  if (!m.contains(reference)) {
    throw std::invalid_argument("compute_tsrvf: reference is not a point of the manifold");
  }
  const Eigen::MatrixXd v = velocities(alpha);
  Eigen::MatrixXd h(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    const double speed = m.norm_coords(v.col(i));
    if (speed < kZeroSpeed) {
      h.col(i).setZero();
      continue;
    }
    try {
      h.col(i) = m.transport_coords(v.col(i), alpha[static_cast<std::size_t>(i)].coords,
                                    reference.coords) /
                 std::sqrt(speed);
    } catch (const CutLocusError& e) {
      throw CutLocusError(e.what(), static_cast<std::size_t>(i));
    }
  }
  return Tsrvf(alpha.manifold_ptr(), reference, std::move(h));
}

Trajectory reconstruct(const Point& start, const Tsrvf& h) {
  const auto& m = h.manifold();
  const std::size_t n = h.size();
  const double step = 1.0 / static_cast<double>(n - 1);
  std::vector<Point> out;
  out.reserve(n);
  out.push_back(start);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto& here = out.back().coords;
    Eigen::VectorXd field;
    try {
      field = m.transport_coords(h.values().col(static_cast<Eigen::Index>(k)),
                                 h.reference().coords, here);
    } catch (const CutLocusError& e) {
      throw CutLocusError(e.what(), k);
    }
    out.push_back(Point{m.exp_coords(here, (step * m.norm_coords(field)) * field)});
  }
  return Trajectory(h.manifold_ptr(), std::move(out));
}

double dh(const Tsrvf& h1, const Tsrvf& h2) {
  if (h1.size() != h2.size()) throw std::invalid_argument("dh: TSRVFs differ in length");
  if (!same_point(h1.reference(), h2.reference())) {
    throw MismatchedReferenceError("dh: TSRVFs use different reference points");
  }
  const auto& m = h1.manifold();
  const Eigen::Index n = h1.values().cols();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd diff = h1.values().col(i) - h2.values().col(i);
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += w * m.inner_coords(diff, diff);
  }
  return std::sqrt(acc / static_cast<double>(n - 1));
}

double l2_norm(const Tsrvf& h) {
  const Tsrvf zero(h.manifold_ptr(), h.reference(),
                   Eigen::MatrixXd::Zero(h.values().rows(), h.values().cols()));
  return dh(h, zero);
}

Tsrvf warp_action(const Tsrvf& h, const Warp& gamma) {
  const std::size_t n = h.size();
  if (gamma.size() != n) throw std::invalid_argument("warp_action: size mismatch");
  const auto rate = gamma.derivative();
  Eigen::MatrixXd out(h.values().rows(), h.values().cols());
  for (std::size_t i = 0; i < n; ++i) {
    const auto [k, f] = locate(gamma[i], n);
    const auto kk = static_cast<Eigen::Index>(k);
    out.col(static_cast<Eigen::Index>(i)) =
        std::sqrt(std::max(rate[i], 0.0)) *
        ((1.0 - f) * h.values().col(kk) + f * h.values().col(kk + 1));
  }
  return Tsrvf(h.manifold_ptr(), h.reference(), std::move(out));
}

Trajectory warp_trajectory(const Trajectory& alpha, const Warp& gamma) {
  if (gamma.size() != alpha.size()) throw std::invalid_argument("warp_trajectory: size mismatch");
  std::vector<Point> out;
  out.reserve(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) out.push_back(alpha.at(gamma[i]));
  return Trajectory(alpha.manifold_ptr(), std::move(out));
}

}  // namespace mwarp
