#pragma once

// Abstract Riemannian manifold used by every trajectory algorithm.
//
// All three concrete geometries (S2, SE(2), the q-function pre-shape sphere)
// are embedded in a Euclidean ambient space and carry a metric that is a
// constant diagonal form in ambient coordinates:
//
//     <v, w>_p = sum_k weight_k * v_k * w_k
//
// Points and tangent vectors are stored as ambient coordinate vectors. The
// checked API (exp/log/transport on Point/TangentVector) verifies base-point
// agreement; the *_coords kernels skip those checks and are meant for inner
// loops that already know the invariants hold.

#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "mwarp/errors.hpp"

namespace mwarp {

enum class ManifoldKind { sphere, se2, qsphere };

struct Point {
  Eigen::VectorXd coords;
};

struct TangentVector {
  Point base;
  Eigen::VectorXd components;
};

/// Distance from the cut locus below which log/transport refuse to run.
inline constexpr double kCutLocusTolerance = 1e-6;

class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ManifoldKind kind() const noexcept = 0;
  virtual std::string_view name() const noexcept = 0;
  virtual Eigen::Index ambient_dim() const noexcept = 0;
  /// Intrinsic dimension of the tangent spaces.
  virtual Eigen::Index dim() const noexcept = 0;
  /// Diagonal of the metric in ambient coordinates.
  virtual const Eigen::VectorXd& metric_weights() const noexcept = 0;

  virtual Eigen::VectorXd exp_coords(const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& v) const = 0;
  virtual Eigen::VectorXd log_coords(const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& q) const = 0;
  virtual double dist_coords(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& q) const = 0;
  virtual Eigen::VectorXd transport_coords(const Eigen::VectorXd& v,
                                           const Eigen::VectorXd& p,
                                           const Eigen::VectorXd& q) const = 0;

  /// Nearest point of the constraint set when drift exceeds half the
  /// invariant tolerance; otherwise the input is returned unchanged.
  virtual Eigen::VectorXd project_point(const Eigen::VectorXd& x) const = 0;
  /// Same for the tangent space at p.
  virtual Eigen::VectorXd project_tangent(const Eigen::VectorXd& p,
                                          const Eigen::VectorXd& v) const = 0;

  virtual bool contains(const Point& p) const = 0;
  virtual bool is_tangent(const TangentVector& v) const = 0;

  /// Columns form a metric-orthonormal basis of T_p(M), in ambient coordinates.
  virtual Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& p) const = 0;

  /// Manifold-default TSRVF reference point.
  virtual Point default_reference() const = 0;

  /// True when v lies strictly inside the injectivity domain of exp at p.
  virtual bool within_injectivity(const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& v) const = 0;

  // Checked API.

  Point exp(const Point& p, const TangentVector& v) const;
  TangentVector log(const Point& p, const Point& q) const;
  double dist(const Point& p, const Point& q) const;
  TangentVector transport(const TangentVector& v, const Point& p,
                          const Point& q) const;
  double inner(const Point& p, const TangentVector& v,
               const TangentVector& w) const;
  double norm(const Point& p, const TangentVector& v) const;
  TangentVector zero(const Point& p) const;

  double inner_coords(const Eigen::VectorXd& v, const Eigen::VectorXd& w) const {
    return (metric_weights().array() * v.array() * w.array()).sum();
  }
  double norm_coords(const Eigen::VectorXd& v) const {
    return std::sqrt(inner_coords(v, v));
  }

 protected:
  void require_base(const Point& p, const TangentVector& v) const;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

/// True when both points have identical coordinates up to rounding.
bool same_point(const Point& a, const Point& b) noexcept;

ManifoldKind parse_manifold_kind(std::string_view name);
std::string_view to_string(ManifoldKind kind) noexcept;

}  // namespace mwarp
