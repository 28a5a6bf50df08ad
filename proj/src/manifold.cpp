#include "mwarp/manifold.hpp"

#include <stdexcept>

namespace mwarp {

Point Manifold::exp(const Point& p, const TangentVector& v) const {
  require_base(p, v);
  return Point{exp_coords(p.coords, v.components)};
}

TangentVector Manifold::log(const Point& p, const Point& q) const {
  return TangentVector{p, log_coords(p.coords, q.coords)};
}

double Manifold::dist(const Point& p, const Point& q) const {
  return dist_coords(p.coords, q.coords);
}

TangentVector Manifold::transport(const TangentVector& v, const Point& p,
                                  const Point& q) const {
  require_base(p, v);
  return TangentVector{q, transport_coords(v.components, p.coords, q.coords)};
}

double Manifold::inner(const Point& p, const TangentVector& v,
                       const TangentVector& w) const {
  require_base(p, v);
  require_base(p, w);
  return inner_coords(v.components, w.components);
}

double Manifold::norm(const Point& p, const TangentVector& v) const {
  return std::sqrt(inner(p, v, v));
}

TangentVector Manifold::zero(const Point& p) const {
  return TangentVector{p, Eigen::VectorXd::Zero(ambient_dim())};
}

void Manifold::require_base(const Point& p, const TangentVector& v) const {
  if (p.coords.size() != ambient_dim() || v.components.size() != ambient_dim()) {
    throw std::invalid_argument(std::string(name()) +
                                ": coordinate size does not match manifold");
  }
  if (!same_point(p, v.base)) {
    throw BaseMismatchError(std::string(name()) +
                            ": tangent vector is not based at the given point");
  }
}

bool same_point(const Point& a, const Point& b) noexcept {
  if (a.coords.size() != b.coords.size()) return false;
  if (a.coords.size() == 0) return true;
  const double scale = 1.0 + a.coords.lpNorm<Eigen::Infinity>();
  return (a.coords - b.coords).lpNorm<Eigen::Infinity>() <= 1e-12 * scale;
}

ManifoldKind parse_manifold_kind(std::string_view name) {
  if (name == "s2" || name == "sphere") return ManifoldKind::sphere;
  if (name == "se2") return ManifoldKind::se2;
  if (name == "qsphere") return ManifoldKind::qsphere;
  throw std::invalid_argument("unknown manifold '" + std::string(name) + "'");
}

std::string_view to_string(ManifoldKind kind) noexcept {
  switch (kind) {
    case ManifoldKind::sphere:
      return "s2";
    case ManifoldKind::se2:
      return "se2";
    case ManifoldKind::qsphere:
      return "qsphere";
  }
  return "?";
}

}  // namespace mwarp
