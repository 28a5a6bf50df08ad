#include "mwarp/geometry.hpp"

#include <memory>

namespace mwarp {

ManifoldPtr make_manifold(ManifoldKind kind, const GeometryOptions& options) {
  switch (kind) {
    case ManifoldKind::sphere:
      return std::make_shared<Sphere>();
    case ManifoldKind::se2:
      return std::make_shared<SE2>(options.se2_translation_weight);
    case ManifoldKind::qsphere:
      return std::make_shared<QSphere>(options.contour_points);
  }
  return nullptr;
}

}  // namespace mwarp
