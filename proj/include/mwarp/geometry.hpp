#pragma once

#include "mwarp/manifold.hpp"
#include "mwarp/qsphere.hpp"
#include "mwarp/se2.hpp"
#include "mwarp/sphere.hpp"

namespace mwarp {

struct GeometryOptions {
  /// Relative weight of translation against rotation on SE(2).
  double se2_translation_weight = 1.0;
  int contour_points = kDefaultContourPoints;
};

ManifoldPtr make_manifold(ManifoldKind kind, const GeometryOptions& options = {});

}  // namespace mwarp
