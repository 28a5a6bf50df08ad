#include "mwarp/dataset.hpp"

#include <stdexcept>

namespace mwarp {

void Dataset::validate() const {
  if (!manifold) throw std::invalid_argument("dataset: no manifold");
  if (ids.size() != trajectories.size()) throw std::invalid_argument("dataset: one id per trajectory required");
  if (!labels.empty() && labels.size() != trajectories.size()) {
    throw std::invalid_argument("dataset: labels must cover all trajectories");
  }
  for (const auto& t : trajectories) {
    if (t.manifold().kind() != manifold->kind()) {
      throw std::invalid_argument("dataset: trajectory on a different manifold");
    }
    if (t.size() != trajectories.front().size()) {
      throw std::invalid_argument("dataset: trajectories must share the grid size");
    }
  }
}

}  // namespace mwarp
