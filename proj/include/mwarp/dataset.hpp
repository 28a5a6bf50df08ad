#pragma once

#include <string>
#include <vector>

#include "mwarp/trajectory.hpp"

namespace mwarp {

/// A collection of trajectories on one manifold, sharing a grid size.
struct Dataset {
  ManifoldPtr manifold;
  std::vector<Trajectory> trajectories;
  std::vector<std::string> ids;
  /// Empty, or one label per trajectory.
  std::vector<std::string> labels;
  std::vector<std::string> notes;

  std::size_t size() const noexcept { return trajectories.size(); }
  bool labelled() const noexcept { return !labels.empty(); }
  std::size_t grid() const noexcept { return trajectories.empty() ? 0 : trajectories.front().size(); }

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

}  // namespace mwarp
