#pragma once

// Synthetic warps, trajectories and datasets used by the tests, the
// acceptance suite and the `simulate` CLI subcommand.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mwarp/dataset.hpp"
#include "mwarp/qsphere.hpp"

namespace mwarp {

enum class WarpKind { fast_slow, slow_fast, stop_and_go, smooth, mixed };

WarpKind parse_warp_kind(std::string_view name);
std::string_view to_string(WarpKind kind) noexcept;

/// gamma(t) = (e^{a t} - 1) / (e^a - 1); identity when a == 0.
Warp exponential_warp(std::size_t size, double a);

/// fast-slow: exponential warp with a = +5 strength (convex);
/// slow-fast: a = -5 strength (concave);
/// stop-and-go: normalized integral of a random speed profile with 2-5
///   near-zero plateaus covering about 0.9 strength of the time;
/// smooth: t + sum_k c_k sin(k pi t) / (k pi) with sum |c_k| = strength;
/// mixed: fast-slow or slow-fast with random sign and magnitude.
Warp synth_warp(std::size_t size, std::uint64_t seed, WarpKind kind, double strength);

/// Random smooth trajectory with speed bounded away from zero.
/// S2 paths start in the northern cap z > 0.3 and stay within 1.7 rad of it.
Trajectory random_trajectory(const ManifoldPtr& manifold, std::size_t size, std::mt19937_64& rng);

/// n copies of base, each composed with its own warp of the given kind.
/// Copy i uses synth_warp(T, derive_seed(seed, i), kind, strength * u_i)
/// with u_i uniform in [0.3, 1].
Dataset warped_copies(const Trajectory& base, std::size_t n, WarpKind kind, double strength,
                      std::uint64_t seed);

/// 14 vehicle tracks on SE(2): 5 right turns, 5 straight, 4 left turns, each
/// with its own geometry jitter and warp.
Dataset traffic_dataset(std::size_t size, std::uint64_t seed, WarpKind kind, double strength,
                        double translation_weight = 1.0);

/// Synthetic migration-like S2 tracks between two regions, observed under
/// random time warps.
Dataset migration_dataset(std::size_t n, std::size_t size, std::uint64_t seed, double strength);

struct ContourSequence {
  std::string id;
  std::string label;
  std::vector<PlanarCurve> frames;
};

/// Deforming closed contours: `classes` distinct deformation programs,
/// `per_class` instances each with shape jitter, similarity transforms and
/// an individual warp of the given kind.
std::vector<ContourSequence> contour_sequences(std::size_t classes, std::size_t per_class,
                                               std::size_t frames, std::uint64_t seed,
                                               WarpKind kind, double strength);

}  // namespace mwarp
