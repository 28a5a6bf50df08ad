#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "mwarp/geometry.hpp"
#include "mwarp/synth.hpp"
#include "mwarp/trajectory.hpp"

namespace testing {

using namespace mwarp;

inline constexpr double kPi = std::numbers::pi;

inline ManifoldPtr s2() { return make_manifold(ManifoldKind::sphere); }
inline ManifoldPtr se2(double w = 1.0) { return make_manifold(ManifoldKind::se2, {w, 100}); }
inline ManifoldPtr qsphere(int n = 40) { return make_manifold(ManifoldKind::qsphere, {1.0, n}); }

inline std::vector<ManifoldPtr> all_geometries() { return {s2(), se2(), se2(2.5), qsphere()}; }

inline Eigen::VectorXd gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = g(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random tangent vector at p with metric norm drawn from [0, max_norm].
inline Eigen::VectorXd random_tangent(const Manifold& m, const Eigen::VectorXd& p, std::mt19937_64& rng,
                                      double max_norm) {
  const Eigen::MatrixXd basis = m.tangent_basis(p);
  Eigen::VectorXd c = gaussian(basis.cols(), rng);
  c *= uniform(rng, 0.0, max_norm) / c.norm();
  return basis * c;
}

/// Random point: S2 and SE(2) anywhere, q-sphere within 1 rad of the circle.
inline Point random_point(const Manifold& m, std::mt19937_64& rng) {
  switch (m.kind()) {
    case ManifoldKind::sphere:
      return Point{gaussian(3, rng).normalized()};
    case ManifoldKind::se2: {
      const Eigen::Vector2d x = gaussian(2, rng);
      return SE2::make_point(uniform(rng, -kPi, kPi), x(0), x(1));
    }
    case ManifoldKind::qsphere: {
      const auto c = m.default_reference().coords;
      return Point{m.exp_coords(c, random_tangent(m, c, rng, 1.0))};
    }
  }
  return {};
}

inline double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace testing
