#pragma once

// Exhaustive reference for the dynamic-programming alignment, shared by the
// unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace testing {

// Independent evaluation of the discretized matching cost along a polyline
// path, with the three-point Gauss rule written out from its definition.
inline double oracle_segment(const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2, int k, int l, int i, int j) {
  const double dt = 1.0 / static_cast<double>(h1.cols() - 1);
  const double root = std::sqrt(3.0 / 5.0);
  const double nodes[3] = {-root, 0.0, root};
  const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  auto lerp = [](const Eigen::MatrixXd& h, double x) -> Eigen::VectorXd {
    const auto c = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(x)), h.cols() - 2);
    const double f = x - static_cast<double>(c);
    return (1.0 - f) * h.col(c) + f * h.col(c + 1);
  };
  const double slope = static_cast<double>(j - l) / static_cast<double>(i - k);
  double sum = 0.0;
  for (int g = 0; g < 3; ++g) {
    const double r = (nodes[g] + 1.0) / 2.0;
    const Eigen::VectorXd diff = lerp(h1, k + r * (i - k)) - std::sqrt(slope) * lerp(h2, l + r * (j - l));
    sum += weights[g] * diff.squaredNorm();
  }
  return sum * (i - k) * dt / 2.0;
}

struct OracleResult {
  double cost = std::numeric_limits<double>::infinity();
  std::size_t paths = 0;
};

inline OracleResult brute_force(const Eigen::MatrixXd& h1, const Eigen::MatrixXd& h2) {
  const int last = static_cast<int>(h1.cols()) - 1;
  std::vector<std::pair<int, int>> steps;
  for (int a = 1; a <= 4; ++a) {
    for (int b = 1; b <= 4; ++b) {
      if (std::gcd(a, b) == 1) steps.emplace_back(a, b);
    }
  }
  OracleResult best;
  std::function<void(int, int, double)> walk = [&](int i, int j, double acc) {
    if (i == last && j == last) {
      ++best.paths;
      best.cost = std::min(best.cost, acc);
      return;
    }
    for (const auto& [a, b] : steps) {
      if (i + a <= last && j + b <= last) walk(i + a, j + b, acc + oracle_segment(h1, h2, i, j, i + a, j + b));
    }
  };
  walk(0, 0, 0.0);
  return best;
}

}  // namespace testing
