#include "mwarp/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mwarp/qsphere.hpp"
#include "mwarp/se2.hpp"
#include "mwarp/seed.hpp"
#include "mwarp/sphere.hpp"

namespace mwarp {
namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Warp from a speed profile sampled on a fine grid over [0, 1].
Warp warp_from_speed(std::size_t size, const std::vector<double>& speed) {
  const std::size_t fine = speed.size();
  std::vector<double> cum(fine, 0.0);
  for (std::size_t k = 1; k < fine; ++k) cum[k] = cum[k - 1] + 0.5 * (speed[k] + speed[k - 1]);
  const double total = cum.back();
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(size - 1) * static_cast<double>(fine - 1);
    const auto k = std::min(static_cast<std::size_t>(u), fine - 2);
    const double f = u - static_cast<double>(k);
    out[i] = ((1.0 - f) * cum[k] + f * cum[k + 1]) / total;
  }
  out.front() = 0.0;
  out.back() = 1.0;
  return Warp(std::move(out));
}

Warp stop_and_go(std::size_t size, std::mt19937_64& rng, double strength) {
  constexpr std::size_t fine = 4001;
  const int plateaus = std::uniform_int_distribution<int>(2, 5)(rng);
  // Cruising speed varies slowly between a few random levels.
  std::array<double, 6> level{};
  for (auto& l : level) l = 1.0 + 0.3 * strength * uniform(rng, -1.0, 1.0);
  std::vector<double> speed(fine);
  for (std::size_t k = 0; k < fine; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(fine - 1);
    const double x = u * static_cast<double>(level.size() - 1);
    const auto j = std::min(static_cast<std::size_t>(x), level.size() - 2);
    const double f = 0.5 - 0.5 * std::cos(kPi * (x - static_cast<double>(j)));
    speed[k] = (1.0 - f) * level[j] + f * level[j + 1];
  }
  for (int p = 0; p < plateaus; ++p) {
    const double center = uniform(rng, 0.1, 0.9);
    const double width = strength * 0.9 / plateaus * uniform(rng, 0.6, 1.4);
    const double ramp = 0.25 * width;
    for (std::size_t k = 0; k < fine; ++k) {
      const double u = static_cast<double>(k) / static_cast<double>(fine - 1);
      const double dist = std::abs(u - center);
      double depth = 0.0;
      if (dist <= 0.5 * width) {
        depth = 1.0;
      } else if (dist <= 0.5 * width + ramp) {
        depth = 0.5 + 0.5 * std::cos(kPi * (dist - 0.5 * width) / ramp);
      }
      const double floor = 0.02;
      speed[k] = std::min(speed[k], (1.0 - depth) * speed[k] + depth * floor);
    }
  }
  return warp_from_speed(size, speed);
}

Warp smooth_warp(std::size_t size, std::mt19937_64& rng, double strength) {
  std::array<double, 3> c{};
  double total = 0.0;
  for (auto& v : c) {
    v = uniform(rng, -1.0, 1.0);
    total += std::abs(v);
  }
  for (auto& v : c) v *= strength / total;
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(size - 1);
    double g = t;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double w = static_cast<double>(k + 1) * kPi;
      g += c[k] * std::sin(w * t) / w;
    }
    out[i] = g;
  }
  out.front() = 0.0;
  out.back() = 1.0;
  return Warp(std::move(out));
}

// Planar closed curve r(s) (cos 2 pi s, sin 2 pi s) with Fourier radius.
PlanarCurve radial_curve(const std::vector<std::array<double, 3>>& modes, int points) {
  PlanarCurve c{Eigen::Matrix2Xd(2, points)};
  for (int i = 0; i < points; ++i) {
    const double s = static_cast<double>(i) / points;
    double r = 1.0;
    for (const auto& [order, amp, phase] : modes) r += amp * std::cos(2.0 * kPi * order * s + phase);
    c.samples.col(i) << r * std::cos(2.0 * kPi * s), r * std::sin(2.0 * kPi * s);
  }
  return c;
}

}  // namespace

WarpKind parse_warp_kind(std::string_view name) {
  if (name == "fast-slow") return WarpKind::fast_slow;
  if (name == "slow-fast") return WarpKind::slow_fast;
  if (name == "stop-and-go") return WarpKind::stop_and_go;
  if (name == "smooth") return WarpKind::smooth;
  if (name == "mixed") return WarpKind::mixed;
  throw std::invalid_argument("unknown warp kind '" + std::string(name) + "'");
}

std::string_view to_string(WarpKind kind) noexcept {
  switch (kind) {
    case WarpKind::fast_slow:
      return "fast-slow";
    case WarpKind::slow_fast:
      return "slow-fast";
    case WarpKind::stop_and_go:
      return "stop-and-go";
    case WarpKind::smooth:
      return "smooth";
    case WarpKind::mixed:
      return "mixed";
  }
  return "?";
}

Warp exponential_warp(std::size_t size, double a) {
  if (std::abs(a) < 1e-8) return Warp::identity(size);
  std::vector<double> out(size);
  const double denom = std::expm1(a);
  for (std::size_t i = 0; i < size; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(size - 1);
    out[i] = std::expm1(a * t) / denom;
  }
  out.front() = 0.0;
  out.back() = 1.0;
  return Warp(std::move(out));
}

Warp synth_warp(std::size_t size, std::uint64_t seed, WarpKind kind, double strength) {
  if (!(strength > 0.0 && strength < 1.0)) {
    throw std::invalid_argument("synth_warp: strength must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  switch (kind) {
    case WarpKind::fast_slow:
      return exponential_warp(size, 5.0 * strength);
    case WarpKind::slow_fast:
      return exponential_warp(size, -5.0 * strength);
    case WarpKind::stop_and_go:
      return stop_and_go(size, rng, strength);
    case WarpKind::smooth:
      return smooth_warp(size, rng, strength);
    case WarpKind::mixed: {
      const double a = 5.0 * strength * uniform(rng, 0.2, 1.0);
      return exponential_warp(size, uniform(rng, 0.0, 1.0) < 0.5 ? a : -a);
    }
  }
  throw std::invalid_argument("synth_warp: unknown kind");
}

Trajectory random_trajectory(const ManifoldPtr& manifold, std::size_t size, std::mt19937_64& rng) {
  std::vector<Point> points;
  points.reserve(size);
  const auto grid = uniform_grid(size);
  switch (manifold->kind()) {
    case ManifoldKind::sphere: {
      Eigen::Vector3d p0;
      do {
        p0 << uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1);
      } while (p0.norm() < 0.1 || p0.norm() > 1.0 || p0.z() / p0.norm() < 0.3);
      p0.normalize();
      const Eigen::MatrixXd basis = manifold->tangent_basis(p0);
      const double heading = uniform(rng, 0.0, 2.0 * kPi);
      const Eigen::Vector3d e1 = std::cos(heading) * basis.col(0) + std::sin(heading) * basis.col(1);
      const Eigen::Vector3d e2 = -std::sin(heading) * basis.col(0) + std::cos(heading) * basis.col(1);
      const double length = uniform(rng, 0.8, 1.5);
      // snake across the drift plus a surge along it, so speed and turning both vary
      const double sway = uniform(rng, 0.15, 0.3) * (uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0);
      const double surge = uniform(rng, 0.05, 0.12);
      const double ripple = uniform(rng, 0.03, 0.08);
      const std::array<double, 3> phase{uniform(rng, 0.0, 2.0 * kPi), uniform(rng, 0.0, 2.0 * kPi),
                                        uniform(rng, 0.0, 2.0 * kPi)};
      for (const double t : grid) {
        const Eigen::Vector3d v = ((t - 0.5) * length + surge * std::sin(3.0 * kPi * t + phase[1])) * e1 +
                                  (sway * std::sin(2.0 * kPi * t + phase[0]) +
                                   ripple * std::sin(5.0 * kPi * t + phase[2])) * e2;
        points.push_back(Point{manifold->exp_coords(p0, v)});
      }
      break;
    }
    case ManifoldKind::se2: {
      const double theta0 = uniform(rng, -kPi, kPi);
      const double omega = uniform(rng, 0.5, 1.5) * (uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0);
      const Eigen::Vector2d x0(uniform(rng, -1, 1), uniform(rng, -1, 1));
      const double dir = uniform(rng, 0.0, 2.0 * kPi);
      const Eigen::Vector2d drift = uniform(rng, 1.0, 2.0) * Eigen::Vector2d(std::cos(dir), std::sin(dir));
      const std::array<double, 2> ct{uniform(rng, -0.2, 0.2), uniform(rng, -0.1, 0.1)};
      const std::array<Eigen::Vector2d, 2> cx{
          Eigen::Vector2d(uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1)),
          Eigen::Vector2d(uniform(rng, -0.05, 0.05), uniform(rng, -0.05, 0.05))};
      for (const double t : grid) {
        double theta = theta0 + omega * t;
        Eigen::Vector2d x = x0 + t * drift;
        for (std::size_t k = 0; k < 2; ++k) {
          theta += ct[k] * std::sin((k + 1) * kPi * t);
          x += cx[k] * std::sin((k + 1) * kPi * t);
        }
        points.push_back(SE2::make_point(theta, x.x(), x.y()));
      }
      break;
    }
    case ManifoldKind::qsphere: {
      const int n = static_cast<const QSphere&>(*manifold).points();
      std::array<std::array<double, 4>, 3> coef{};  // order, start amp, end amp, phase
      for (std::size_t m = 0; m < coef.size(); ++m) {
        coef[m] = {static_cast<double>(m + 2), uniform(rng, -0.12, 0.12), uniform(rng, -0.12, 0.12),
                   uniform(rng, 0.0, 2.0 * kPi)};
      }
      for (const double t : grid) {
        std::vector<std::array<double, 3>> modes;
        for (const auto& [order, a0, a1, phase] : coef) {
          modes.push_back({order, (1.0 - t) * a0 + t * a1 + 0.02 * std::sin(kPi * t), phase + 0.3 * t});
        }
        points.push_back(q_function(radial_curve(modes, n), n));
      }
      break;
    }
  }
  return Trajectory(manifold, std::move(points));
}

Dataset warped_copies(const Trajectory& base, std::size_t n, WarpKind kind, double strength,
                      std::uint64_t seed) {
  Dataset out;
  out.manifold = base.manifold_ptr();
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = strength * uniform(rng, 0.3, 1.0);
    const Warp gamma = synth_warp(base.size(), derive_seed(seed, i), kind, s);
    out.trajectories.push_back(warp_trajectory(base, gamma));
    out.ids.push_back("copy" + std::to_string(i));
  }
  out.notes.push_back("warped copies of one trajectory, warp kind " + std::string(to_string(kind)));
  return out;
}

Dataset traffic_dataset(std::size_t size, std::uint64_t seed, WarpKind kind, double strength,
                        double translation_weight) {
  Dataset out;
  out.manifold = std::make_shared<SE2>(translation_weight);
  std::mt19937_64 rng(seed);
  struct Plan {
    const char* label;
    int turn;  // +1 left, -1 right, 0 straight
    std::size_t count;
  };
  const std::array<Plan, 3> plans{{{"right", -1, 5}, {"straight", 0, 5}, {"left", 1, 4}}};
  std::size_t index = 0;
  for (const auto& plan : plans) {
    for (std::size_t c = 0; c < plan.count; ++c, ++index) {
      // long queueing approach, short exit before leaving the frame
      const double approach = uniform(rng, 3.6, 4.4);
      const double exit = uniform(rng, 0.18, 0.22);
      const double radius = plan.turn < 0 ? uniform(rng, 0.4, 0.6) : uniform(rng, 0.8, 1.0);
      const double x0 = uniform(rng, -0.1, 0.1);
      const double arc = plan.turn == 0 ? 0.7 * kPi / 2.0 : radius * kPi / 2.0;
      const double total = approach + arc + exit;
      const double heading0 = kPi / 2.0;
      const double sigma = plan.turn;
      auto pose = [&](double s) -> Point {
        Eigen::Vector2d p(x0, -approach);
        if (s <= approach || plan.turn == 0) {
          return SE2::make_point(heading0, x0, -approach + s);
        }
        p = Eigen::Vector2d(x0, 0.0);
        const double turned = std::min(s - approach, arc) / radius;
        const double theta = heading0 + sigma * turned;
        p += sigma * radius *
             Eigen::Vector2d(std::sin(theta) - std::sin(heading0), -std::cos(theta) + std::cos(heading0));
        const double rest = std::max(0.0, s - approach - arc);
        p += rest * Eigen::Vector2d(std::cos(theta), std::sin(theta));
        return SE2::make_point(theta, p.x(), p.y());
      };
      const Warp gamma = synth_warp(size, derive_seed(seed, index), kind, strength);
      std::vector<Point> points;
      points.reserve(size);
      for (std::size_t i = 0; i < size; ++i) points.push_back(pose(total * gamma[i]));
      out.trajectories.emplace_back(out.manifold, std::move(points));
      out.ids.push_back(std::string(plan.label) + std::to_string(c + 1));
      out.labels.emplace_back(plan.label);
    }
  }
  out.notes.push_back("synthetic intersection tracks, warp kind " + std::string(to_string(kind)));
  return out;
}

Dataset migration_dataset(std::size_t n, std::size_t size, std::uint64_t seed, double strength) {
  Dataset out;
  out.manifold = std::make_shared<Sphere>();
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double lat0 = 48.0 + uniform(rng, -4.0, 4.0);
    const double lon0 = -108.0 + uniform(rng, -6.0, 6.0);
    const double lat1 = -28.0 + uniform(rng, -4.0, 4.0);
    const double lon1 = -62.0 + uniform(rng, -5.0, 5.0);
    const double bow = 12.0 + uniform(rng, -3.0, 3.0);
    const double wobble = uniform(rng, -2.0, 2.0);
    const Warp gamma = synth_warp(size, derive_seed(seed, i), WarpKind::mixed, strength);
    std::vector<Point> points;
    points.reserve(size);
    for (std::size_t k = 0; k < size; ++k) {
      const double u = gamma[k];
      const double lat = (1.0 - u) * lat0 + u * lat1 + wobble * std::sin(2.0 * kPi * u);
      const double lon = (1.0 - u) * lon0 + u * lon1 + bow * std::sin(kPi * u);
      points.push_back(from_geographic(lat, lon));
    }
    out.trajectories.emplace_back(out.manifold, std::move(points));
    out.ids.push_back("track" + std::to_string(i));
  }
  out.notes.push_back("synthetic migration tracks");
  return out;
}

std::vector<ContourSequence> contour_sequences(std::size_t classes, std::size_t per_class,
                                               std::size_t frames, std::uint64_t seed,
                                               WarpKind kind, double strength) {
  // Deformation programs: mode amplitudes as functions of progress u in [0, 1].
  using Program = std::vector<std::array<double, 3>> (*)(double);
  static constexpr std::array<Program, 6> programs{
      [](double u) { return std::vector<std::array<double, 3>>{{2, 0.35 * std::sin(kPi * u), 0}}; },
      [](double u) { return std::vector<std::array<double, 3>>{{3, 0.05 + 0.25 * u, 0.3}}; },
      [](double u) { return std::vector<std::array<double, 3>>{{2, 0.2, kPi * u}}; },
      [](double u) {
        return std::vector<std::array<double, 3>>{{2, 0.25 * u, 0.0}, {4, 0.15 * (1.0 - u), 0.5}};
      },
      [](double u) {
        return std::vector<std::array<double, 3>>{{4, 0.05 + 0.15 * std::sin(0.5 * kPi * u), 0.0},
                                                  {2, 0.1 * u, 1.0}};
      },
      [](double u) {
        return std::vector<std::array<double, 3>>{{3, 0.2 * std::sin(kPi * u), 0.0}, {2, 0.12, 0.8 * u}};
      },
  };
  std::mt19937_64 rng(seed);
  std::vector<ContourSequence> out;
  std::size_t index = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    const Program program = programs[c % programs.size()];
    for (std::size_t k = 0; k < per_class; ++k, ++index) {
      const double gain = uniform(rng, 0.85, 1.15);
      const double extra_amp = uniform(rng, 0.0, 0.03);
      const double extra_phase = uniform(rng, 0.0, 2.0 * kPi);
      const double scale = uniform(rng, 0.5, 2.0);
      const Eigen::Vector2d shift(uniform(rng, -3, 3), uniform(rng, -3, 3));
      const Warp gamma = synth_warp(frames, derive_seed(seed, index), kind, strength);
      ContourSequence seq;
      seq.id = "c" + std::to_string(c) + "_" + std::to_string(k);
      seq.label = "class" + std::to_string(c);
      for (std::size_t f = 0; f < frames; ++f) {
        auto modes = program(gamma[f]);
        for (auto& m : modes) m[1] *= gain;
        modes.push_back({5, extra_amp, extra_phase});
        PlanarCurve curve = radial_curve(modes, 120);
        curve.samples = (scale * curve.samples).colwise() + shift;
        seq.frames.push_back(std::move(curve));
      }
      out.push_back(std::move(seq));
    }
  }
  return out;
}

}  // namespace mwarp
