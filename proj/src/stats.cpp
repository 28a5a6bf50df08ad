#include "mwarp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "mwarp/registration.hpp"

namespace mwarp {
namespace {

void require_uniform(std::span<const Trajectory> trajectories, std::size_t min_count) {
  if (trajectories.size() < min_count) {
    throw InsufficientDataError("need at least " + std::to_string(min_count) + " trajectories");
  }
  const auto kind = trajectories.front().manifold().kind();
  const auto size = trajectories.front().size();
  for (const auto& t : trajectories) {
    if (t.manifold().kind() != kind || t.size() != size) {
      throw std::invalid_argument("trajectories must share manifold and grid size");
    }
  }
}

// Orthonormal (Euclidean) completion of `columns` inside the complement of
// `normal`, filling columns whose current entries are unusable.
void complete_basis(Eigen::MatrixXd& columns, Eigen::Index usable, const Eigen::VectorXd& normal) {
  const Eigen::Index dim = columns.rows();
  Eigen::Index candidate = 0;
  for (Eigen::Index c = usable; c < columns.cols(); ++c) {
    for (; candidate < dim; ++candidate) {
      Eigen::VectorXd x = Eigen::VectorXd::Unit(dim, candidate);
      for (int pass = 0; pass < 2; ++pass) {
        x -= x.dot(normal) * normal;
        for (Eigen::Index k = 0; k < c; ++k) x -= x.dot(columns.col(k)) * columns.col(k);
      }
      const double len = x.norm();
      if (len > 0.5) {
        columns.col(c) = x / len;
        ++candidate;
        break;
      }
    }
  }
}

// Basis for the q-sphere: principal subspace of the whitened shooting vectors.
Eigen::MatrixXd principal_basis(const Manifold& m, const Eigen::VectorXd& base,
                                const Eigen::MatrixXd& shooting, Eigen::Index rank) {
  const Eigen::VectorXd root = m.metric_weights().cwiseSqrt();
  const Eigen::MatrixXd white = root.asDiagonal() * shooting;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(white, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const double cutoff = 1e-12 * std::max(sigma.size() > 0 ? sigma(0) : 0.0, 1e-300);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(white.rows(), rank);
  Eigen::Index usable = 0;
  for (; usable < rank && usable < sigma.size() && sigma(usable) > cutoff; ++usable) {
    p.col(usable) = svd.matrixU().col(usable);
  }
  const Eigen::VectorXd normal = (root.asDiagonal() * base).normalized();
  complete_basis(p, usable, normal);
  return root.cwiseInverse().asDiagonal() * p;
}

}  // namespace

Point karcher_mean_points(const Manifold& manifold, std::span<const Point> points,
                          const KarcherPointOptions& options) {
  if (points.empty()) throw InsufficientDataError("karcher_mean_points: no points");
  // Start from the sample medoid: a far-off first sample can sit in the cut
  // locus of another sample.
  std::size_t start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size() && points.size() > 2; ++k) {
    double total = 0.0;
    for (const auto& q : points) total += std::pow(manifold.dist(points[k], q), 2);
    if (total < best) {
      best = total;
      start = k;
    }
  }
  Eigen::VectorXd p = points[start].coords;
  const double n = static_cast<double>(points.size());
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
    for (const auto& q : points) grad += manifold.log_coords(p, q.coords);
    grad /= n;
    if (manifold.norm_coords(grad) <= options.gradient_tolerance) return Point{p};
    p = manifold.exp_coords(p, options.step * grad);
  }
  throw NoConvergenceError("karcher_mean_points: no convergence after " +
                           std::to_string(options.max_iterations) + " iterations");
}

Point resolve_reference(const ReferencePolicy& policy, std::span<const Trajectory> trajectories) {
  switch (policy.mode) {
    case ReferenceMode::fixed:
      if (!policy.point) throw std::invalid_argument("fixed reference point is missing");
      return *policy.point;
    case ReferenceMode::start_mean: {
      if (trajectories.empty()) throw InsufficientDataError("no trajectories for start-mean");
      std::vector<Point> starts;
      starts.reserve(trajectories.size());
      for (const auto& t : trajectories) starts.push_back(t[0]);
      return karcher_mean_points(trajectories.front().manifold(), starts);
    }
    case ReferenceMode::manifold_default:
      if (trajectories.empty()) throw InsufficientDataError("no trajectories for default reference");
      return trajectories.front().manifold().default_reference();
  }
  throw std::invalid_argument("unknown reference mode");
}

CrossSectionalStats cross_sectional_stats(const Trajectory& mean,
                                          std::span<const Trajectory> aligned,
                                          Execution exec) {
  require_uniform(aligned, 2);
  if (aligned.front().size() != mean.size()) {
    throw std::invalid_argument("cross_sectional_stats: grid size mismatch");
  }
  const auto& m = mean.manifold();
  const std::size_t steps = mean.size();
  const auto count = static_cast<Eigen::Index>(aligned.size());
  const bool principal = m.kind() == ManifoldKind::qsphere;
  const Eigen::Index dim = principal ? std::min<Eigen::Index>(count - 1, m.dim()) : m.dim();

  CrossSectionalStats out;
  out.basis.resize(steps);
  out.covariance.resize(steps);
  out.rho.resize(steps);
  out.modes.resize(steps);
  out.singular_values.resize(steps);

  for_each_index(steps, exec, [&](std::size_t t) {
    const auto& base = mean[t].coords;
    Eigen::MatrixXd shooting(m.ambient_dim(), count);
    for (Eigen::Index i = 0; i < count; ++i) {
      try {
        shooting.col(i) = m.log_coords(base, aligned[static_cast<std::size_t>(i)][t].coords);
      } catch (const CutLocusError& e) {
        throw CutLocusError(e.what(), t);
      }
    }
    Eigen::MatrixXd basis =
        principal ? principal_basis(m, base, shooting, dim) : m.tangent_basis(base);
    const Eigen::MatrixXd coords =
        basis.transpose() * m.metric_weights().asDiagonal() * shooting;
    Eigen::MatrixXd cov = coords * coords.transpose() / static_cast<double>(count - 1);
    cov = 0.5 * (cov + cov.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::Index d = cov.rows();
    Eigen::MatrixXd u(d, d);
    Eigen::VectorXd s(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      u.col(k) = eig.eigenvectors().col(d - 1 - k);
      s(k) = std::max(eig.eigenvalues()(d - 1 - k), 0.0);
    }
    out.rho[t] = cov.trace();
    out.basis[t] = std::move(basis);
    out.covariance[t] = std::move(cov);
    out.modes[t] = std::move(u);
    out.singular_values[t] = std::move(s);
  });
  return out;
}

double integrate(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("integrate: need at least 2 samples");
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc / static_cast<double>(values.size() - 1);
}

double dx(const Trajectory& alpha1, const Trajectory& alpha2) {
  if (alpha1.size() != alpha2.size() || alpha1.manifold().kind() != alpha2.manifold().kind()) {
    throw std::invalid_argument("dx: trajectories must share manifold and grid size");
  }
  std::vector<double> d(alpha1.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = alpha1.manifold().dist(alpha1[i], alpha2[i]);
  return integrate(d);
}

KarcherSummary karcher_mean_trajectories(std::span<const Trajectory> trajectories,
                                         const Point& reference, const KarcherOptions& options) {
  require_uniform(trajectories, 2);
  const auto& m = trajectories.front().manifold();
  const auto& manifold = trajectories.front().manifold_ptr();
  const std::size_t n = trajectories.size();

  std::vector<Point> starts;
  starts.reserve(n);
  for (const auto& t : trajectories) starts.push_back(t[0]);
  const Point start_mean = karcher_mean_points(m, starts);

  std::vector<Tsrvf> h;
  h.reserve(n);
  for (const auto& t : trajectories) h.push_back(compute_tsrvf(t, reference));

  // Medoid under the unaligned dh.
  std::size_t medoid = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = dh(h[k], h[i]);
      total += d * d;
    }
    if (total < best) {
      best = total;
      medoid = k;
    }
  }

  // One sweep against a candidate mean: align every input to it and score
  // E = sum of squared ds.
  struct Sweep {
    std::vector<Warp> warps;
    std::vector<Trajectory> aligned;
    std::vector<Tsrvf> aligned_h;
    double energy = 0.0;
  };
  auto sweep = [&](const Tsrvf& h_mu) {
    std::vector<std::optional<Warp>> warps(n);
    std::vector<std::optional<Trajectory>> aligned(n);
    std::vector<std::optional<Tsrvf>> aligned_h(n);
    std::vector<double> dist(n);
    for_each_index(n, options.exec, [&](std::size_t i) {
      AlignResult r = align_pair(h_mu, h[i]);
      dist[i] = std::min(r.distance, align_pair(h[i], h_mu).distance);
      Trajectory warped = warp_trajectory(trajectories[i], r.warp);
      aligned_h[i].emplace(compute_tsrvf(warped, reference));
      aligned[i].emplace(std::move(warped));
      warps[i].emplace(std::move(r.warp));
    });
    Sweep out;
    for (std::size_t i = 0; i < n; ++i) {
      out.warps.push_back(std::move(*warps[i]));
      out.aligned.push_back(std::move(*aligned[i]));
      out.aligned_h.push_back(std::move(*aligned_h[i]));
      out.energy += dist[i] * dist[i];
    }
    return out;
  };

  Trajectory mean = trajectories[medoid];
  Tsrvf h_mu = h[medoid];
  Sweep current = sweep(h_mu);
  std::vector<double> energy{current.energy};
  bool converged = current.energy == 0.0;
  int iterations = 0;

  while (!converged && iterations < options.max_iterations) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(h_mu.values().rows(), h_mu.values().cols());
    for (const auto& hi : current.aligned_h) sum += hi.values();
    Trajectory next_mean = reconstruct(start_mean, Tsrvf(manifold, reference, sum / static_cast<double>(n)));
    Tsrvf next_h = compute_tsrvf(next_mean, reference);
    Sweep next = sweep(next_h);
    if (next.energy > current.energy) {
      // Energy went up: the previous iterate is the best available.
      converged = true;
      break;
    }
    ++iterations;
    const double previous = current.energy;
    mean = std::move(next_mean);
    h_mu = std::move(next_h);
    current = std::move(next);
    energy.push_back(current.energy);
    converged = current.energy == 0.0 || (previous - current.energy) / previous < options.relative_tolerance;
  }

  CrossSectionalStats stats = cross_sectional_stats(mean, current.aligned, options.exec);
  return KarcherSummary{std::move(mean),          std::move(h_mu),  std::move(current.aligned),
                        std::move(current.warps), std::move(stats), std::move(energy),
                        medoid,                   iterations,       converged};
}

PointwiseSummary pointwise_summary(std::span<const Trajectory> trajectories, Execution exec) {
  require_uniform(trajectories, 2);
  const auto& m = trajectories.front().manifold();
  const std::size_t steps = trajectories.front().size();
  std::vector<Point> means(steps);
  for_each_index(steps, exec, [&](std::size_t t) {
    std::vector<Point> slice;
    slice.reserve(trajectories.size());
    for (const auto& a : trajectories) slice.push_back(a[t]);
    means[t] = karcher_mean_points(m, slice);
  });
  Trajectory mean(trajectories.front().manifold_ptr(), std::move(means));
  CrossSectionalStats stats = cross_sectional_stats(mean, trajectories, exec);
  return PointwiseSummary{std::move(mean), std::move(stats)};
}

}  // namespace mwarp
