#include "mwarp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace mwarp {
namespace {


std::vector<std::size_t> subsample(std::size_t steps, std::size_t m) {
  if (m == 0) m = steps;
  if (m < 2 || m > steps) throw std::invalid_argument("fit_model: need 2 <= m <= T");
  std::vector<std::size_t> idx(m);
  for (std::size_t j = 0; j < m; ++j) {
    idx[j] = static_cast<std::size_t>(std::llround(static_cast<double>(j) *
                                                   static_cast<double>(steps - 1) /
                                                   static_cast<double>(m - 1)));
  }
  return idx;
}

}  // namespace

void refresh_factors(GaussianModel& model) {
  model.cholesky.clear();
  model.log_normalizer.clear();
  for (const auto& cov : model.covariance) {
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("model covariance is not positive definite");
    }
    const Eigen::MatrixXd lower = llt.matrixL();
    const double log_det = 2.0 * lower.diagonal().array().log().sum();
    model.cholesky.push_back(lower);
    model.log_normalizer.push_back(
        -0.5 * (static_cast<double>(cov.rows()) * std::log(2.0 * std::numbers::pi) + log_det));
  }
}

GaussianModel fit_model(const Trajectory& mean, const CrossSectionalStats& stats,
                        std::size_t training_count, std::size_t m) {
  if (training_count < 2) throw InsufficientDataError("fit_model: need at least 2 training trajectories");
  if (stats.covariance.size() != mean.size()) throw std::invalid_argument("fit_model: stats/mean size mismatch");
  GaussianModel model;
  model.manifold = mean.manifold_ptr();
  model.training_count = training_count;
  for (const std::size_t k : subsample(mean.size(), m)) {
    const Eigen::MatrixXd& cov = stats.covariance[k];
    const double d = static_cast<double>(cov.rows());
    const double eps = std::max(1e-6, 1e-3 * stats.rho[k] / d);
    model.times.push_back(mean.time(k));
    model.mean.push_back(mean[k]);
    model.basis.push_back(stats.basis[k]);
    model.covariance.push_back(cov + eps * Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
    model.epsilon.push_back(eps);
  }
  refresh_factors(model);
  return model;
}

GaussianModel fit_model(const KarcherSummary& summary, std::size_t m) {
  return fit_model(summary.mean, summary.stats, summary.aligned.size(), m);
}

GaussianModel fit_model(const PointwiseSummary& summary, std::size_t training_count, std::size_t m) {
  return fit_model(summary.mean, summary.stats, training_count, m);
}

Eigen::MatrixXd model_coordinates(const GaussianModel& model, const Trajectory& alpha) {
  const auto& mf = *model.manifold;
  Eigen::MatrixXd coords(model.dim(), static_cast<Eigen::Index>(model.size()));
  for (std::size_t j = 0; j < model.size(); ++j) {
    const Point p = alpha.at(model.times[j]);
    Eigen::VectorXd v;
    try {
      v = mf.log_coords(model.mean[j].coords, p.coords);
    } catch (const CutLocusError& e) {
      throw CutLocusError(e.what(), j);
    }
    coords.col(static_cast<Eigen::Index>(j)) =
        model.basis[j].transpose() * mf.metric_weights().asDiagonal() * v;
  }
  return coords;
}

double log_density_coords(const GaussianModel& model, const Eigen::MatrixXd& coords) {
  double total = 0.0;
  for (std::size_t j = 0; j < model.size(); ++j) {
    const Eigen::VectorXd z = model.cholesky[j].triangularView<Eigen::Lower>().solve(
        coords.col(static_cast<Eigen::Index>(j)));
    total += model.log_normalizer[j] - 0.5 * z.squaredNorm();
  }
  return total;
}

double log_density(const GaussianModel& model, const Trajectory& alpha) {
  return log_density_coords(model, model_coordinates(model, alpha));
}

double log_density_peak(const GaussianModel& model) {
  double total = 0.0;
  for (const double v : model.log_normalizer) total += v;
  return total;
}

Eigen::MatrixXd sample_coordinates(const GaussianModel& model, std::uint64_t seed) {
  const auto& mf = *model.manifold;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd coords(model.dim(), static_cast<Eigen::Index>(model.size()));
  for (std::size_t j = 0; j < model.size(); ++j) {
    bool accepted = false;
    for (int attempt = 0; attempt <= 10 && !accepted; ++attempt) {
      Eigen::VectorXd z(model.dim());
      for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(rng);
      const Eigen::VectorXd c = model.cholesky[j].triangularView<Eigen::Lower>() * z;
      if (mf.within_injectivity(model.mean[j].coords, model.basis[j] * c)) {
        coords.col(static_cast<Eigen::Index>(j)) = c;
        accepted = true;
      }
    }
    if (!accepted) throw CutLocusError("sample: draws keep leaving the injectivity domain", j);
  }
  return coords;
}

Trajectory sample(const GaussianModel& model, std::uint64_t seed) {
  const auto& mf = *model.manifold;
  const Eigen::MatrixXd coords = sample_coordinates(model, seed);
  std::vector<Point> points;
  points.reserve(model.size());
  for (std::size_t j = 0; j < model.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    points.push_back(Point{mf.exp_coords(model.mean[j].coords, model.basis[j] * coords.col(jj))});
  }
  return Trajectory(model.manifold, std::move(points));
}

std::vector<double> sample_log_densities(const GaussianModel& model, std::size_t count,
                                         std::uint64_t seed, Execution exec) {
  std::vector<double> out(count);
  for_each_index(count, exec, [&](std::size_t i) {
    out[i] = log_density_coords(model, sample_coordinates(model, derive_seed(seed, i)));
  });
  return out;
}

double p_value_from_draws(std::vector<double> draws, double log_density) {
  if (draws.empty()) throw std::invalid_argument("p_value: no draws");
  const auto below = std::count_if(draws.begin(), draws.end(),
                                   [log_density](double x) { return x < log_density; });
  return static_cast<double>(below) / static_cast<double>(draws.size());
}

double p_value(const GaussianModel& model, const Trajectory& alpha, std::size_t draws,
               std::uint64_t seed, Execution exec) {
  if (draws < 100) throw std::invalid_argument("p_value: need at least 100 draws");
  return p_value_from_draws(sample_log_densities(model, draws, seed, exec), log_density(model, alpha));
}

}  // namespace mwarp
