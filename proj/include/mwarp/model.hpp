#pragma once

// Gaussian-type trajectory model: at each of m grid times t_j the shooting
// vector v(t_j) = log(mu(t_j), alpha(t_j)) is modeled as N(0, K(t_j)),
// independently across times. The joint log-density is the sum over j.

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "mwarp/parallel.hpp"
#include "mwarp/seed.hpp"
#include "mwarp/stats.hpp"

namespace mwarp {

struct GaussianModel {
  ManifoldPtr manifold;
  std::vector<double> times;                // t_j
  std::vector<Point> mean;                  // mu(t_j)
  std::vector<Eigen::MatrixXd> basis;       // ambient x d
  std::vector<Eigen::MatrixXd> covariance;  // regularized, d x d
  std::vector<double> epsilon;              // regularization added at t_j
  std::size_t training_count = 0;
  // Derived by refresh_factors(): lower Cholesky factors and Gaussian
  // log-normalizers of the covariances.
  std::vector<Eigen::MatrixXd> cholesky;
  std::vector<double> log_normalizer;

  std::size_t size() const noexcept { return times.size(); }
  Eigen::Index dim() const noexcept { return covariance.empty() ? 0 : covariance.front().rows(); }
};

/// Recomputes the derived Cholesky data after the covariances change.
void refresh_factors(GaussianModel& model);

/// Subsamples the grid to m times and regularizes K(t_j) + eps I with
/// eps = max(1e-6, 1e-3 rho(t_j) / d). m = 0 keeps the full grid.
GaussianModel fit_model(const Trajectory& mean, const CrossSectionalStats& stats,
                        std::size_t training_count, std::size_t m = 0);
GaussianModel fit_model(const KarcherSummary& summary, std::size_t m = 0);
GaussianModel fit_model(const PointwiseSummary& summary, std::size_t training_count,
                        std::size_t m = 0);

/// Tangent coordinates of alpha(t_j) in the model bases (d x m).
Eigen::MatrixXd model_coordinates(const GaussianModel& model, const Trajectory& alpha);

double log_density(const GaussianModel& model, const Trajectory& alpha);
/// Log-density from tangent coordinates (d x m) directly.
double log_density_coords(const GaussianModel& model, const Eigen::MatrixXd& coords);

/// Sum over j of log N(0; 0, K(t_j)); the maximum of the log-density.
double log_density_peak(const GaussianModel& model);

/// Tangent coordinates of one model draw; draws that leave the injectivity
/// domain are redrawn up to 10 times, then CutLocusError.
Eigen::MatrixXd sample_coordinates(const GaussianModel& model, std::uint64_t seed);

/// One trajectory drawn from the model (m points on the uniform grid).
Trajectory sample(const GaussianModel& model, std::uint64_t seed);

/// Log-densities of draws 0..count-1; draw i uses derive_seed(seed, i), so
/// results do not depend on the number of worker threads.
std::vector<double> sample_log_densities(const GaussianModel& model, std::size_t count,
                                         std::uint64_t seed, Execution exec = Execution::parallel);

/// Parametric bootstrap: fraction of N model draws with log P(X) < log P(alpha).
double p_value(const GaussianModel& model, const Trajectory& alpha, std::size_t draws,
               std::uint64_t seed, Execution exec = Execution::parallel);

/// p-value of a log-density against a precomputed set of draw log-densities.
double p_value_from_draws(std::vector<double> draw_log_densities, double log_density);

}  // namespace mwarp
