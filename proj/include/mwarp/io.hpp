#pragma once

// Ingestion of geographic, hurricane, SE(2) and contour data, the dataset
// container, and CSV/JSON export of results. Formats are described with
// examples in docs/formats.md.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwarp/analysis.hpp"
#include "mwarp/dataset.hpp"
#include "mwarp/geometry.hpp"
#include "mwarp/model.hpp"
#include "mwarp/stats.hpp"
#include "mwarp/synth.hpp"

namespace mwarp {

inline constexpr std::string_view kSchema = "mwarp/1";

/// How an irregularly observed track is mapped onto [0, 1].
enum class TimeAxis { observation, arc_length };

TimeAxis parse_time_axis(std::string_view name);

/// Piecewise-geodesic resampling of observations (times[k], points[k]) to
/// `size` uniform samples. With TimeAxis::observation the times are
/// normalized to [0, 1]; with arc_length the cumulative geodesic length is.
/// Times must be strictly increasing.
Trajectory resample_track(const ManifoldPtr& manifold, std::span<const double> times,
                          std::span<const Point> points, std::size_t size, TimeAxis axis);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

// Timestamps ------------------------------------------------------------

/// Seconds since 1970-01-01 for "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS]" or
/// "YYYY-MM-DD HH:MM[:SS]"; a plain number is returned as is.
/// Throws std::invalid_argument on anything else.
double parse_timestamp(std::string_view text);

// Geographic tracks -------------------------------------------------------

/// CSV rows id,t,lat,lon[,label]; an optional header row is skipped.
/// Tracks with fewer than 4 observations are dropped.
Dataset read_geo_csv(std::istream& in, std::size_t size, TimeAxis axis = TimeAxis::observation);

// HURDAT2 -----------------------------------------------------------------

struct HurdatFix {
  int date = 0;  // YYYYMMDD
  int time = 0;  // HHMM
  std::string record;
  std::string status;
  double lat = 0.0;
  double lon = 0.0;
  int wind = 0;
  int pressure = 0;
  std::size_t line = 0;
};

struct HurdatStorm {
  std::string id;    // e.g. AL011851
  std::string name;
  std::vector<HurdatFix> fixes;
  std::size_t line = 0;
};

/// Header rows "AL011851, UNNAMED, 14," followed by that many data rows.
std::vector<HurdatStorm> parse_hurdat2(std::istream& in);

struct HurdatSelection {
  int after_date = 0;  // keep storms whose first fix is on or after YYYYMMDD
  std::size_t min_fixes = 20;
  std::size_t count = 0;  // 0 keeps every qualifying storm
};

/// Synoptic fixes only (00, 06, 12, 18 UTC); storms with at least
/// min_fixes such fixes, in file order.
std::vector<HurdatStorm> select_storms(const std::vector<HurdatStorm>& storms,
                                       const HurdatSelection& selection);

Dataset hurdat_dataset(const std::vector<HurdatStorm>& storms, std::size_t size,
                       TimeAxis axis = TimeAxis::observation);

/// Hours since 1970-01-01 of a fix.
double fix_hours(const HurdatFix& fix);

// SE(2) tracks --------------------------------------------------------------

/// CSV rows id,t,theta,x,y[,label] with theta in radians.
Dataset read_se2_csv(std::istream& in, std::size_t size, double translation_weight = 1.0,
                     TimeAxis axis = TimeAxis::observation);

// Contour sequences ---------------------------------------------------------

/// Text format: "# trajectory <id> [label]" starts a sequence; contours are
/// blocks of "x,y" rows separated by blank lines.
std::vector<ContourSequence> read_contours(std::istream& in);
void write_contours(std::ostream& out, std::span<const ContourSequence> sequences);

/// JSON variant {"schema", "sequences": [{"id", "label", "frames": [[[x,y],...],...]}]}.
std::vector<ContourSequence> read_contours_json(std::istream& in);
void write_contours_json(std::ostream& out, std::span<const ContourSequence> sequences);

/// q-function trajectories on the pre-shape sphere with n points per
/// contour. When size <= frames, the frame nearest to each uniform time is
/// kept; otherwise frames are geodesically interpolated. With
/// align_rotation each contour is rotated onto its predecessor.
Dataset contour_dataset(std::span<const ContourSequence> sequences, std::size_t size, int points,
                        bool align_rotation = false);

// Dataset container ---------------------------------------------------------

/// {"schema": "mwarp/1", "manifold", "T", "trajectories": [{"id", "label"?, "points"}], ...}.
/// Points: s2 [x,y,z]; se2 [theta,x,y]; qsphere [[qx,qy], ...].
void write_dataset_json(std::ostream& out, const Dataset& dataset);
/// Reads a container; a nonzero size different from the stored T resamples
/// every trajectory on uniform times.
Dataset read_dataset_json(std::istream& in, std::size_t size = 0);

/// Point encoding used by the container and by --ref-point fixed:...
std::vector<double> encode_point(const Manifold& manifold, const Point& p);
Point decode_point(const Manifold& manifold, std::span<const double> values);

// Result export -------------------------------------------------------------

void write_matrix_csv(std::ostream& out, const DistanceMatrix& dm);
DistanceMatrix read_matrix_csv(std::istream& in);

/// Columns t, then one column per warp.
void write_warps_csv(std::ostream& out, std::span<const Warp> warps,
                     std::span<const std::string> ids);

void write_rho_csv(std::ostream& out, std::span<const double> rho_unaligned,
                   std::span<const double> rho_aligned);

/// Per time: top-two standard deviations and principal directions in
/// ambient coordinates.
void write_ellipses_csv(std::ostream& out, const CrossSectionalStats& stats);

void write_dendrogram_json(std::ostream& out, const Dendrogram& dendrogram,
                           std::span<const std::string> ids);

void write_model_json(std::ostream& out, const GaussianModel& model);
GaussianModel read_model_json(std::istream& in);

// Files ---------------------------------------------------------------------

/// Opens a file for reading or writing; throws IoError on failure.
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace mwarp
