#include "mwarp/cli.hpp"

#include <charconv>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mwarp/analysis.hpp"
#include "mwarp/io.hpp"
#include "mwarp/model.hpp"
#include "mwarp/registration.hpp"
#include "mwarp/stats.hpp"
#include "mwarp/synth.hpp"

namespace mwarp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  std::string manifold;
  std::size_t grid = 100;
  bool grid_set = false;
  std::string ref_point = "default";
  std::uint64_t seed = 1;
  std::string out = ".";
  double se2_weight = 1.0;
  int contour_points = kDefaultContourPoints;
  bool serial = false;

  Execution exec() const { return serial ? Execution::serial : Execution::parallel; }
  fs::path path(const std::string& name) const { return fs::path(out) / name; }
};

std::string validate_ref_point(const std::string& s) {
  if (s == "default" || s == "start-mean") return {};
  if (s.rfind("fixed:", 0) != 0) return "expected default, start-mean or fixed:<coords>";
  std::stringstream ss(s.substr(6));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      std::stod(item, &used);
      if (used != item.size()) return "bad coordinate '" + item + "'";
    } catch (const std::exception&) {
      return "bad coordinate '" + item + "'";
    }
  }
  return {};
}

Point reference_point(const Globals& g, const Dataset& data) {
  ReferencePolicy policy;
  if (g.ref_point == "start-mean") {
    policy.mode = ReferenceMode::start_mean;
  } else if (g.ref_point.rfind("fixed:", 0) == 0) {
    std::vector<double> values;
    std::stringstream ss(g.ref_point.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
    policy.mode = ReferenceMode::fixed;
    try {
      policy.point = decode_point(*data.manifold, values);
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("--ref-point: ") + e.what(), 1);
    }
  }
  return resolve_reference(policy, data.trajectories);
}

Dataset load_dataset(const Globals& g, const std::string& path) {
  auto in = open_input(path);
  Dataset data = read_dataset_json(in, g.grid_set ? g.grid : 0);
  if (!g.manifold.empty() && parse_manifold_kind(g.manifold) != data.manifold->kind()) {
    throw Error("dataset is on " + std::string(to_string(data.manifold->kind())) + ", not " + g.manifold);
  }
  return data;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(1) << '\n';
}

template <class Writer>
void write_file(const fs::path& path, Writer writer) {
  auto out = open_output(path);
  writer(out);
}

DistanceMatrix matrix_for(const Globals& g, const Dataset& data, const std::string& metric,
                          const std::string& matrix_path) {
  if (!matrix_path.empty()) {
    auto in = open_input(matrix_path);
    DistanceMatrix dm = read_matrix_csv(in);
    dm.metric = parse_metric(metric);
    if (dm.ids != data.ids) throw Error("matrix ids do not match the dataset");
    return dm;
  }
  return distance_matrix(data.trajectories, parse_metric(metric), reference_point(g, data), g.exec(),
                         data.ids);
}

std::size_t find_trajectory(const Dataset& data, const std::string& key) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.ids[i] == key) return i;
  }
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
  if (ec == std::errc() && ptr == key.data() + key.size() && idx < data.size()) return idx;
  throw Error("no trajectory '" + key + "' in dataset");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elastic registration and statistics of manifold-valued trajectories", "mwarp"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  const std::vector<std::string> manifolds{"s2", "se2", "qsphere"};
  const std::vector<std::string> metrics{"dh", "ds", "dx"};
  app.add_option("--manifold", g.manifold, "Geometry: s2, se2 or qsphere")->check(CLI::IsMember(manifolds));
  auto* grid_opt = app.add_option("--grid", g.grid, "Number of uniform samples T")->check(CLI::Range(3, 100000));
  app.add_option("--ref-point", g.ref_point, "TSRVF reference: default, start-mean or fixed:<coords>")
      ->check(CLI::Validator(validate_ref_point, "REF"));
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--se2-weight", g.se2_weight, "SE(2) translation weight")->check(CLI::PositiveNumber);
  app.add_option("--contour-points", g.contour_points, "Samples per contour")->check(CLI::Range(8, 100000));
  app.add_flag("--serial", g.serial, "Run kernels single-threaded");

  std::function<void()> run;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Convert raw tracks into a dataset container");
  std::string in_path, format, time_axis = "observation";
  int after_date = 0;
  std::size_t min_fixes = 20, storm_count = 0;
  bool align_rotation = false;
  ingest->add_option("--input", in_path, "Input file")->required();
  ingest->add_option("--format", format, "geo-csv, hurdat2, se2-csv, contours, contours-json or json")
      ->required()
      ->check(CLI::IsMember({"geo-csv", "hurdat2", "se2-csv", "contours", "contours-json", "json"}));
  ingest->add_option("--time-axis", time_axis, "observation or arc-length")
      ->check(CLI::IsMember({"observation", "arc-length"}));
  ingest->add_option("--after", after_date, "HURDAT2: first fix on or after YYYYMMDD");
  ingest->add_option("--min-fixes", min_fixes, "HURDAT2: minimum synoptic fixes");
  ingest->add_option("--count", storm_count, "HURDAT2: number of storms (0 = all)");
  ingest->add_flag("--align-rotation", align_rotation, "Contours: rotate each contour onto its predecessor");
  ingest->callback([&] {
    run = [&] {
      const TimeAxis axis = parse_time_axis(time_axis);
      auto in = open_input(in_path);
      Dataset data;
      ManifoldKind expected = ManifoldKind::sphere;
      if (format == "geo-csv") {
        data = read_geo_csv(in, g.grid, axis);
      } else if (format == "hurdat2") {
        const auto storms = select_storms(parse_hurdat2(in), {after_date, min_fixes, storm_count});
        if (storms.empty()) throw EmptyTrackError("no storm matches the selection");
        data = hurdat_dataset(storms, g.grid, axis);
      } else if (format == "se2-csv") {
        expected = ManifoldKind::se2;
        data = read_se2_csv(in, g.grid, g.se2_weight, axis);
      } else if (format == "contours" || format == "contours-json") {
        expected = ManifoldKind::qsphere;
        const auto seqs = format == "contours" ? read_contours(in) : read_contours_json(in);
        data = contour_dataset(seqs, g.grid, g.contour_points, align_rotation);
      } else {
        data = read_dataset_json(in, g.grid_set ? g.grid : 0);
        expected = data.manifold->kind();
      }
      if (!g.manifold.empty() && parse_manifold_kind(g.manifold) != expected) {
        throw Error("format " + format + " produces " + std::string(to_string(expected)) + " data");
      }
      write_file(g.path("dataset.json"), [&](std::ostream& o) { write_dataset_json(o, data); });
      out << "ingested " << data.size() << " trajectories on " << to_string(data.manifold->kind())
          << " with T=" << data.grid() << '\n';
    };
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic dataset");
  std::string sim_kind, warp_kind = "stop-and-go";
  double strength = 0.5;
  std::size_t sim_count = 20, classes = 4, per_class = 10, frames = 80;
  simulate->add_option("--kind", sim_kind, "copies, traffic, migration or contours")
      ->required()
      ->check(CLI::IsMember({"copies", "traffic", "migration", "contours"}));
  simulate->add_option("--warp", warp_kind, "fast-slow, slow-fast, stop-and-go, smooth or mixed")
      ->check(CLI::IsMember({"fast-slow", "slow-fast", "stop-and-go", "smooth", "mixed"}));
  simulate->add_option("--strength", strength, "Warp strength in (0, 1)")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  simulate->add_option("--count", sim_count, "Trajectories (copies, migration)")->check(CLI::Range(1, 100000));
  simulate->add_option("--classes", classes, "Contour classes")->check(CLI::Range(1, 6));
  simulate->add_option("--per-class", per_class, "Contour sequences per class")->check(CLI::Range(1, 10000));
  simulate->add_option("--frames", frames, "Contours per sequence")->check(CLI::Range(2, 100000));
  simulate->callback([&] {
    run = [&] {
      const WarpKind wk = parse_warp_kind(warp_kind);
      Dataset data;
      if (sim_kind == "copies") {
        GeometryOptions opts{g.se2_weight, g.contour_points};
        const auto m = make_manifold(parse_manifold_kind(g.manifold.empty() ? "s2" : g.manifold), opts);
        std::mt19937_64 rng(g.seed);
        const Trajectory base = random_trajectory(m, g.grid, rng);
        data = warped_copies(base, sim_count, wk, strength, derive_seed(g.seed, 1u << 20));
      } else if (sim_kind == "traffic") {
        data = traffic_dataset(g.grid, g.seed, wk, strength, g.se2_weight);
      } else if (sim_kind == "migration") {
        data = migration_dataset(sim_count, g.grid, g.seed, strength);
      } else {
        const auto seqs = contour_sequences(classes, per_class, frames, g.seed, wk, strength);
        write_file(g.path("contours.json"), [&](std::ostream& o) { write_contours_json(o, seqs); });
        data = contour_dataset(seqs, g.grid, g.contour_points);
      }
      write_file(g.path("dataset.json"), [&](std::ostream& o) { write_dataset_json(o, data); });
      out << "simulated " << data.size() << " trajectories on " << to_string(data.manifold->kind())
          << " with T=" << data.grid() << '\n';
    };
  });

  // register
  auto* reg = app.add_subcommand("register", "Align one trajectory to another");
  std::string first = "0", second = "1";
  reg->add_option("--input", in_path, "Dataset container")->required();
  reg->add_option("--first", first, "Id or index of the template trajectory");
  reg->add_option("--second", second, "Id or index of the trajectory to warp");
  reg->callback([&] {
    run = [&] {
      const Dataset data = load_dataset(g, in_path);
      const Point c = reference_point(g, data);
      const auto& a = data.trajectories[find_trajectory(data, first)];
      const auto& b = data.trajectories[find_trajectory(data, second)];
      const Tsrvf h1 = compute_tsrvf(a, c);
      const Tsrvf h2 = compute_tsrvf(b, c);
      const AlignResult r = align_pair(h1, h2);
      write_file(g.path("warp.csv"), [&](std::ostream& o) {
        o << "t,gamma\n";
        const auto grid = uniform_grid(r.warp.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
          o << format_double(grid[i]) << ',' << format_double(r.warp[i]) << '\n';
        }
      });
      json j;
      j["first"] = first;
      j["second"] = second;
      j["d_before"] = dh(h1, h2);
      j["d_after"] = r.distance;
      j["ds"] = ds(h1, h2);
      write_json(g.path("register.json"), j);
      out << "d_before " << format_double(j["d_before"].get<double>()) << " d_after "
          << format_double(r.distance) << '\n';
    };
  });

  // distmat
  auto* distmat = app.add_subcommand("distmat", "Pairwise distance matrix");
  std::string metric = "ds";
  distmat->add_option("--input", in_path, "Dataset container")->required();
  distmat->add_option("--metric", metric, "dh, ds or dx")->check(CLI::IsMember(metrics));
  distmat->callback([&] {
    run = [&] {
      const Dataset data = load_dataset(g, in_path);
      const DistanceMatrix dm = matrix_for(g, data, metric, {});
      write_file(g.path("distances.csv"), [&](std::ostream& o) { write_matrix_csv(o, dm); });
      out << "wrote " << dm.values.rows() << "x" << dm.values.cols() << " " << metric << " matrix\n";
    };
  });

  // mean
  auto* mean = app.add_subcommand("mean", "Karcher mean and cross-sectional statistics");
  KarcherOptions kopts;
  mean->add_option("--max-iter", kopts.max_iterations, "Iteration cap")->check(CLI::Range(1, 10000));
  mean->add_option("--tolerance", kopts.relative_tolerance, "Relative energy decrease to stop")
      ->check(CLI::PositiveNumber);
  mean->add_option("--input", in_path, "Dataset container")->required();
  mean->callback([&] {
    run = [&] {
      const Dataset data = load_dataset(g, in_path);
      kopts.exec = g.exec();
      const Point c = reference_point(g, data);
      const KarcherSummary s = karcher_mean_trajectories(data.trajectories, c, kopts);
      const PointwiseSummary base = pointwise_summary(data.trajectories, g.exec());
      Dataset mu;
      mu.manifold = data.manifold;
      mu.trajectories.push_back(s.mean);
      mu.ids.push_back("mean");
      mu.notes.push_back("Karcher mean of " + std::to_string(data.size()) + " trajectories");
      write_file(g.path("mean.json"), [&](std::ostream& o) { write_dataset_json(o, mu); });
      write_file(g.path("rho.csv"), [&](std::ostream& o) { write_rho_csv(o, base.stats.rho, s.stats.rho); });
      write_file(g.path("warps.csv"), [&](std::ostream& o) { write_warps_csv(o, s.warps, data.ids); });
      write_file(g.path("ellipses.csv"), [&](std::ostream& o) { write_ellipses_csv(o, s.stats); });
      json j;
      j["iterations"] = s.iterations;
      j["converged"] = s.converged;
      j["initial_index"] = s.initial_index;
      j["energy_trace"] = s.energy_trace;
      j["integrated_rho_unaligned"] = integrate(base.stats.rho);
      j["integrated_rho_aligned"] = integrate(s.stats.rho);
      write_json(g.path("summary.json"), j);
      out << "iterations " << s.iterations << " integrated rho unaligned "
          << format_double(j["integrated_rho_unaligned"].get<double>()) << " aligned "
          << format_double(j["integrated_rho_aligned"].get<double>()) << '\n';
    };
  });

  // model
  auto* model = app.add_subcommand("model", "Gaussian trajectory model");
  model->require_subcommand(1);
  std::size_t model_m = 0, sample_count = 10, draws = 1000;
  bool no_align = false;
  std::string model_path;
  auto* fit = model->add_subcommand("fit", "Fit the model to a dataset");
  fit->add_option("--input", in_path, "Dataset container")->required();
  fit->add_option("--m", model_m, "Number of model times (0 = full grid)");
  fit->add_flag("--no-align", no_align, "Fit to the unregistered pointwise statistics");
  fit->callback([&] {
    run = [&] {
      const Dataset data = load_dataset(g, in_path);
      GaussianModel gm;
      if (no_align) {
        gm = fit_model(pointwise_summary(data.trajectories, g.exec()), data.size(), model_m);
      } else {
        KarcherOptions o;
        o.exec = g.exec();
        gm = fit_model(karcher_mean_trajectories(data.trajectories, reference_point(g, data), o), model_m);
      }
      write_file(g.path("model.json"), [&](std::ostream& o) { write_model_json(o, gm); });
      out << "model with " << gm.size() << " times, dimension " << gm.dim() << '\n';
    };
  });
  auto* smp = model->add_subcommand("sample", "Draw trajectories from a model");
  smp->add_option("--model", model_path, "Model file")->required();
  smp->add_option("--count", sample_count, "Number of draws")->check(CLI::Range(1, 1000000));
  smp->callback([&] {
    run = [&] {
      auto in = open_input(model_path);
      const GaussianModel gm = read_model_json(in);
      Dataset data;
      data.manifold = gm.manifold;
      for (std::size_t i = 0; i < sample_count; ++i) {
        data.trajectories.push_back(sample(gm, derive_seed(g.seed, i)));
        data.ids.push_back("draw" + std::to_string(i));
      }
      data.notes.push_back("model draws, seed " + std::to_string(g.seed));
      write_file(g.path("samples.json"), [&](std::ostream& o) { write_dataset_json(o, data); });
      out << "drew " << sample_count << " trajectories\n";
    };
  });
  auto* pv = model->add_subcommand("pvalue", "Parametric-bootstrap p-values");
  pv->add_option("--model", model_path, "Model file")->required();
  pv->add_option("--input", in_path, "Trajectories to score")->required();
  pv->add_option("--draws", draws, "Bootstrap draws")->check(CLI::Range(100, 100000000));
  pv->callback([&] {
    run = [&] {
      auto in = open_input(model_path);
      const GaussianModel gm = read_model_json(in);
      const Dataset data = load_dataset(g, in_path);
      if (data.manifold->kind() != gm.manifold->kind()) throw Error("model and dataset geometries differ");
      const auto sims = sample_log_densities(gm, draws, g.seed, g.exec());
      write_file(g.path("pvalues.csv"), [&](std::ostream& o) {
        o << "id,log_density,p_value\n";
        for (std::size_t i = 0; i < data.size(); ++i) {
          const double ld = log_density(gm, data.trajectories[i]);
          o << data.ids[i] << ',' << format_double(ld) << ',' << format_double(p_value_from_draws(sims, ld))
            << '\n';
        }
      });
      out << "scored " << data.size() << " trajectories against " << draws << " draws\n";
    };
  });

  // classify / cluster / mds
  std::string matrix_path;
  auto* classify = app.add_subcommand("classify", "Leave-one-out nearest-neighbour classification");
  int k = 1;
  classify->add_option("--input", in_path, "Labelled dataset container")->required();
  classify->add_option("--metric", metric, "dh, ds or dx")->check(CLI::IsMember(metrics));
  classify->add_option("--k", k, "Neighbours")->check(CLI::Range(1, 100000));
  classify->add_option("--matrix", matrix_path, "Precomputed distance matrix CSV");
  classify->callback([&] {
    run = [&] {
      const Dataset data = load_dataset(g, in_path);
      if (!data.labelled()) throw Error("dataset has no labels");
      const DistanceMatrix dm = matrix_for(g, data, metric, matrix_path);
      const Classification c = knn_classify(dm, data.labels, k);
      json j;
      j["metric"] = metric;
      j["k"] = k;
      j["rate"] = c.rate;
      j["predictions"] = json::array();
      for (std::size_t i = 0; i < data.size(); ++i) {
        j["predictions"].push_back({{"id", data.ids[i]}, {"label", data.labels[i]}, {"predicted", c.predictions[i]}});
      }
      write_json(g.path("classify.json"), j);
      out << "leave-one-out rate " << format_double(c.rate) << '\n';
    };
  });

  auto* cluster = app.add_subcommand("cluster", "Average-linkage hierarchical clustering");
  std::size_t cluster_count = 0;
  cluster->add_option("--input", in_path, "Dataset container")->required();
  cluster->add_option("--metric", metric, "dh, ds or dx")->check(CLI::IsMember(metrics));
  cluster->add_option("--clusters", cluster_count, "Also write a flat cut into this many clusters");
  cluster->add_option("--matrix", matrix_path, "Precomputed distance matrix CSV");
  cluster->callback([&] {
    run = [&] {
      const Dataset data = load_dataset(g, in_path);
      const DistanceMatrix dm = matrix_for(g, data, metric, matrix_path);
      const Dendrogram d = hierarchical_cluster(dm);
      write_file(g.path("dendrogram.json"), [&](std::ostream& o) { write_dendrogram_json(o, d, data.ids); });
      if (cluster_count > 0) {
        const auto labels = cut_clusters(d, cluster_count);
        write_file(g.path("clusters.csv"), [&](std::ostream& o) {
          o << "id,cluster\n";
          for (std::size_t i = 0; i < labels.size(); ++i) o << data.ids[i] << ',' << labels[i] << '\n';
        });
      }
      out << "clustered " << data.size() << " trajectories\n";
    };
  });

  auto* mds_cmd = app.add_subcommand("mds", "Classical multidimensional scaling");
  int mds_dim = 2;
  mds_cmd->add_option("--input", in_path, "Dataset container")->required();
  mds_cmd->add_option("--metric", metric, "dh, ds or dx")->check(CLI::IsMember(metrics));
  mds_cmd->add_option("--dim", mds_dim, "Output dimension")->check(CLI::Range(1, 1000));
  mds_cmd->add_option("--matrix", matrix_path, "Precomputed distance matrix CSV");
  mds_cmd->callback([&] {
    run = [&] {
      const Dataset data = load_dataset(g, in_path);
      const DistanceMatrix dm = matrix_for(g, data, metric, matrix_path);
      const Eigen::MatrixXd x = mds(dm.values, mds_dim);
      write_file(g.path("mds.csv"), [&](std::ostream& o) {
        o << "id";
        for (Eigen::Index c = 0; c < x.cols(); ++c) o << ",x" << c + 1;
        o << '\n';
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
          o << data.ids[static_cast<std::size_t>(r)];
          for (Eigen::Index c = 0; c < x.cols(); ++c) o << ',' << format_double(x(r, c));
          o << '\n';
        }
      });
      out << "embedded " << data.size() << " trajectories in " << mds_dim << " dimensions\n";
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  g.grid_set = grid_opt->count() > 0;
  if (!run) {
    err << "mwarp: usage error: no subcommand\n";
    return 1;
  }
  try {
    run();
  } catch (const Error& e) {
    err << "mwarp: data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "mwarp: data error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace mwarp
