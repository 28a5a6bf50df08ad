#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "mwarp/io.hpp"
#include "mwarp/model.hpp"
#include "mwarp/se2.hpp"
#include "mwarp/sphere.hpp"

using namespace testing;

namespace {

// Rows are "DDHHMM" plus an optional record letter; DD is added to `date`.
std::string hurdat_storm(const std::string& id, const std::string& name, int date,
                         const std::vector<std::string>& rows, double lat0, double lon0) {
  std::ostringstream s;
  s << id << ",            " << name << ",     " << rows.size() << ",\n";
  int k = 0;
  for (const auto& row : rows) {
    const int day = date + std::stoi(row.substr(0, 2));
    const std::string time = row.substr(2, 4);
    const std::string rec = row.size() > 6 ? row.substr(6) : " ";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%08d, %s, %s, HU, %4.1fN, %5.1fW,  80, -999,\n", day, time.c_str(),
                  rec.c_str(), lat0 + 0.5 * k, lon0 + 0.7 * k);
    s << buf;
    ++k;
  }
  return s.str();
}

Dataset read_geo(const std::string& text, std::size_t size) {
  std::istringstream in(text);
  return read_geo_csv(in, size);
}

std::size_t parse_error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_SUITE("hurdat2") {
  TEST_CASE("header and data rows") {
    std::istringstream in(
        "AL011851,            UNNAMED,     14,\n"
        "18510625, 0000,  , HU, 28.0N,  94.8W,  80, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999,\n");
    // a header promising 14 rows with one row present is malformed
    CHECK_THROWS_AS(parse_hurdat2(in), ParseError);

    std::istringstream ok(
        "AL011851,            UNNAMED,      4,\n"
        "18510625, 0000,  , HU, 28.0N,  94.8W,  80, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999,\n"
        "18510625, 0600,  , HU, 28.0N,  95.4W,  80, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999,\n"
        "18510625, 1200,  , HU, 28.0N,  96.0W,  80, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999,\n"
        "18510625, 1800,  , HU, 28.1N,  96.5W,  80, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999, -999,\n");
    const auto storms = parse_hurdat2(ok);
    REQUIRE(storms.size() == 1);
    const auto& s = storms[0];
    CHECK(s.id == "AL011851");
    CHECK(s.name == "UNNAMED");
    REQUIRE(s.fixes.size() == 4);
    CHECK(s.fixes[0].date == 18510625);
    CHECK(s.fixes[0].time == 0);
    CHECK(s.fixes[0].status == "HU");
    CHECK(s.fixes[0].record.empty());
    CHECK(s.fixes[0].lat == 28.0);
    CHECK(s.fixes[0].lon == -94.8);
    CHECK(s.fixes[0].wind == 80);
    CHECK(s.fixes[0].pressure == -999);
    CHECK(s.fixes[3].lat == doctest::Approx(28.1));
    for (std::size_t k = 1; k < 4; ++k) CHECK(fix_hours(s.fixes[k]) - fix_hours(s.fixes[k - 1]) == 6.0);

    HurdatSelection all;
    all.min_fixes = 4;
    const Dataset d = hurdat_dataset(select_storms(storms, all), 20);
    REQUIRE(d.size() == 1);
    CHECK(d.grid() == 20);
    CHECK(d.manifold->kind() == ManifoldKind::sphere);
    CHECK(max_abs(d.trajectories[0][0].coords - from_geographic(28.0, -94.8).coords) < 1e-15);
    CHECK(max_abs(d.trajectories[0][19].coords - from_geographic(28.1, -96.5).coords) < 1e-15);
  }

  TEST_CASE("southern and eastern hemispheres") {
    std::istringstream in(
        "SH011990,            TEST,      1,\n"
        "19900101, 0000,  , TS, 12.5S, 120.0E,  40, 1000,\n");
    const auto storms = parse_hurdat2(in);
    CHECK(storms[0].fixes[0].lat == -12.5);
    CHECK(storms[0].fixes[0].lon == 120.0);
  }

  TEST_CASE("malformed rows report their line") {
    const std::string header = "AL021900,            TEST,      2,\n";
    const std::string good = "19000901, 0000,  , HU, 20.0N,  60.0W,  80, -999,\n";
    auto parse = [](const std::string& text) {
      return [text] {
        std::istringstream in(text);
        parse_hurdat2(in);
      };
    };
    CHECK(parse_error_line(parse(header + good + "19000901, 0600,  , HU, 20.0X,  60.0W,  80, -999,\n")) == 3);
    CHECK(parse_error_line(parse(header + good + "19000901, 06,  , HU, 20.0N,  60.0W,  80, -999,\n")) == 3);
    CHECK(parse_error_line(parse(header + "1900091, 0000,  , HU, 20.0N,  60.0W,  80, -999,\n" + good)) == 2);
    CHECK(parse_error_line(parse("not a header\n")) == 1);
    CHECK(parse_error_line(parse(header + good + "19000901, 0600,  , HU, 20.0N\n")) == 3);
  }

  TEST_CASE("storm selection keeps synoptic fixes") {
    const std::vector<std::string> early{"000000", "000600", "001200", "001800", "010000", "010600"};
    std::vector<std::string> late = early;
    late.insert(late.begin() + 2, "000930L");  // landfall record off the synoptic grid
    const std::vector<std::string> short_one{"000000", "000600", "001200"};
    std::istringstream in(hurdat_storm("AL011950", "ABLE", 19500801, early, 20, 60) +
                          hurdat_storm("AL021960", "BAKER", 19600801, late, 21, 61) +
                          hurdat_storm("AL031960", "CHARLIE", 19600901, short_one, 22, 62));
    const auto storms = parse_hurdat2(in);
    REQUIRE(storms.size() == 3);
    HurdatSelection sel;
    sel.min_fixes = 5;
    auto picked = select_storms(storms, sel);
    REQUIRE(picked.size() == 2);
    CHECK(picked[1].id == "AL021960");
    CHECK(picked[1].fixes.size() == 6);
    for (const auto& f : picked[1].fixes) CHECK(f.time % 600 == 0);
    sel.after_date = 19550101;
    picked = select_storms(storms, sel);
    REQUIRE(picked.size() == 1);
    CHECK(picked[0].name == "BAKER");
    sel.after_date = 0;
    sel.count = 1;
    CHECK(select_storms(storms, sel).size() == 1);
  }
}

TEST_SUITE("geographic csv") {
  TEST_CASE("pole and origin conventions") {
    const Dataset d = read_geo(
        "id,t,lat,lon\n"
        "a,0,90,17\n"
        "a,1,80,17\n"
        "a,2,70,17\n"
        "a,3,60,17\n"
        "b,0,0,0\n"
        "b,1,0,10\n"
        "b,2,0,20\n"
        "b,3,0,30\n",
        4);
    REQUIRE(d.size() == 2);
    CHECK(d.ids == std::vector<std::string>{"a", "b"});
    CHECK(max_abs(d.trajectories[0][0].coords - Eigen::Vector3d(0, 0, 1)) < 1e-15);
    CHECK(max_abs(d.trajectories[1][0].coords - Eigen::Vector3d(1, 0, 0)) == 0.0);
    CHECK(!d.labelled());
  }

  TEST_CASE("ISO timestamps, labels and unsorted rows") {
    const Dataset d = read_geo(
        "k,2000-01-01T06:00,10,10,hawk\n"
        "k,2000-01-01T00:00,10,0,hawk\n"
        "k,2000-01-01 12:00:00,10,20,hawk\n"
        "k,2000-01-02,10,30,hawk\n"
        "k,2000-01-03T00:00Z,10,40,hawk\n",
        5);
    REQUIRE(d.size() == 1);
    CHECK(d.labels == std::vector<std::string>{"hawk"});
    // observation-time axis: 0, 6, 12, 24, 48 hours over 48
    CHECK(d.manifold->dist(d.trajectories[0][1], from_geographic(10, 20)) < 1e-12);
    CHECK(d.manifold->dist(d.trajectories[0][2], from_geographic(10, 30)) < 1e-12);
    CHECK(d.manifold->dist(d.trajectories[0][4], from_geographic(10, 40)) < 1e-12);
  }

  TEST_CASE("short tracks are dropped with a note; nothing left is an error") {
    const Dataset d = read_geo(
        "a,0,0,0\na,1,0,1\na,2,0,2\n"
        "b,0,0,0\nb,1,0,1\nb,2,0,2\nb,3,0,3\n",
        8);
    REQUIRE(d.size() == 1);
    CHECK(d.ids[0] == "b");
    REQUIRE(!d.notes.empty());
    CHECK(d.notes[0].find("a") != std::string::npos);
    CHECK_THROWS_AS(read_geo("a,0,0,0\na,1,0,1\n", 8), EmptyTrackError);
    CHECK_THROWS_AS(read_geo("", 8), EmptyTrackError);
  }

  TEST_CASE("bad rows report their line") {
    CHECK(parse_error_line([] { read_geo("id,t,lat,lon\na,0,0,0\na,1,zero,1\n", 8); }) == 3);
    CHECK(parse_error_line([] { read_geo("a,0,0,0\na,1,0,1\na,1,0,2\na,3,0,3\n", 8); }) == 3);
    CHECK(parse_error_line([] { read_geo("a,0,0\n", 8); }) == 1);
    CHECK(parse_error_line([] { read_geo("a,0,0,0,x\na,1,0,1,y\n", 8); }) == 2);
  }

  TEST_CASE("timestamps") {
    CHECK(parse_timestamp("2000-01-01") == 946684800.0);
    CHECK(parse_timestamp("2000-01-01T00:00:00Z") == 946684800.0);
    CHECK(parse_timestamp("1970-01-02 01:00") == 90000.0);
    CHECK(parse_timestamp("1851-06-25") == -3740169600.0);
    CHECK(parse_timestamp("12.5") == 12.5);
    CHECK_THROWS_AS(parse_timestamp("2000-13-01"), std::invalid_argument);
    CHECK_THROWS_AS(parse_timestamp("yesterday"), std::invalid_argument);
  }

  TEST_CASE("resampling is stable under denser observations") {
    auto m = s2();
    auto track = [&](std::size_t obs) {
      std::vector<double> t;
      std::vector<Point> p;
      for (std::size_t k = 0; k < obs; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(obs - 1);
        t.push_back(s);
        p.push_back(from_geographic(30 + 20 * std::sin(3 * s), -100 + 60 * s));
      }
      return resample_track(m, t, p, 50, TimeAxis::observation);
    };
    const Trajectory coarse = track(30);
    const Trajectory fine = track(60);
    double worst = 0.0;
    for (std::size_t i = 0; i < 50; ++i) worst = std::max(worst, m->dist(coarse[i], fine[i]));
    CHECK(worst <= 1.0 / 50);
  }

  TEST_CASE("arc-length axis spaces samples evenly") {
    auto m = s2();
    const std::vector<double> t{0, 1, 10, 11};
    const std::vector<Point> p{from_geographic(0, 0), from_geographic(0, 10), from_geographic(0, 20),
                               from_geographic(0, 30)};
    const Trajectory a = resample_track(m, t, p, 7, TimeAxis::arc_length);
    for (std::size_t i = 1; i < 7; ++i) CHECK(m->dist(a[i - 1], a[i]) == doctest::Approx(5.0 * kPi / 180).epsilon(1e-12));
    CHECK(parse_time_axis("arc-length") == TimeAxis::arc_length);
    CHECK_THROWS(parse_time_axis("frames"));
  }
}

TEST_SUITE("se2 and contours") {
  TEST_CASE("straight SE(2) track keeps its heading") {
    std::istringstream in("id,t,theta,x,y\ncar,0,0.3,0,0\ncar,1,0.3,1,0.5\ncar,2,0.3,2,1\ncar,3,0.3,3,1.5\n");
    const Dataset d = read_se2_csv(in, 9);
    REQUIRE(d.size() == 1);
    for (const auto& p : d.trajectories[0].points()) {
      CHECK(SE2::heading(p.coords) == doctest::Approx(0.3).epsilon(1e-12));
    }
  }

  TEST_CASE("80 frames down-sampled to 17 contours") {
    const auto seqs = contour_sequences(1, 2, 80, 1, WarpKind::smooth, 0.3);
    const Dataset d = contour_dataset(seqs, 17, 50);
    REQUIRE(d.size() == 2);
    CHECK(d.grid() == 17);
    const auto& m = *d.manifold;
    for (std::size_t i = 0; i < 17; ++i) {
      const auto frame = static_cast<std::size_t>(std::lround(static_cast<double>(i) / 16.0 * 79.0));
      CHECK(m.dist(d.trajectories[0][i], q_function(seqs[0].frames[frame], 50)) < 1e-12);
    }
  }

  TEST_CASE("contour text and JSON round trips") {
    const auto seqs = contour_sequences(2, 1, 4, 2, WarpKind::smooth, 0.3);
    std::ostringstream text;
    write_contours(text, seqs);
    std::istringstream text_in(text.str());
    const auto back = read_contours(text_in);
    std::ostringstream json;
    write_contours_json(json, seqs);
    std::istringstream json_in(json.str());
    const auto back_json = read_contours_json(json_in);
    for (const auto* got : {&back, &back_json}) {
      REQUIRE(got->size() == seqs.size());
      for (std::size_t s = 0; s < seqs.size(); ++s) {
        CHECK((*got)[s].id == seqs[s].id);
        CHECK((*got)[s].label == seqs[s].label);
        REQUIRE((*got)[s].frames.size() == seqs[s].frames.size());
        for (std::size_t f = 0; f < seqs[s].frames.size(); ++f) {
          CHECK(max_abs((*got)[s].frames[f].samples - seqs[s].frames[f].samples) == 0.0);
        }
      }
    }
    std::ostringstream again;
    write_contours(again, back);
    CHECK(again.str() == text.str());
  }
}

TEST_SUITE("containers") {
  TEST_CASE("dataset JSON round trip") {
    const std::vector<Dataset> sets{traffic_dataset(12, 1, WarpKind::stop_and_go, 0.5),
                                    migration_dataset(3, 15, 2, 0.5),
                                    contour_dataset(contour_sequences(1, 2, 6, 3, WarpKind::smooth, 0.3), 6, 20)};
    for (const auto& d : sets) {
      INFO(d.manifold->name());
      std::ostringstream first;
      write_dataset_json(first, d);
      std::istringstream in(first.str());
      const Dataset back = read_dataset_json(in);
      CHECK(back.ids == d.ids);
      CHECK(back.labels == d.labels);
      CHECK(back.notes == d.notes);
      REQUIRE(back.size() == d.size());
      // SE(2) headings pass through atan2 and back, which can move a bit
      const bool exact = d.manifold->kind() != ManifoldKind::se2;
      for (std::size_t k = 0; k < d.size(); ++k) {
        for (std::size_t i = 0; i < d.grid(); ++i) {
          CHECK(max_abs(back.trajectories[k][i].coords - d.trajectories[k][i].coords) <= (exact ? 0.0 : 1e-15));
        }
      }
      std::ostringstream second;
      write_dataset_json(second, back);
      if (exact) CHECK(second.str() == first.str());
    }
  }

  TEST_CASE("bad containers are rejected") {
    std::istringstream wrong_schema(R"({"schema":"other/2","manifold":"s2","T":2,"trajectories":[]})");
    CHECK_THROWS_AS(read_dataset_json(wrong_schema), Error);
    std::istringstream not_json("{ nope");
    CHECK_THROWS_AS(read_dataset_json(not_json), Error);
  }

  TEST_CASE("distance matrix CSV round trip") {
    DistanceMatrix dm;
    dm.values = Eigen::MatrixXd(2, 2);
    dm.values << 0.0, 0.1, 0.1, 0.0;
    dm.ids = {"x", "y"};
    std::ostringstream out;
    write_matrix_csv(out, dm);
    CHECK(out.str() == "id,x,y\nx,0,0.1\ny,0.1,0\n");
    std::istringstream in(out.str());
    const DistanceMatrix back = read_matrix_csv(in);
    CHECK(back.ids == dm.ids);
    CHECK(max_abs(back.values - dm.values) == 0.0);
  }

  TEST_CASE("model JSON round trip preserves densities") {
    auto m = se2();
    std::mt19937_64 rng(4);
    const Trajectory base = random_trajectory(m, 20, rng);
    const Dataset copies = warped_copies(base, 5, WarpKind::smooth, 0.5, 5);
    const GaussianModel model = fit_model(karcher_mean_trajectories(copies.trajectories, m->default_reference()));
    std::ostringstream out;
    write_model_json(out, model);
    std::istringstream in(out.str());
    const GaussianModel back = read_model_json(in);
    for (const auto& a : copies.trajectories) CHECK(log_density(back, a) == log_density(model, a));
  }

  TEST_CASE("doubles print in shortest round-trip form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-10) == "-2.5e-10");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_SUITE("synthetic warps") {
  TEST_CASE("every kind satisfies the warp contract over 1000 seeds") {
    for (const WarpKind kind : {WarpKind::fast_slow, WarpKind::slow_fast, WarpKind::stop_and_go, WarpKind::smooth,
                                WarpKind::mixed}) {
      for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Warp g = synth_warp(60, seed, kind, 0.7);
        CHECK(g[0] == 0.0);
        CHECK(g[59] == 1.0);
        for (std::size_t i = 1; i < 60; ++i) CHECK(g[i] >= g[i - 1]);
      }
    }
  }

  TEST_CASE("small strength approaches the identity") {
    for (const WarpKind kind : {WarpKind::fast_slow, WarpKind::slow_fast, WarpKind::stop_and_go, WarpKind::smooth}) {
      CHECK(synth_warp(100, 3, kind, 1e-6).sup_distance(Warp::identity(100)) < 1e-5);
    }
    CHECK_THROWS(synth_warp(10, 1, WarpKind::smooth, 0.0));
    CHECK_THROWS(synth_warp(10, 1, WarpKind::smooth, 1.0));
  }

  TEST_CASE("fast-slow is convex and slow-fast concave") {
    const Warp convex = synth_warp(200, 1, WarpKind::fast_slow, 0.5);
    const Warp concave = synth_warp(200, 1, WarpKind::slow_fast, 0.5);
    for (std::size_t i = 1; i + 1 < 200; ++i) {
      CHECK(convex[i + 1] - 2 * convex[i] + convex[i - 1] >= -1e-15);
      CHECK(concave[i + 1] - 2 * concave[i] + concave[i - 1] <= 1e-15);
    }
    // closed form with a = 2.5
    const double t = 0.3;
    CHECK(convex(t) == doctest::Approx(std::expm1(2.5 * t) / std::expm1(2.5)).epsilon(1e-4));
  }

  TEST_CASE("stop-and-go warps contain near-stationary stretches") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Warp g = synth_warp(400, seed, WarpKind::stop_and_go, 0.8);
      const auto d = g.derivative();
      CHECK(*std::min_element(d.begin(), d.end()) < 0.2);
    }
  }

  TEST_CASE("warp kind names") {
    CHECK(parse_warp_kind("stop-and-go") == WarpKind::stop_and_go);
    CHECK(to_string(WarpKind::fast_slow) == "fast-slow");
    CHECK_THROWS(parse_warp_kind("jerky"));
  }
}
