#include "mwarp/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mwarp/qsphere.hpp"
#include "mwarp/se2.hpp"
#include "mwarp/sphere.hpp"

namespace mwarp {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool try_number(std::string_view s, double& value) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

double number(std::string_view s, std::size_t line, std::string_view what) {
  double v = 0.0;
  if (!try_number(s, v)) {
    throw ParseError("expected a number for " + std::string(what) + ", got '" + std::string(s) + "'",
                     line);
  }
  return v;
}

int integer(std::string_view s, std::size_t line, std::string_view what) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected an integer for " + std::string(what) + ", got '" + std::string(s) + "'",
                     line);
  }
  return v;
}

double days_from_civil(int y, unsigned m, unsigned d) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  return static_cast<double>(sys_days(ymd).time_since_epoch().count());
}

struct Observation {
  double time;
  Point point;
  std::size_t line;
};

struct RawTrack {
  std::string id;
  std::string label;
  bool has_label = false;
  std::vector<Observation> observations;
};

// Rows id,t,<fields...>[,label]. `fields` is the count of point columns.
template <class MakePoint>
std::vector<RawTrack> read_tracks(std::istream& in, std::size_t fields, MakePoint make_point) {
  std::vector<RawTrack> tracks;
  std::map<std::string, std::size_t, std::less<>> index;
  std::string raw;
  std::size_t line = 0;
  bool first_row = true;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto cols = split(text);
    if (first_row) {
      first_row = false;
      double probe = 0.0;
      if (cols.size() >= 2 + fields && !try_number(cols[2], probe)) continue;  // header
    }
    if (cols.size() != 2 + fields && cols.size() != 3 + fields) {
      throw ParseError("expected " + std::to_string(2 + fields) + " or " + std::to_string(3 + fields) +
                           " columns, got " + std::to_string(cols.size()),
                       line);
    }
    if (cols[0].empty()) throw ParseError("empty track id", line);
    double t = 0.0;
    try {
      t = parse_timestamp(cols[1]);
    } catch (const std::invalid_argument&) {
      throw ParseError("bad timestamp '" + std::string(cols[1]) + "'", line);
    }
    std::vector<double> values(fields);
    for (std::size_t k = 0; k < fields; ++k) values[k] = number(cols[2 + k], line, "coordinate");
    auto [it, inserted] = index.try_emplace(std::string(cols[0]), tracks.size());
    if (inserted) tracks.push_back(RawTrack{std::string(cols[0]), {}, false, {}});
    auto& track = tracks[it->second];
    const bool labelled = cols.size() == 3 + fields;
    if (track.observations.empty()) {
      track.has_label = labelled;
      if (labelled) track.label = std::string(cols.back());
    } else if (labelled != track.has_label || (labelled && track.label != cols.back())) {
      throw ParseError("inconsistent label for track '" + track.id + "'", line);
    }
    track.observations.push_back(Observation{t, make_point(values, line), line});
  }
  return tracks;
}

Dataset assemble(const ManifoldPtr& manifold, std::vector<RawTrack> tracks, std::size_t size,
                 TimeAxis axis) {
  Dataset out;
  out.manifold = manifold;
  std::size_t labelled = 0;
  for (auto& track : tracks) {
    if (track.observations.size() < 4) {
      out.notes.push_back("dropped track " + track.id + " with " +
                          std::to_string(track.observations.size()) + " observations");
      continue;
    }
    auto& obs = track.observations;
    std::stable_sort(obs.begin(), obs.end(),
                     [](const Observation& a, const Observation& b) { return a.time < b.time; });
    for (std::size_t k = 1; k < obs.size(); ++k) {
      if (obs[k].time == obs[k - 1].time) {
        throw ParseError("duplicate timestamp in track '" + track.id + "'",
                         std::max(obs[k].line, obs[k - 1].line));
      }
    }
    std::vector<double> times;
    std::vector<Point> points;
    for (const auto& o : obs) {
      times.push_back(o.time);
      points.push_back(o.point);
    }
    try {
      out.trajectories.push_back(resample_track(manifold, times, points, size, axis));
    } catch (const CutLocusError& e) {
      throw ParseError(std::string("antipodal consecutive observations: ") + e.what(),
                       obs[e.index().value_or(0)].line);
    }
    out.ids.push_back(track.id);
    if (track.has_label) ++labelled;
    out.labels.push_back(track.label);
  }
  if (out.trajectories.empty()) throw EmptyTrackError("no track with at least 4 observations");
  if (labelled == 0) {
    out.labels.clear();
  } else if (labelled != out.trajectories.size()) {
    throw ParseError("labels must be given for every track or none", 1);
  }
  return out;
}

json encode_json_point(const Manifold& m, const Point& p) {
  const auto values = encode_point(m, p);
  if (m.kind() != ManifoldKind::qsphere) return values;
  json pairs = json::array();
  for (std::size_t i = 0; i + 1 < values.size(); i += 2) pairs.push_back({values[i], values[i + 1]});
  return pairs;
}

Point decode_json_point(const Manifold& m, const json& j) {
  std::vector<double> values;
  if (m.kind() == ManifoldKind::qsphere) {
    for (const auto& pair : j) {
      if (pair.size() != 2) throw ParseError("q-function samples must be [qx, qy] pairs", 1);
      values.push_back(pair.at(0).get<double>());
      values.push_back(pair.at(1).get<double>());
    }
  } else {
    values = j.get<std::vector<double>>();
  }
  return decode_point(m, values);
}

void manifold_to_json(json& j, const Manifold& m) {
  j["manifold"] = std::string(to_string(m.kind()));
  if (m.kind() == ManifoldKind::se2) {
    j["se2_translation_weight"] = static_cast<const SE2&>(m).translation_weight();
  } else if (m.kind() == ManifoldKind::qsphere) {
    j["contour_points"] = static_cast<const QSphere&>(m).points();
  }
}

ManifoldPtr manifold_from_json(const json& j) {
  GeometryOptions opts;
  opts.se2_translation_weight = j.value("se2_translation_weight", 1.0);
  opts.contour_points = j.value("contour_points", kDefaultContourPoints);
  return make_manifold(parse_manifold_kind(j.at("manifold").get<std::string>()), opts);
}

void check_schema(const json& j) {
  if (!j.contains("schema") || j["schema"] != kSchema) {
    throw ParseError("missing or unsupported schema, expected \"" + std::string(kSchema) + "\"", 1);
  }
}

json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // byte offset only; report line 1 when unknown
    throw ParseError(std::string("invalid JSON: ") + e.what(), 1);
  }
}

}  // namespace

TimeAxis parse_time_axis(std::string_view name) {
  if (name == "observation") return TimeAxis::observation;
  if (name == "arc-length") return TimeAxis::arc_length;
  throw std::invalid_argument("unknown time axis '" + std::string(name) + "'");
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_timestamp(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  if (try_number(text, v)) return v;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double s = 0.0;
  auto take = [&](std::size_t pos, std::size_t len, int& out) {
    if (text.size() < pos + len) return false;
    const auto part = text.substr(pos, len);
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + len, out);
    return ec == std::errc() && ptr == part.data() + len;
  };
  if (!take(0, 4, y) || text.size() < 10 || text[4] != '-' || !take(5, 2, mo) || text[7] != '-' ||
      !take(8, 2, d)) {
    throw std::invalid_argument("unrecognized timestamp");
  }
  if (text.size() > 10) {
    if ((text[10] != 'T' && text[10] != ' ') || !take(11, 2, h) || text.size() < 16 ||
        text[13] != ':' || !take(14, 2, mi)) {
      throw std::invalid_argument("unrecognized timestamp");
    }
    auto rest = text.substr(16);
    if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
    if (!rest.empty()) {
      if (rest.front() != ':' || !try_number(rest.substr(1), s)) {
        throw std::invalid_argument("unrecognized timestamp");
      }
    }
  }
  if (mo < 1 || d < 1 || h > 23 || mi > 59 || s < 0.0 || s >= 61.0) {
    throw std::invalid_argument("timestamp out of range");
  }
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400.0 +
         h * 3600.0 + mi * 60.0 + s;
}

Trajectory resample_track(const ManifoldPtr& manifold, std::span<const double> times,
                          std::span<const Point> points, std::size_t size, TimeAxis axis) {
  if (times.size() != points.size()) throw std::invalid_argument("resample_track: size mismatch");
  if (points.size() < 2) throw EmptyTrackError("resample_track: need at least 2 observations");
  if (size < 3) throw std::invalid_argument("resample_track: grid must have at least 3 points");
  const auto& m = *manifold;
  const std::size_t n = points.size();
  std::vector<Eigen::VectorXd> steps(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    try {
      steps[k] = m.log_coords(points[k].coords, points[k + 1].coords);
    } catch (const CutLocusError& e) {
      throw CutLocusError(e.what(), k);
    }
  }
  std::vector<double> s(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    if (axis == TimeAxis::observation) {
      if (!(times[k] > times[k - 1])) {
        throw std::invalid_argument("resample_track: times must increase strictly");
      }
      s[k] = times[k] - times[0];
    } else {
      s[k] = s[k - 1] + m.norm_coords(steps[k - 1]);
    }
  }
  if (!(s.back() > 0.0)) throw DegenerateCurveError("resample_track: track has zero length");
  for (auto& v : s) v /= s.back();

  std::vector<Point> out;
  out.reserve(size);
  std::size_t k = 0;
  for (std::size_t i = 0; i < size; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(size - 1);
    if (i == 0) {
      out.push_back(points.front());
      continue;
    }
    if (i + 1 == size) {
      out.push_back(points.back());
      continue;
    }
    while (k + 2 < n && s[k + 1] <= u) ++k;
    const double width = s[k + 1] - s[k];
    const double f = width > 0.0 ? std::clamp((u - s[k]) / width, 0.0, 1.0) : 0.0;
    out.push_back(Point{m.exp_coords(points[k].coords, f * steps[k])});
  }
  return Trajectory(manifold, std::move(out));
}

Dataset read_geo_csv(std::istream& in, std::size_t size, TimeAxis axis) {
  auto sphere = std::make_shared<Sphere>();
  auto tracks = read_tracks(in, 2, [](const std::vector<double>& v, std::size_t line) {
    if (std::abs(v[0]) > 90.0) throw ParseError("latitude out of range", line);
    return from_geographic(v[0], v[1]);
  });
  return assemble(sphere, std::move(tracks), size, axis);
}

std::vector<HurdatStorm> parse_hurdat2(std::istream& in) {
  std::vector<HurdatStorm> storms;
  std::string raw;
  std::size_t line = 0;
  auto is_header_id = [](std::string_view id) {
    if (id.size() != 8) return false;
    for (std::size_t i = 0; i < 8; ++i) {
      const bool ok = i < 2 ? std::isupper(static_cast<unsigned char>(id[i])) != 0
                            : std::isdigit(static_cast<unsigned char>(id[i])) != 0;
      if (!ok) return false;
    }
    return true;
  };
  auto coordinate = [](std::string_view s, char pos, char neg, std::size_t ln) {
    s = trim(s);
    if (s.empty()) throw ParseError("empty coordinate", ln);
    const char hemi = s.back();
    if (hemi != pos && hemi != neg) throw ParseError("bad hemisphere in '" + std::string(s) + "'", ln);
    const double v = number(s.substr(0, s.size() - 1), ln, "coordinate");
    return hemi == neg ? -v : v;
  };
  while (std::getline(in, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    const auto head = split(raw);
    if (head.size() < 3 || !is_header_id(head[0])) {
      throw ParseError("expected a storm header row such as 'AL011851, UNNAMED, 14,'", line);
    }
    HurdatStorm storm;
    storm.id = std::string(head[0]);
    storm.name = std::string(head[1]);
    storm.line = line;
    const int count = integer(head[2], line, "entry count");
    if (count < 0) throw ParseError("negative entry count", line);
    for (int e = 0; e < count; ++e) {
      if (!std::getline(in, raw)) throw ParseError("file ends inside storm " + storm.id, line);
      ++line;
      const auto f = split(raw);
      if (f.size() < 8) throw ParseError("data row needs at least 8 fields", line);
      HurdatFix fix;
      if (f[0].size() != 8) throw ParseError("date must be YYYYMMDD", line);
      fix.date = integer(f[0], line, "date");
      if (f[1].size() != 4) throw ParseError("time must be HHMM", line);
      fix.time = integer(f[1], line, "time");
      if (fix.time / 100 > 23 || fix.time % 100 > 59) throw ParseError("time out of range", line);
      try {
        days_from_civil(fix.date / 10000, static_cast<unsigned>(fix.date / 100 % 100),
                        static_cast<unsigned>(fix.date % 100));
      } catch (const std::invalid_argument&) {
        throw ParseError("invalid date", line);
      }
      fix.record = std::string(f[2]);
      fix.status = std::string(f[3]);
      fix.lat = coordinate(f[4], 'N', 'S', line);
      fix.lon = coordinate(f[5], 'E', 'W', line);
      if (std::abs(fix.lat) > 90.0 || std::abs(fix.lon) > 180.0) {
        throw ParseError("coordinate out of range", line);
      }
      fix.wind = integer(f[6], line, "wind");
      fix.pressure = integer(f[7], line, "pressure");
      fix.line = line;
      storm.fixes.push_back(std::move(fix));
    }
    storms.push_back(std::move(storm));
  }
  return storms;
}

double fix_hours(const HurdatFix& fix) {
  const double days = days_from_civil(fix.date / 10000, static_cast<unsigned>(fix.date / 100 % 100),
                                      static_cast<unsigned>(fix.date % 100));
  return days * 24.0 + fix.time / 100 + (fix.time % 100) / 60.0;
}

std::vector<HurdatStorm> select_storms(const std::vector<HurdatStorm>& storms,
                                       const HurdatSelection& selection) {
  std::vector<HurdatStorm> out;
  for (const auto& storm : storms) {
    if (storm.fixes.empty() || storm.fixes.front().date < selection.after_date) continue;
    HurdatStorm kept = storm;
    kept.fixes.clear();
    for (const auto& fix : storm.fixes) {
      if (fix.time % 600 != 0) continue;
      if (!kept.fixes.empty() && fix_hours(fix) <= fix_hours(kept.fixes.back())) continue;
      kept.fixes.push_back(fix);
    }
    if (kept.fixes.size() < selection.min_fixes) continue;
    out.push_back(std::move(kept));
    if (selection.count != 0 && out.size() == selection.count) break;
  }
  return out;
}

Dataset hurdat_dataset(const std::vector<HurdatStorm>& storms, std::size_t size, TimeAxis axis) {
  std::vector<RawTrack> tracks;
  for (const auto& storm : storms) {
    RawTrack track{storm.id, {}, false, {}};
    for (const auto& fix : storm.fixes) {
      track.observations.push_back(Observation{fix_hours(fix), from_geographic(fix.lat, fix.lon), fix.line});
    }
    tracks.push_back(std::move(track));
  }
  Dataset out = assemble(std::make_shared<Sphere>(), std::move(tracks), size, axis);
  for (const auto& storm : storms) out.notes.push_back(storm.id + " " + storm.name);
  return out;
}

Dataset read_se2_csv(std::istream& in, std::size_t size, double translation_weight, TimeAxis axis) {
  auto se2 = std::make_shared<SE2>(translation_weight);
  auto tracks = read_tracks(in, 3, [](const std::vector<double>& v, std::size_t) {
    return SE2::make_point(v[0], v[1], v[2]);
  });
  return assemble(se2, std::move(tracks), size, axis);
}

std::vector<ContourSequence> read_contours(std::istream& in) {
  std::vector<ContourSequence> out;
  std::vector<Eigen::Vector2d> block;
  std::size_t line = 0;
  std::size_t header_line = 0;
  auto flush = [&]() {
    if (block.empty()) return;
    if (out.empty()) throw ParseError("contour rows before any '# trajectory' header", line);
    PlanarCurve c{Eigen::Matrix2Xd(2, static_cast<Eigen::Index>(block.size()))};
    for (std::size_t i = 0; i < block.size(); ++i) c.samples.col(static_cast<Eigen::Index>(i)) = block[i];
    out.back().frames.push_back(std::move(c));
    block.clear();
  };
  auto finish = [&]() {
    if (!out.empty() && out.back().frames.empty()) {
      throw ParseError("trajectory '" + out.back().id + "' has no contours", header_line);
    }
  };
  std::string raw;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) {
      flush();
      continue;
    }
    if (text.front() == '#') {
      auto body = trim(text.substr(1));
      if (body.substr(0, 10) != "trajectory") continue;  // comment
      flush();
      finish();
      const auto words = split(trim(body.substr(10)), ' ');
      if (words.empty() || words[0].empty()) throw ParseError("trajectory header needs an id", line);
      ContourSequence seq;
      seq.id = std::string(words[0]);
      if (words.size() > 1) seq.label = std::string(words[1]);
      out.push_back(std::move(seq));
      header_line = line;
      continue;
    }
    const auto cols = split(text);
    if (cols.size() != 2) throw ParseError("contour rows are 'x,y'", line);
    block.emplace_back(number(cols[0], line, "x"), number(cols[1], line, "y"));
  }
  flush();
  finish();
  if (out.empty()) throw EmptyTrackError("no contour sequences found");
  return out;
}

void write_contours(std::ostream& out, std::span<const ContourSequence> sequences) {
  for (const auto& seq : sequences) {
    out << "# trajectory " << seq.id;
    if (!seq.label.empty()) out << ' ' << seq.label;
    out << '\n';
    for (const auto& frame : seq.frames) {
      for (Eigen::Index i = 0; i < frame.samples.cols(); ++i) {
        out << format_double(frame.samples(0, i)) << ',' << format_double(frame.samples(1, i)) << '\n';
      }
      out << '\n';
    }
  }
}

std::vector<ContourSequence> read_contours_json(std::istream& in) {
  const json j = parse_json(in);
  check_schema(j);
  std::vector<ContourSequence> out;
  try {
    for (const auto& s : j.at("sequences")) {
      ContourSequence seq;
      seq.id = s.at("id").get<std::string>();
      seq.label = s.value("label", "");
      for (const auto& frame : s.at("frames")) {
        PlanarCurve c{Eigen::Matrix2Xd(2, static_cast<Eigen::Index>(frame.size()))};
        Eigen::Index i = 0;
        for (const auto& xy : frame) {
          c.samples(0, i) = xy.at(0).get<double>();
          c.samples(1, i) = xy.at(1).get<double>();
          ++i;
        }
        seq.frames.push_back(std::move(c));
      }
      if (seq.frames.empty()) throw ParseError("sequence '" + seq.id + "' has no contours", 1);
      out.push_back(std::move(seq));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed contour JSON: ") + e.what(), 1);
  }
  if (out.empty()) throw EmptyTrackError("no contour sequences found");
  return out;
}

void write_contours_json(std::ostream& out, std::span<const ContourSequence> sequences) {
  json j;
  j["schema"] = kSchema;
  j["sequences"] = json::array();
  for (const auto& seq : sequences) {
    json s;
    s["id"] = seq.id;
    if (!seq.label.empty()) s["label"] = seq.label;
    s["frames"] = json::array();
    for (const auto& frame : seq.frames) {
      json f = json::array();
      for (Eigen::Index i = 0; i < frame.samples.cols(); ++i) {
        f.push_back({frame.samples(0, i), frame.samples(1, i)});
      }
      s["frames"].push_back(std::move(f));
    }
    j["sequences"].push_back(std::move(s));
  }
  out << j.dump(1) << '\n';
}

Dataset contour_dataset(std::span<const ContourSequence> sequences, std::size_t size, int points,
                        bool align_rotation) {
  if (size < 3) throw std::invalid_argument("contour_dataset: grid must have at least 3 points");
  Dataset out;
  auto manifold = std::make_shared<QSphere>(points);
  out.manifold = manifold;
  bool any_label = false;
  for (const auto& seq : sequences) {
    const std::size_t frames = seq.frames.size();
    if (frames < 2) throw EmptyTrackError("sequence '" + seq.id + "' needs at least 2 contours");
    std::vector<std::size_t> picks;
    if (size <= frames) {
      for (std::size_t k = 0; k < size; ++k) {
        picks.push_back(static_cast<std::size_t>(
            std::llround(static_cast<double>(k) * static_cast<double>(frames - 1) /
                         static_cast<double>(size - 1))));
      }
    } else {
      for (std::size_t k = 0; k < frames; ++k) picks.push_back(k);
    }
    std::vector<Point> qs;
    qs.reserve(picks.size());
    for (const std::size_t k : picks) {
      Point q = q_function(seq.frames[k], points);
      if (align_rotation && !qs.empty()) q = rotation_align(qs.back(), q).second;
      qs.push_back(std::move(q));
    }
    if (size <= frames) {
      out.trajectories.emplace_back(manifold, std::move(qs));
    } else {
      const auto times = uniform_grid(frames);
      out.trajectories.push_back(resample_track(manifold, times, qs, size, TimeAxis::observation));
    }
    out.ids.push_back(seq.id);
    out.labels.push_back(seq.label);
    any_label = any_label || !seq.label.empty();
  }
  if (!any_label) out.labels.clear();
  if (out.trajectories.empty()) throw EmptyTrackError("no contour sequences");
  return out;
}

std::vector<double> encode_point(const Manifold& manifold, const Point& p) {
  if (manifold.kind() == ManifoldKind::se2) {
    return {SE2::heading(p.coords), p.coords(4), p.coords(5)};
  }
  return {p.coords.data(), p.coords.data() + p.coords.size()};
}

Point decode_point(const Manifold& manifold, std::span<const double> values) {
  if (manifold.kind() == ManifoldKind::se2) {
    if (values.size() != 3) throw std::invalid_argument("se2 points are [theta, x, y]");
    return SE2::make_point(values[0], values[1], values[2]);
  }
  if (static_cast<Eigen::Index>(values.size()) != manifold.ambient_dim()) {
    throw std::invalid_argument("point needs " + std::to_string(manifold.ambient_dim()) +
                                " coordinates, got " + std::to_string(values.size()));
  }
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  if (!(x.norm() > 0.0)) throw std::invalid_argument("point has zero norm");
  return Point{manifold.project_point(x)};
}

void write_dataset_json(std::ostream& out, const Dataset& dataset) {
  dataset.validate();
  const auto& m = *dataset.manifold;
  json j;
  j["schema"] = kSchema;
  manifold_to_json(j, m);
  j["T"] = dataset.grid();
  j["notes"] = dataset.notes;
  j["trajectories"] = json::array();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    json t;
    t["id"] = dataset.ids[i];
    if (dataset.labelled()) t["label"] = dataset.labels[i];
    json pts = json::array();
    for (const auto& p : dataset.trajectories[i].points()) pts.push_back(encode_json_point(m, p));
    t["points"] = std::move(pts);
    j["trajectories"].push_back(std::move(t));
  }
  out << j.dump(1) << '\n';
}

Dataset read_dataset_json(std::istream& in, std::size_t size) {
  const json j = parse_json(in);
  check_schema(j);
  Dataset out;
  try {
    out.manifold = manifold_from_json(j);
    const auto stored = j.at("T").get<std::size_t>();
    out.notes = j.value("notes", std::vector<std::string>{});
    bool any_label = false;
    for (const auto& t : j.at("trajectories")) {
      std::vector<Point> points;
      for (const auto& p : t.at("points")) points.push_back(decode_json_point(*out.manifold, p));
      if (points.size() != stored) {
        throw ParseError("trajectory '" + t.at("id").get<std::string>() + "' does not have T points", 1);
      }
      if (size != 0 && size != stored) {
        const auto times = uniform_grid(stored);
        out.trajectories.push_back(resample_track(out.manifold, times, points, size, TimeAxis::observation));
      } else {
        out.trajectories.emplace_back(out.manifold, std::move(points));
      }
      out.ids.push_back(t.at("id").get<std::string>());
      out.labels.push_back(t.value("label", ""));
      any_label = any_label || t.contains("label");
    }
    if (!any_label) out.labels.clear();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed dataset: ") + e.what(), 1);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed dataset: ") + e.what(), 1);
  }
  if (out.trajectories.empty()) throw EmptyTrackError("dataset has no trajectories");
  return out;
}

void write_matrix_csv(std::ostream& out, const DistanceMatrix& dm) {
  const auto n = dm.values.rows();
  auto id = [&](Eigen::Index i) {
    return static_cast<std::size_t>(i) < dm.ids.size() ? dm.ids[static_cast<std::size_t>(i)]
                                                        : std::to_string(i);
  };
  out << "id";
  for (Eigen::Index i = 0; i < n; ++i) out << ',' << id(i);
  out << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    out << id(i);
    for (Eigen::Index k = 0; k < n; ++k) out << ',' << format_double(dm.values(i, k));
    out << '\n';
  }
}

DistanceMatrix read_matrix_csv(std::istream& in) {
  DistanceMatrix dm;
  std::string raw;
  std::size_t line = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    const auto cols = split(text);
    if (line == 1) {
      for (std::size_t k = 1; k < cols.size(); ++k) dm.ids.emplace_back(cols[k]);
      continue;
    }
    if (cols.size() != dm.ids.size() + 1) throw ParseError("row length differs from header", line);
    std::vector<double> row;
    for (std::size_t k = 1; k < cols.size(); ++k) row.push_back(number(cols[k], line, "distance"));
    rows.push_back(std::move(row));
  }
  if (rows.size() != dm.ids.size() || rows.empty()) throw ParseError("matrix is not square", line);
  const auto n = static_cast<Eigen::Index>(rows.size());
  dm.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) dm.values(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return dm;
}

void write_warps_csv(std::ostream& out, std::span<const Warp> warps, std::span<const std::string> ids) {
  if (warps.empty()) return;
  out << 't';
  for (std::size_t k = 0; k < warps.size(); ++k) out << ',' << (k < ids.size() ? ids[k] : std::to_string(k));
  out << '\n';
  const auto grid = uniform_grid(warps.front().size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_double(grid[i]);
    for (const auto& w : warps) out << ',' << format_double(w[i]);
    out << '\n';
  }
}

void write_rho_csv(std::ostream& out, std::span<const double> rho_unaligned,
                   std::span<const double> rho_aligned) {
  if (rho_unaligned.size() != rho_aligned.size()) throw std::invalid_argument("rho series differ in length");
  out << "t,rho_unaligned,rho_aligned\n";
  const auto grid = uniform_grid(rho_aligned.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_double(grid[i]) << ',' << format_double(rho_unaligned[i]) << ','
        << format_double(rho_aligned[i]) << '\n';
  }
}

void write_ellipses_csv(std::ostream& out, const CrossSectionalStats& stats) {
  if (stats.basis.empty()) return;
  const auto ambient = stats.basis.front().rows();
  out << "t,sd1,sd2";
  for (int axis = 1; axis <= 2; ++axis) {
    for (Eigen::Index k = 0; k < ambient; ++k) out << ",u" << axis << '_' << k;
  }
  out << '\n';
  const auto grid = uniform_grid(stats.basis.size());
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const auto& s = stats.singular_values[t];
    out << format_double(grid[t]);
    for (Eigen::Index k = 0; k < 2; ++k) out << ',' << format_double(k < s.size() ? std::sqrt(s(k)) : 0.0);
    for (Eigen::Index k = 0; k < 2; ++k) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(ambient);
      if (k < stats.modes[t].cols()) u = stats.basis[t] * stats.modes[t].col(k);
      for (Eigen::Index c = 0; c < ambient; ++c) out << ',' << format_double(u(c));
    }
    out << '\n';
  }
}

void write_dendrogram_json(std::ostream& out, const Dendrogram& dendrogram,
                           std::span<const std::string> ids) {
  json j;
  j["schema"] = kSchema;
  j["leaves"] = dendrogram.leaves;
  j["ids"] = std::vector<std::string>(ids.begin(), ids.end());
  j["merges"] = json::array();
  for (const auto& m : dendrogram.merges) {
    j["merges"].push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
  }
  out << j.dump(1) << '\n';
}

void write_model_json(std::ostream& out, const GaussianModel& model) {
  json j;
  j["schema"] = kSchema;
  manifold_to_json(j, *model.manifold);
  j["training_count"] = model.training_count;
  j["dim"] = model.dim();
  j["times"] = model.times;
  j["epsilon"] = model.epsilon;
  j["mean"] = json::array();
  j["basis"] = json::array();
  j["covariance"] = json::array();
  for (std::size_t t = 0; t < model.size(); ++t) {
    const auto& p = model.mean[t].coords;
    j["mean"].push_back(std::vector<double>(p.data(), p.data() + p.size()));
    const auto& b = model.basis[t];
    j["basis"].push_back(std::vector<double>(b.data(), b.data() + b.size()));
    const auto& c = model.covariance[t];
    j["covariance"].push_back(std::vector<double>(c.data(), c.data() + c.size()));
  }
  out << j.dump(1) << '\n';
}

GaussianModel read_model_json(std::istream& in) {
  const json j = parse_json(in);
  check_schema(j);
  GaussianModel model;
  try {
    model.manifold = manifold_from_json(j);
    model.training_count = j.at("training_count").get<std::size_t>();
    const auto d = j.at("dim").get<Eigen::Index>();
    const auto ambient = model.manifold->ambient_dim();
    model.times = j.at("times").get<std::vector<double>>();
    model.epsilon = j.at("epsilon").get<std::vector<double>>();
    const std::size_t m = model.times.size();
    if (model.epsilon.size() != m || j.at("mean").size() != m || j.at("basis").size() != m ||
        j.at("covariance").size() != m) {
      throw ParseError("model arrays differ in length", 1);
    }
    for (std::size_t t = 0; t < m; ++t) {
      const auto p = j["mean"][t].get<std::vector<double>>();
      const auto b = j["basis"][t].get<std::vector<double>>();
      const auto c = j["covariance"][t].get<std::vector<double>>();
      if (static_cast<Eigen::Index>(p.size()) != ambient ||
          static_cast<Eigen::Index>(b.size()) != ambient * d ||
          static_cast<Eigen::Index>(c.size()) != d * d) {
        throw ParseError("model entry " + std::to_string(t) + " has wrong dimensions", 1);
      }
      model.mean.push_back(Point{Eigen::Map<const Eigen::VectorXd>(p.data(), ambient)});
      model.basis.emplace_back(Eigen::Map<const Eigen::MatrixXd>(b.data(), ambient, d));
      model.covariance.emplace_back(Eigen::Map<const Eigen::MatrixXd>(c.data(), d, d));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model: ") + e.what(), 1);
  }
  refresh_factors(model);
  return model;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace mwarp
