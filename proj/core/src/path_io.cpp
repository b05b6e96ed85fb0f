#include "ibm/dynamics/path_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ibm/errors.hpp"

namespace ibm {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::kBirth:
      return "birth";
    case EventKind::kDeath:
      return "death";
    case EventKind::kFreeze:
      return "freeze";
  }
  return "?";
}

EventKind event_kind_from_string(const std::string& s) {
  if (s == "birth") return EventKind::kBirth;
  if (s == "death") return EventKind::kDeath;
  if (s == "freeze") return EventKind::kFreeze;
  throw ConfigError("unknown event kind \"" + s + "\"");
}

const Particle* Frame::find(std::int64_t label) const {
  auto it = std::lower_bound(particles.begin(), particles.end(), label,
                             [](const Particle& p, std::int64_t l) { return p.label < l; });
  if (it == particles.end() || it->label != label) return nullptr;
  return &*it;
}

Configuration Frame::configuration(double window_radius) const {
  const int dim = particles.empty() ? 1 : particles.front().position.dim();
  Configuration c(dim, 0.0);
  for (const auto& p : particles) c.add(p.position, p.frozen);
  if (window_radius > 0.0) return restrict(c, window_radius);
  return c;
}

std::vector<double> PathRecord::times() const {
  std::vector<double> t;
  t.reserve(frames.size());
  for (const auto& f : frames) t.push_back(f.time);
  return t;
}

std::size_t PathRecord::frame_at(double t) const {
  if (frames.empty()) throw InsufficientData("path has no frames");
  std::size_t best = 0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (std::fabs(frames[i].time - t) < std::fabs(frames[best].time - t)) best = i;
  }
  return best;
}

std::vector<std::optional<Point>> PathRecord::trajectory(std::int64_t label) const {
  std::vector<std::optional<Point>> out(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (const Particle* p = frames[i].find(label)) out[i] = p->position;
  }
  return out;
}

nlohmann::json PathRecord::meta_json() const {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& e : events) {
    nlohmann::json pos = nlohmann::json::array();
    for (int k = 0; k < dim; ++k) pos.push_back(e.position[k]);
    ev.push_back({{"time", e.time}, {"kind", to_string(e.kind)}, {"label", e.label}, {"position", pos}});
  }
  return {{"schema_version", kPathSchemaVersion},
          {"dim", dim},
          {"model_id", model_id},
          {"scheme", scheme},
          {"R", R},
          {"dt", dt},
          {"seed", seed},
          {"n_frames", frames.size()},
          {"retried_steps", retried_steps},
          {"events", ev}};
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string header(int dim, const char* first, const char* last) {
  std::string h = first;
  h += dim == 2 ? ",x1,x2" : ",x1";
  if (last != nullptr) {
    h += ",";
    h += last;
  }
  return h;
}

}  // namespace

void write_path_csv(std::ostream& os, const PathRecord& rec) {
  os << header(rec.dim, "time,label,frozen", "local_time") << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& f : rec.frames) {
    for (const auto& p : f.particles) {
      os << f.time << ',' << p.label << ',' << (p.frozen ? 1 : 0);
      for (int k = 0; k < rec.dim; ++k) os << ',' << p.position[k];
      os << ',' << p.local_time << '\n';
    }
  }
}

void write_path_csv(const std::filesystem::path& file, const PathRecord& rec) {
  std::ofstream os(file);
  if (!os) throw ConfigError("cannot write " + file.string());
  write_path_csv(os, rec);
}

std::vector<Frame> read_path_csv(std::istream& is, int dim) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("paths CSV: missing header row");
  if (line != header(dim, "time,label,frozen", "local_time")) throw ConfigError("paths CSV: unexpected header");
  std::vector<Frame> frames;
  std::string last_time;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != static_cast<std::size_t>(4 + dim)) {
      throw ConfigError("paths CSV: wrong column count on line " + std::to_string(lineno));
    }
    try {
      if (frames.empty() || c[0] != last_time) {
        frames.emplace_back();
        frames.back().time = std::stod(c[0]);
        last_time = c[0];
      }
      Particle p;
      p.label = std::stoll(c[1]);
      p.frozen = std::stoi(c[2]) != 0;
      std::array<double, 2> x{0.0, 0.0};
      for (int k = 0; k < dim; ++k) x[static_cast<std::size_t>(k)] = std::stod(c[3 + static_cast<std::size_t>(k)]);
      p.position = Point::checked(std::span<const double>(x.data(), static_cast<std::size_t>(dim)));
      p.local_time = std::stod(c[3 + static_cast<std::size_t>(dim)]);
      frames.back().particles.push_back(p);
    } catch (const std::logic_error&) {
      throw ConfigError("paths CSV: malformed number on line " + std::to_string(lineno));
    }
  }
  return frames;
}

void write_events_csv(const std::filesystem::path& file, const PathRecord& rec) {
  std::ofstream os(file);
  if (!os) throw ConfigError("cannot write " + file.string());
  os << header(rec.dim, "time,kind,label", nullptr) << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : rec.events) {
    os << e.time << ',' << to_string(e.kind) << ',' << e.label;
    for (int k = 0; k < rec.dim; ++k) os << ',' << e.position[k];
    os << '\n';
  }
}

std::vector<PathEvent> read_events_csv(const std::filesystem::path& file, int dim) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open " + file.string());
  std::string line;
  if (!std::getline(is, line) || line != header(dim, "time,kind,label", nullptr)) {
    throw ConfigError("events CSV: unexpected header in " + file.string());
  }
  std::vector<PathEvent> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != static_cast<std::size_t>(3 + dim)) throw ConfigError("events CSV: wrong column count");
    PathEvent e;
    try {
      e.time = std::stod(c[0]);
      e.kind = event_kind_from_string(c[1]);
      e.label = std::stoll(c[2]);
      e.position = dim == 2 ? Point(std::stod(c[3]), std::stod(c[4])) : Point(std::stod(c[3]));
    } catch (const std::logic_error&) {
      throw ConfigError("events CSV: malformed number");
    }
    out.push_back(e);
  }
  return out;
}

void write_path_files(const std::filesystem::path& dir, const PathRecord& rec) {
  std::filesystem::create_directories(dir);
  write_path_csv(dir / "paths.csv", rec);
  write_events_csv(dir / "events.csv", rec);
}

PathRecord read_path_dir(const std::filesystem::path& dir) {
  std::ifstream ms(dir / "manifest.json");
  if (!ms) throw ConfigError("run directory " + dir.string() + " has no manifest.json");
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(ms);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest.json in " + dir.string() + ": " + e.what());
  }
  if (!m.contains("path")) throw ConfigError("manifest.json in " + dir.string() + " describes no path");
  const auto& p = m.at("path");
  if (p.value("schema_version", 0) != kPathSchemaVersion) throw ConfigError("unsupported path schema version");
  PathRecord rec;
  rec.dim = p.at("dim").get<int>();
  rec.model_id = p.at("model_id").get<std::string>();
  rec.scheme = p.at("scheme").get<std::string>();
  rec.R = p.at("R").get<double>();
  rec.dt = p.at("dt").get<double>();
  rec.seed = p.at("seed").get<std::uint64_t>();
  rec.retried_steps = p.value("retried_steps", std::int64_t{0});
  std::ifstream ps(dir / "paths.csv");
  if (!ps) throw ConfigError("run directory " + dir.string() + " has no paths.csv");
  rec.frames = read_path_csv(ps, rec.dim);
  for (auto& f : rec.frames) f.step = static_cast<std::int64_t>(std::llround(f.time / rec.dt));
  if (std::filesystem::exists(dir / "events.csv")) rec.events = read_events_csv(dir / "events.csv", rec.dim);
  return rec;
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ConfigError("malformed number \"" + s + "\" in checkpoint");
  return v;
}

}  // namespace ibm
