#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ibm/core/configuration.hpp"

namespace ibm {

inline constexpr int kPathSchemaVersion = 1;

enum class EventKind { kBirth, kDeath, kFreeze };

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

struct PathEvent {
  double time = 0.0;
  EventKind kind = EventKind::kBirth;
  std::int64_t label = 0;
  Point position;
};

/// All particles alive at one recorded time, sorted by label.
struct Frame {
  double time = 0.0;
  std::int64_t step = 0;
  std::vector<Particle> particles;

  const Particle* find(std::int64_t label) const;
  Configuration configuration(double window_radius = 0.0) const;
};

struct PathRecord {
  int dim = 1;
  std::string model_id;
  std::string scheme;
  double R = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<Frame> frames;
  std::vector<PathEvent> events;
  /// Steps that needed at least one collision retry.
  std::int64_t retried_steps = 0;

  std::vector<double> times() const;
  /// Frame index whose time is closest to t.
  std::size_t frame_at(double t) const;
  /// Position of `label` in every frame; empty where the particle is absent.
  std::vector<std::optional<Point>> trajectory(std::int64_t label) const;

  /// Header fields plus the event log, for manifests.
  nlohmann::json meta_json() const;
};

/// Paths CSV: `time,label,frozen,x1[,x2],local_time`, one row per particle per frame.
void write_path_csv(std::ostream& os, const PathRecord& rec);
void write_path_csv(const std::filesystem::path& file, const PathRecord& rec);
/// Rebuilds frames (not header fields) from a paths CSV.
std::vector<Frame> read_path_csv(std::istream& is, int dim);

/// Events CSV: `time,kind,label,x1[,x2]`.
void write_events_csv(const std::filesystem::path& file, const PathRecord& rec);
std::vector<PathEvent> read_events_csv(const std::filesystem::path& file, int dim);

/// Writes paths.csv and events.csv into `dir`; the caller owns manifest.json.
void write_path_files(const std::filesystem::path& dir, const PathRecord& rec);
/// Reads a run directory written by `write_path_files` plus its manifest.json.
PathRecord read_path_dir(const std::filesystem::path& dir);

/// Exact text encoding of doubles used in checkpoints.
std::string hex_double(double v);
double parse_hex_double(const std::string& s);

}  // namespace ibm
