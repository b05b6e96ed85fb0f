#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ibm {

inline constexpr int kReportSchemaVersion = 1;

struct Statistic {
  std::string name;
  double value = 0.0;
  /// Monte Carlo standard error; nullopt for deterministic quantities.
  std::optional<double> se;
  std::size_t n_replicas = 0;
  std::string seed_range;
  std::string note;
};

/// A verdict names the statistics it was computed from and the rule used,
/// so that it can be re-derived from the stored values.
struct Verdict {
  std::string name;
  bool pass = false;
  std::string rule;
  std::vector<std::string> inputs;
};

class DiagnosticsReport {
 public:
  explicit DiagnosticsReport(std::string title = "diagnostics") : title_(std::move(title)) {}

  Statistic& add(Statistic s);
  Statistic& add(const std::string& name, double value, std::optional<double> se = std::nullopt,
                 std::size_t n_replicas = 0, const std::string& note = "");
  Verdict& verdict(const std::string& name, bool pass, const std::string& rule, std::vector<std::string> inputs = {});
  void caveat(const std::string& text) { caveats_.push_back(text); }
  void set_provenance(nlohmann::json p) { provenance_ = std::move(p); }
  /// Seed range applied to statistics added afterwards without one.
  void set_seed_range(std::string r) { seed_range_ = std::move(r); }
  void merge(const DiagnosticsReport& other);

  const Statistic* find(const std::string& name) const;
  const std::vector<Statistic>& statistics() const { return stats_; }
  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  const std::string& title() const { return title_; }
  /// True when every verdict passed (vacuously true without verdicts).
  bool passed() const;

  nlohmann::json to_json() const;
  std::string to_markdown() const;
  static DiagnosticsReport from_json(const nlohmann::json& j);
  /// Writes report.json and report.md into `dir`.
  void write(const std::filesystem::path& dir) const;

 private:
  std::string title_;
  std::vector<Statistic> stats_;
  std::vector<Verdict> verdicts_;
  std::vector<std::string> caveats_;
  nlohmann::json provenance_ = nlohmann::json::object();
  std::string seed_range_;
};

}  // namespace ibm
