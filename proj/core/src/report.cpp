#include "ibm/diagnostics/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ibm/errors.hpp"

namespace ibm {

Statistic& DiagnosticsReport::add(Statistic s) {
  if (s.seed_range.empty()) s.seed_range = seed_range_;
  stats_.push_back(std::move(s));
  return stats_.back();
}

Statistic& DiagnosticsReport::add(const std::string& name, double value, std::optional<double> se,
                                  std::size_t n_replicas, const std::string& note) {
  Statistic s;
  s.name = name;
  s.value = value;
  s.se = se;
  s.n_replicas = n_replicas;
  s.note = note;
  return add(std::move(s));
}

Verdict& DiagnosticsReport::verdict(const std::string& name, bool pass, const std::string& rule,
                                    std::vector<std::string> inputs) {
  verdicts_.push_back({name, pass, rule, std::move(inputs)});
  return verdicts_.back();
}

void DiagnosticsReport::merge(const DiagnosticsReport& other) {
  stats_.insert(stats_.end(), other.stats_.begin(), other.stats_.end());
  verdicts_.insert(verdicts_.end(), other.verdicts_.begin(), other.verdicts_.end());
  caveats_.insert(caveats_.end(), other.caveats_.begin(), other.caveats_.end());
}

const Statistic* DiagnosticsReport::find(const std::string& name) const {
  for (const auto& s : stats_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool DiagnosticsReport::passed() const {
  for (const auto& v : verdicts_) {
    if (!v.pass) return false;
  }
  return true;
}

namespace {

// JSON has no NaN/inf; encode them as strings.
nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double denum(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  return std::nan("");
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

nlohmann::json DiagnosticsReport::to_json() const {
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& s : stats_) {
    nlohmann::json j = {{"name", s.name}, {"value", num(s.value)}, {"n_replicas", s.n_replicas},
                        {"seed_range", s.seed_range}};
    if (s.se) {
      j["se"] = num(*s.se);
    } else {
      j["se"] = "deterministic";
    }
    if (!s.note.empty()) j["note"] = s.note;
    stats.push_back(j);
  }
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : verdicts_) {
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"rule", v.rule}, {"inputs", v.inputs}});
  }
  return {{"schema_version", kReportSchemaVersion}, {"title", title_},    {"passed", passed()},
          {"statistics", stats},                    {"verdicts", verdicts}, {"caveats", caveats_},
          {"provenance", provenance_}};
}

DiagnosticsReport DiagnosticsReport::from_json(const nlohmann::json& j) {
  try {
    DiagnosticsReport r(j.at("title").get<std::string>());
    for (const auto& s : j.at("statistics")) {
      Statistic st;
      st.name = s.at("name").get<std::string>();
      st.value = denum(s.at("value"));
      if (!(s.at("se").is_string() && s.at("se").get<std::string>() == "deterministic")) st.se = denum(s.at("se"));
      st.n_replicas = s.value("n_replicas", std::size_t{0});
      st.seed_range = s.value("seed_range", std::string{});
      st.note = s.value("note", std::string{});
      r.stats_.push_back(st);
    }
    for (const auto& v : j.at("verdicts")) {
      r.verdicts_.push_back({v.at("name").get<std::string>(), v.at("pass").get<bool>(), v.at("rule").get<std::string>(),
                             v.value("inputs", std::vector<std::string>{})});
    }
    r.caveats_ = j.value("caveats", std::vector<std::string>{});
    r.provenance_ = j.value("provenance", nlohmann::json::object());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

std::string DiagnosticsReport::to_markdown() const {
  std::ostringstream os;
  os << "# " << title_ << "\n\n";
  os << "Overall: **" << (passed() ? "PASS" : "FAIL") << "**\n\n";
  if (!verdicts_.empty()) {
    os << "## Verdicts\n\n| check | result | rule |\n|---|---|---|\n";
    for (const auto& v : verdicts_) os << "| " << v.name << " | " << (v.pass ? "pass" : "FAIL") << " | " << v.rule << " |\n";
    os << "\n";
  }
  os << "## Statistics\n\n| name | value | SE | replicas | seeds |\n|---|---|---|---|---|\n";
  for (const auto& s : stats_) {
    os << "| " << s.name << " | " << fmt(s.value) << " | " << (s.se ? fmt(*s.se) : std::string("deterministic")) << " | "
       << s.n_replicas << " | " << s.seed_range << " |\n";
  }
  if (!caveats_.empty()) {
    os << "\n## Caveats\n\n";
    for (const auto& c : caveats_) os << "- " << c << "\n";
  }
  return os.str();
}

void DiagnosticsReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream js(dir / "report.json");
  if (!js) throw ConfigError("cannot write " + (dir / "report.json").string());
  js << to_json().dump(2) << '\n';
  std::ofstream md(dir / "report.md");
  if (!md) throw ConfigError("cannot write " + (dir / "report.md").string());
  md << to_markdown();
}

}  // namespace ibm
