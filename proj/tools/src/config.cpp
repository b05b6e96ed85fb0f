#include "config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <toml.hpp>

#include "ibm/errors.hpp"

namespace ibm::cli {

namespace {

enum class Kind { kInt, kFloat, kString, kFloats, kStrings };

struct Key {
  const char* section;
  const char* name;
  Kind kind;
  double num;         // default for numbers
  const char* str;    // default for strings
  std::vector<double> floats;
};

const std::vector<Key>& schema() {
  static const std::vector<Key> keys = {
      {"run", "output_dir", Kind::kString, 0, "runs", {}},
      {"run", "run_id", Kind::kString, 0, "", {}},
      {"run", "workers", Kind::kInt, 0, nullptr, {}},

      {"model", "kind", Kind::kString, 0, "sine", {}},
      {"model", "beta", Kind::kFloat, 2.0, nullptr, {}},
      {"model", "alpha", Kind::kFloat, 1.0, nullptr, {}},
      {"model", "dim", Kind::kInt, 1, nullptr, {}},
      {"model", "intensity", Kind::kFloat, 1.0, nullptr, {}},
      {"model", "potential", Kind::kString, 0, "zero", {}},
      {"model", "eps", Kind::kFloat, 1.0, nullptr, {}},
      {"model", "sigma", Kind::kFloat, 1.0, nullptr, {}},
      {"model", "power", Kind::kInt, 12, nullptr, {}},

      {"sampler", "method", Kind::kString, 0, "auto", {}},
      {"sampler", "window", Kind::kFloat, 0.0, nullptr, {}},
      {"sampler", "grid_size", Kind::kInt, 0, nullptr, {}},
      {"sampler", "matrix_size", Kind::kInt, 0, nullptr, {}},
      {"sampler", "gibbs_particles", Kind::kInt, -1, nullptr, {}},
      {"sampler", "gibbs_sweeps", Kind::kInt, 200, nullptr, {}},
      {"sampler", "gibbs_step", Kind::kFloat, 0.5, nullptr, {}},
      {"sampler", "init_file", Kind::kString, 0, "", {}},

      {"scheme", "type", Kind::kString, 0, "lower", {}},
      {"scheme", "R", Kind::kFloat, 20.0, nullptr, {}},
      {"scheme", "dt", Kind::kFloat, 1e-3, nullptr, {}},
      {"scheme", "t_end", Kind::kFloat, 1.0, nullptr, {}},
      {"scheme", "record_stride", Kind::kInt, 10, nullptr, {}},
      {"scheme", "reflect_eps", Kind::kFloat, -1.0, nullptr, {}},
      {"scheme", "birth_shell", Kind::kFloat, -1.0, nullptr, {}},
      {"scheme", "birth_intensity", Kind::kFloat, -1.0, nullptr, {}},
      {"scheme", "max_retries", Kind::kInt, 8, nullptr, {}},

      {"drift", "mode", Kind::kString, 0, "truncated", {}},
      {"drift", "radius", Kind::kFloat, 16.0, nullptr, {}},
      {"drift", "variant", Kind::kString, 0, "shifted", {}},
      {"drift", "r", Kind::kFloat, 2.0, nullptr, {}},
      {"drift", "s", Kind::kFloat, 4.0, nullptr, {}},
      {"drift", "p", Kind::kFloat, 2.0, nullptr, {}},
      {"drift", "rho_s", Kind::kFloat, 0.0, nullptr, {}},
      {"drift", "a_level", Kind::kInt, 0, nullptr, {}},

      {"diagnostics", "checks", Kind::kStrings, 0, nullptr, {}},
      {"diagnostics", "runs", Kind::kStrings, 0, nullptr, {}},
      {"diagnostics", "tol_se", Kind::kFloat, 3.0, nullptr, {}},
      {"diagnostics", "mono_se", Kind::kFloat, 2.0, nullptr, {}},
      {"diagnostics", "bins", Kind::kInt, 20, nullptr, {}},
      {"diagnostics", "r_max", Kind::kFloat, 2.0, nullptr, {}},
      {"diagnostics", "buffer", Kind::kFloat, -1.0, nullptr, {}},
      {"diagnostics", "lags", Kind::kFloats, 0, nullptr, {0.005, 0.01, 0.02, 0.04}},
      {"diagnostics", "checkpoints", Kind::kFloats, 0, nullptr, {}},
      {"diagnostics", "window", Kind::kFloat, 0.0, nullptr, {}},
      {"diagnostics", "r", Kind::kFloat, 0.0, nullptr, {}},
      {"diagnostics", "T", Kind::kFloat, 1.0, nullptr, {}},
      {"diagnostics", "t", Kind::kFloat, -1.0, nullptr, {}},
      {"diagnostics", "label", Kind::kInt, 1, nullptr, {}},
      {"diagnostics", "bootstrap", Kind::kInt, 200, nullptr, {}},

      {"seeds", "master", Kind::kInt, 1, nullptr, {}},
      {"seeds", "replicas", Kind::kInt, 1, nullptr, {}},

      {"ladder", "R", Kind::kFloats, 0, nullptr, {8.0, 16.0, 32.0}},
      {"ladder", "R_big", Kind::kFloat, 64.0, nullptr, {}},
      {"ladder", "upper_R", Kind::kFloat, 32.0, nullptr, {}},
      {"ladder", "t", Kind::kFloat, 0.5, nullptr, {}},
      {"ladder", "analysis_window", Kind::kFloat, 25.0, nullptr, {}},
      {"ladder", "sample_window", Kind::kFloat, 80.0, nullptr, {}},
      {"ladder", "z_decrease", Kind::kFloat, 2.0, nullptr, {}},
      {"ladder", "z_upper", Kind::kFloat, 3.0, nullptr, {}},
  };
  return keys;
}

const Key* lookup(const std::string& section, const std::string& name) {
  for (const auto& k : schema()) {
    if (section == k.section && name == k.name) return &k;
  }
  return nullptr;
}

std::pair<std::string, std::string> split_key(const std::string& dotted) {
  const auto dot = dotted.find('.');
  if (dot == std::string::npos) throw ConfigError("config key \"" + dotted + "\" must look like section.key");
  return {dotted.substr(0, dot), dotted.substr(dot + 1)};
}

// Checks a TOML node against the schema and stores it in canonical form
// (integers widened to floats where the key is a float).
void coerce_into(toml::table& sec, const Key& k, const toml::node& n, const std::string& where) {
  const std::string full = std::string(k.section) + "." + k.name;
  auto bad = [&](const char* want) {
    return ConfigError(where + ": " + full + " must be " + want);
  };
  switch (k.kind) {
    case Kind::kInt:
      if (!n.is_integer()) throw bad("an integer");
      sec.insert_or_assign(k.name, *n.value<std::int64_t>());
      return;
    case Kind::kFloat:
      if (!n.is_number()) throw bad("a number");
      sec.insert_or_assign(k.name, *n.value<double>());
      return;
    case Kind::kString:
      if (!n.is_string()) throw bad("a string");
      sec.insert_or_assign(k.name, *n.value<std::string>());
      return;
    case Kind::kFloats: {
      const auto* a = n.as_array();
      if (a == nullptr) throw bad("an array of numbers");
      toml::array out;
      for (const auto& e : *a) {
        if (!e.is_number()) throw bad("an array of numbers");
        out.push_back(*e.value<double>());
      }
      sec.insert_or_assign(k.name, std::move(out));
      return;
    }
    case Kind::kStrings: {
      const auto* a = n.as_array();
      if (a == nullptr) throw bad("an array of strings");
      toml::array out;
      for (const auto& e : *a) {
        if (!e.is_string()) throw bad("an array of strings");
        out.push_back(*e.value<std::string>());
      }
      sec.insert_or_assign(k.name, std::move(out));
      return;
    }
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

struct ExperimentConfig::Impl {
  toml::table table;
};

ExperimentConfig::ExperimentConfig() : impl_(std::make_unique<Impl>()) {
  for (const auto& k : schema()) {
    auto* sec = impl_->table[k.section].as_table();
    if (sec == nullptr) {
      impl_->table.insert(k.section, toml::table{});
      sec = impl_->table[k.section].as_table();
    }
    switch (k.kind) {
      case Kind::kInt:
        sec->insert_or_assign(k.name, static_cast<std::int64_t>(k.num));
        break;
      case Kind::kFloat:
        sec->insert_or_assign(k.name, k.num);
        break;
      case Kind::kString:
        sec->insert_or_assign(k.name, std::string(k.str));
        break;
      case Kind::kFloats: {
        toml::array a;
        for (double v : k.floats) a.push_back(v);
        sec->insert_or_assign(k.name, std::move(a));
        break;
      }
      case Kind::kStrings:
        sec->insert_or_assign(k.name, toml::array{});
        break;
    }
  }
}

ExperimentConfig::~ExperimentConfig() = default;
ExperimentConfig::ExperimentConfig(const ExperimentConfig& o) : impl_(std::make_unique<Impl>(*o.impl_)) {}
ExperimentConfig& ExperimentConfig::operator=(const ExperimentConfig& o) {
  if (this != &o) *impl_ = *o.impl_;
  return *this;
}

ExperimentConfig ExperimentConfig::from_toml_string(const std::string& text, const std::string& origin) {
  toml::table parsed;
  try {
    parsed = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << origin << ": " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(os.str());
  }
  ExperimentConfig cfg;
  for (const auto& [sec_key, sec_node] : parsed) {
    const std::string sec(sec_key.str());
    const auto* sec_table = sec_node.as_table();
    if (sec_table == nullptr) throw ConfigError(origin + ": top-level key \"" + sec + "\" must be a [section]");
    bool known = false;
    for (const auto& k : schema()) known = known || sec == k.section;
    if (!known) throw ConfigError(origin + ": unknown section [" + sec + "]");
    for (const auto& [key, node] : *sec_table) {
      const std::string name(key.str());
      const Key* k = lookup(sec, name);
      if (k == nullptr) throw ConfigError(origin + ": unknown key " + sec + "." + name);
      coerce_into(*cfg.impl_->table[sec].as_table(), *k, node, origin);
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open config file " + file.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return from_toml_string(ss.str(), file.string());
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config JSON must be an object");
  ExperimentConfig cfg;
  for (const auto& [sec, block] : j.items()) {
    if (!block.is_object()) throw ConfigError("config JSON section " + sec + " must be an object");
    // JSON scalars and arrays are valid TOML values, so reuse the override path.
    for (const auto& [key, value] : block.items()) cfg.set(sec + "." + key, value.dump());
  }
  return cfg;
}

void ExperimentConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got \"" + assignment + "\"");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void ExperimentConfig::set(const std::string& dotted_key, const std::string& value) {
  const auto [sec, name] = split_key(dotted_key);
  const Key* k = lookup(sec, name);
  if (k == nullptr) throw ConfigError("unknown key " + dotted_key);
  toml::table parsed;
  bool ok = true;
  try {
    parsed = toml::parse("v = " + value);
  } catch (const toml::parse_error&) {
    ok = false;
  }
  const std::string where = "--set " + dotted_key;
  if (ok) {
    coerce_into(*impl_->table[sec].as_table(), *k, *parsed.get("v"), where);
  } else {
    coerce_into(*impl_->table[sec].as_table(), *k, toml::value<std::string>(value), where);
  }
}

namespace {

const toml::node& node_at(const toml::table& t, const std::string& dotted) {
  const auto [sec, name] = split_key(dotted);
  const auto* n = t.at_path(dotted).node();
  if (n == nullptr) throw ConfigError("missing config key " + sec + "." + name);
  return *n;
}

}  // namespace

double ExperimentConfig::get_float(const std::string& key) const { return *node_at(impl_->table, key).value<double>(); }

std::int64_t ExperimentConfig::get_int(const std::string& key) const {
  return *node_at(impl_->table, key).value<std::int64_t>();
}

std::string ExperimentConfig::get_string(const std::string& key) const {
  return *node_at(impl_->table, key).value<std::string>();
}

std::vector<double> ExperimentConfig::get_floats(const std::string& key) const {
  std::vector<double> out;
  for (const auto& e : *node_at(impl_->table, key).as_array()) out.push_back(*e.value<double>());
  return out;
}

std::vector<std::string> ExperimentConfig::get_strings(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& e : *node_at(impl_->table, key).as_array()) out.push_back(*e.value<std::string>());
  return out;
}

void ExperimentConfig::set_model_shorthand(const std::string& name) {
  if (name.rfind("sine", 0) == 0 && name.size() > 4) {
    set("model.kind", "\"sine\"");
    set("model.beta", name.substr(4));
  } else if (name == "sine" || name == "bessel" || name == "ginibre" || name == "poisson" || name == "ruelle") {
    set("model.kind", "\"" + name + "\"");
  } else {
    throw ConfigError("unknown model \"" + name + "\" (expected sine1, sine2, sine4, bessel, ginibre, poisson, ruelle)");
  }
  if (name == "ginibre") set("model.dim", "2");
}

std::string ExperimentConfig::to_toml() const {
  std::ostringstream os;
  os << impl_->table << '\n';
  return os.str();
}

nlohmann::json ExperimentConfig::to_json() const {
  std::ostringstream os;
  os << toml::json_formatter{impl_->table};
  return nlohmann::json::parse(os.str());
}

std::string ExperimentConfig::fingerprint(const std::string& command) const {
  toml::table t = impl_->table;
  if (auto* run = t["run"].as_table()) {
    run->erase("output_dir");
    run->erase("run_id");
    run->erase("workers");
  }
  std::ostringstream os;
  os << command << '\n' << t;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return std::string(buf).substr(0, 10);
}

ModelSpec ExperimentConfig::model() const {
  const auto kind = get_string("model.kind");
  if (kind == "sine") return ModelSpec::sine(get_float("model.beta"));
  if (kind == "bessel") return ModelSpec::bessel(get_float("model.alpha"));
  if (kind == "ginibre") return ModelSpec::ginibre();
  const int dim = static_cast<int>(get_int("model.dim"));
  if (kind == "poisson") return ModelSpec::poisson(get_float("model.intensity"), dim);
  if (kind == "ruelle") {
    nlohmann::json p = {{"type", get_string("model.potential")},
                        {"eps", get_float("model.eps")},
                        {"sigma", get_float("model.sigma")},
                        {"n", get_int("model.power")}};
    return ModelSpec::ruelle(potential_from_json(p), get_float("model.beta"), get_float("model.intensity"), dim);
  }
  throw ConfigError("model.kind must be sine, bessel, ginibre, poisson or ruelle; got \"" + kind + "\"");
}

DriftSpec ExperimentConfig::drift() const {
  DriftSpec d;
  const auto mode = get_string("drift.mode");
  if (mode == "truncated") {
    d.mode = DriftMode::kTruncated;
  } else if (mode == "cutoff") {
    d.mode = DriftMode::kCutoff;
  } else {
    throw ConfigError("drift.mode must be truncated or cutoff");
  }
  d.radius = get_float("drift.radius");
  d.variant = ginibre_variant_from_string(get_string("drift.variant"));
  d.cutoff.r = get_float("drift.r");
  d.cutoff.s = get_float("drift.s");
  d.cutoff.p = get_float("drift.p");
  d.cutoff.rho_s = get_float("drift.rho_s");
  return d;
}

SamplerSpec ExperimentConfig::sampler(const ModelSpec& model) const {
  SamplerSpec s;
  s.method = get_string("sampler.method");
  s.window = get_float("sampler.window");
  if (s.window <= 0.0) {
    const DriftSpec d = drift();
    s.window = get_float("scheme.R") + (d.mode == DriftMode::kTruncated ? d.radius : d.cutoff.s);
  }
  s.grid_size = static_cast<int>(get_int("sampler.grid_size"));
  s.matrix_size = static_cast<int>(get_int("sampler.matrix_size"));
  s.gibbs_particles = static_cast<int>(get_int("sampler.gibbs_particles"));
  s.gibbs.sweeps = static_cast<int>(get_int("sampler.gibbs_sweeps"));
  s.gibbs.step = get_float("sampler.gibbs_step");
  (void)model;
  return s;
}

SchemeParams ExperimentConfig::scheme() const {
  SchemeParams p;
  p.scheme = scheme_from_string(get_string("scheme.type"));
  p.R = get_float("scheme.R");
  p.dt = get_float("scheme.dt");
  p.t_end = get_float("scheme.t_end");
  p.record_stride = static_cast<int>(get_int("scheme.record_stride"));
  p.reflect_eps = get_float("scheme.reflect_eps");
  p.birth_shell = get_float("scheme.birth_shell");
  p.birth_intensity = get_float("scheme.birth_intensity");
  p.max_retries = static_cast<int>(get_int("scheme.max_retries"));
  p.drift = drift();
  if (p.drift.mode == DriftMode::kCutoff) {
    const ModelSpec m = model();
    const double intensity = m.kind == ModelKind::kBessel ? 1.0 : m.intensity_const;
    p.drift.cutoff.a = ShellBounds::for_level(static_cast<int>(get_int("drift.a_level")), intensity, m.dim);
  }
  p.workers = workers();
  p.validate();
  return p;
}

CorrelationOptions ExperimentConfig::correlations() const {
  CorrelationOptions c;
  c.bins = static_cast<int>(get_int("diagnostics.bins"));
  c.r_max = get_float("diagnostics.r_max");
  c.buffer = get_float("diagnostics.buffer");
  if (c.bins < 1 || !(c.r_max > 0.0)) throw ConfigError("diagnostics.bins and diagnostics.r_max must be positive");
  return c;
}

LadderSpec ExperimentConfig::ladder(const ModelSpec& model) const {
  LadderSpec l;
  l.R = get_floats("ladder.R");
  l.R_big = get_float("ladder.R_big");
  l.upper_R = get_float("ladder.upper_R");
  l.t = get_float("ladder.t");
  l.dt = get_float("scheme.dt");
  l.drift = drift();
  l.analysis_window = get_float("ladder.analysis_window");
  l.replicas = replicas();
  l.seed = master_seed();
  l.z_decrease = get_float("ladder.z_decrease");
  l.z_upper = get_float("ladder.z_upper");
  l.bootstrap = static_cast<int>(get_int("diagnostics.bootstrap"));
  l.workers = workers();
  const double reach = l.drift.mode == DriftMode::kTruncated ? l.drift.radius : l.drift.cutoff.s;
  if (get_float("ladder.sample_window") < l.R_big + reach && model.kind != ModelKind::kRuellePair) {
    throw ConfigError("ladder.sample_window must be at least R_big plus the drift reach");
  }
  l.validate();
  return l;
}

std::uint64_t ExperimentConfig::master_seed() const {
  const auto s = get_int("seeds.master");
  if (s < 0) throw ConfigError("seeds.master must be nonnegative");
  return static_cast<std::uint64_t>(s);
}

std::size_t ExperimentConfig::replicas() const {
  const auto r = get_int("seeds.replicas");
  if (r < 1) throw ConfigError("seeds.replicas must be at least 1");
  return static_cast<std::size_t>(r);
}

int ExperimentConfig::workers() const {
  const auto w = get_int("run.workers");
  if (w < 0) throw ConfigError("run.workers must be nonnegative");
  return static_cast<int>(w);
}

}  // namespace ibm::cli
