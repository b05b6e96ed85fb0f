#include "ibm/dynamics/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ibm/errors.hpp"
#include "ibm/pointfields/window.hpp"
#include "ibm/random/philox.hpp"
#include "ibm/random/variates.hpp"
#include "ibm/util/parallel.hpp"

namespace ibm {

namespace {

constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;
constexpr std::uint64_t kBirthTag = 0x6269727468ULL;

bool log_model(const ModelSpec& m) { return m.kind != ModelKind::kRuellePair; }

bool singular_model(const ModelSpec& m) {
  return log_model(m) || m.potential->smoothness() == Smoothness::kSmoothOffOrigin;
}

nlohmann::json particle_json(const Particle& p) {
  nlohmann::json x = nlohmann::json::array();
  for (int k = 0; k < p.position.dim(); ++k) x.push_back(hex_double(p.position[k]));
  return {p.label, p.frozen, x, hex_double(p.local_time)};
}

Particle particle_from_json(const nlohmann::json& j) {
  Particle p;
  p.label = j.at(0).get<std::int64_t>();
  p.frozen = j.at(1).get<bool>();
  const auto& x = j.at(2);
  p.position = x.size() == 2 ? Point(parse_hex_double(x.at(0)), parse_hex_double(x.at(1)))
                             : Point(parse_hex_double(x.at(0)));
  p.local_time = parse_hex_double(j.at(3).get<std::string>());
  return p;
}

}  // namespace

std::size_t SimState::moving_count() const {
  return static_cast<std::size_t>(
      std::count_if(particles.begin(), particles.end(), [](const Particle& p) { return !p.frozen; }));
}

Integrator::Integrator(ModelSpec model, SchemeParams params, std::uint64_t seed)
    : model_(std::move(model)),
      params_(std::move(params)),
      seed_(seed),
      field_(model_, params_.drift),
      check_order_(model_.dim == 1 && singular_model(model_)),
      gap_floor_(0.0) {
  params_.validate();
  // A pair at distance u is kicked apart by about beta h / u in one step. At the
  // floor that kick is 0.05 for the finest retry step h = dt / 2^max_retries,
  // small against unit spacing, so every accepted state can still be stepped.
  if (log_model(model_)) gap_floor_ = 20.0 * model_.beta * params_.dt / std::ldexp(1.0, params_.max_retries);
}

SimState Integrator::init(const Configuration& init) const {
  if (init.dim() != model_.dim) throw InvalidParameter("initial configuration dimension does not match the model");
  SimState s;
  const LabeledConfig lab = label(init);
  s.particles = lab.particles;
  for (auto& p : s.particles) {
    if (p.position.norm() > params_.R) p.frozen = true;
    if (model_.kind == ModelKind::kBessel && !(p.position[0] > 0.0)) {
      throw DomainError("Bessel initial configuration must lie in (0, inf)");
    }
    p.local_time = 0.0;
  }
  s.next_label = static_cast<std::int64_t>(s.particles.size()) + 1;
  return s;
}

PathRecord Integrator::start(const SimState& state) const {
  PathRecord rec;
  rec.dim = model_.dim;
  rec.model_id = model_.id();
  rec.scheme = to_string(params_.scheme);
  rec.R = params_.R;
  rec.dt = params_.dt;
  rec.seed = seed_;
  record(state, rec);
  return rec;
}

void Integrator::record(const SimState& state, PathRecord& rec) const {
  Frame f;
  f.step = state.step;
  f.time = static_cast<double>(state.step) * params_.dt;
  f.particles = state.particles;
  rec.frames.push_back(std::move(f));
}

bool Integrator::ordered_ok(const std::vector<Particle>& before, const std::vector<Particle>& after) const {
  std::vector<std::size_t> order(before.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return before[a].position[0] < before[b].position[0]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!(after[order[k - 1]].position[0] < after[order[k]].position[0])) return false;
  }
  return true;
}

Point Integrator::increment(std::int64_t label, std::int64_t step, int level, int k) const {
  // Node 1 of a heap holds the increment over the whole step; node j splits
  // into 2j and 2j+1 by a Brownian bridge draw stored at slot j.
  const std::uint64_t stream = mix_stream(kNoiseTag, static_cast<std::uint64_t>(label));
  const std::uint64_t base = static_cast<std::uint64_t>(step) * 256;
  auto gauss = [&](std::uint64_t slot) {
    const auto [g1, g2] = Rng::gaussian_pair_at(seed_, stream, base + slot);
    return model_.dim == 2 ? Point(g1, g2) : Point(g1);
  };
  double h = params_.dt;
  Point w = gauss(0) * std::sqrt(h);
  std::uint64_t node = 1;
  for (int depth = 1; depth <= level; ++depth) {
    const int bit = (k >> (level - depth)) & 1;
    const Point z = gauss(node) * (0.5 * std::sqrt(h));
    w = w * 0.5 + (bit ? -1.0 * z : z);
    node = 2 * node + static_cast<std::uint64_t>(bit);
    h *= 0.5;
  }
  return w;
}

bool Integrator::separated(const std::vector<Particle>& ps) const {
  if (gap_floor_ <= 0.0) return true;
  const bool bessel = model_.kind == ModelKind::kBessel;
  std::vector<Point> pos(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    pos[i] = ps[i].position;
    if (bessel && !ps[i].frozen && pos[i][0] < gap_floor_) return false;
  }
  const NeighborIndex index(pos, 1.0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].frozen) continue;
    bool ok = true;
    index.for_each_near(pos[i], gap_floor_, [&](std::size_t j) {
      if (j != i && distance(pos[i], pos[j]) < gap_floor_) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool Integrator::attempt(SimState& state, std::vector<PathEvent>& events, int level) const {
  const int m = 1 << level;
  const double h = params_.dt / m;
  const double R = params_.R;
  const bool bessel = model_.kind == ModelKind::kBessel;
  std::vector<Particle> work = state.particles;
  std::vector<PathEvent> local;

  for (int k = 0; k < m; ++k) {
    const std::size_t n = work.size();
    std::vector<Point> pos(n);
    std::vector<std::size_t> moving;
    for (std::size_t i = 0; i < n; ++i) {
      pos[i] = work[i].position;
      if (!work[i].frozen) moving.push_back(i);
    }
    const auto snap = field_.prepare(pos);
    std::vector<Point> drift(n, Point::zero(model_.dim));
    try {
      parallel_for(
          moving.size(), [&](std::size_t j) { drift[moving[j]] = field_.at(snap, moving[j]); }, params_.workers);
    } catch (const CollisionError&) {
      return false;
    } catch (const DomainError&) {
      return false;
    }

    const double t_event = (static_cast<double>(state.step) + static_cast<double>(k + 1) / m) * params_.dt;
    std::vector<Particle> next = work;
    std::vector<char> dead(n, 0);
    for (std::size_t i : moving) {
      Particle& p = next[i];
      const Point x = p.position + drift[i] * h + increment(p.label, state.step, level, k);
      if (!x.is_finite()) return false;
      if (bessel && !(x[0] > 0.0)) return false;
      switch (params_.scheme) {
        case Scheme::kLower: {
          const auto [y, inc] = reflect_project(x, R);
          p.position = y;
          p.local_time += inc;
          break;
        }
        case Scheme::kUpper:
          p.position = x;
          if (x.norm() > R) {
            dead[i] = 1;
            local.push_back({t_event, EventKind::kDeath, p.label, x});
          }
          break;
        case Scheme::kReference:
          p.position = x;
          if (x.norm() > R) {
            p.frozen = true;
            local.push_back({t_event, EventKind::kFreeze, p.label, x});
          }
          break;
      }
    }

    if (std::any_of(dead.begin(), dead.end(), [](char c) { return c != 0; })) {
      std::vector<Particle> before, after;
      for (std::size_t i = 0; i < n; ++i) {
        if (dead[i]) continue;
        before.push_back(work[i]);
        after.push_back(next[i]);
      }
      if (check_order_ && !ordered_ok(before, after)) return false;
      if (!separated(after)) return false;
      work = std::move(after);
    } else {
      if (check_order_ && !ordered_ok(work, next)) return false;
      if (!separated(next)) return false;
      work = std::move(next);
    }
  }
  state.particles = std::move(work);
  events.insert(events.end(), local.begin(), local.end());
  return true;
}

void Integrator::births(SimState& state, std::vector<PathEvent>& events) const {
  const double R = params_.R;
  const double w = params_.shell();
  const int d = model_.dim;
  const bool bessel = model_.kind == ModelKind::kBessel;
  double rho = params_.birth_intensity;
  if (rho < 0.0) rho = model_.intensity(d == 2 ? Point(R, 0.0) : Point(R));
  double vol = ball_volume(R + w, d) - ball_volume(R, d);
  if (bessel) vol *= 0.5;

  Rng rng(seed_, mix_stream(kBirthTag, static_cast<std::uint64_t>(state.step)));
  const std::int64_t ghosts = poisson_variate(rng, rho * vol);
  const double sq = std::sqrt(params_.dt);
  const double t = static_cast<double>(state.step + 1) * params_.dt;
  for (std::int64_t g = 0; g < ghosts; ++g) {
    Point y;
    if (d == 1) {
      const double r = R + w * rng.uniform();
      y = Point((bessel || rng.uniform() < 0.5) ? r : -r);
    } else {
      const double r = std::sqrt(R * R + ((R + w) * (R + w) - R * R) * rng.uniform());
      const double phi = 2.0 * M_PI * rng.uniform();
      y = Point(r * std::cos(phi), r * std::sin(phi));
    }
    const double n1 = rng.normal();
    const double n2 = rng.normal();
    y += (d == 2 ? Point(n1, n2) : Point(n1)) * sq;
    const double u = rng.uniform();
    if (y.norm() > R || (bessel && !(y[0] > 0.0))) continue;

    // Boltzmann factor of the newcomer against every particle present;
    // logarithmic models use -log|z| restricted to |z| < 1.
    double log_factor = 0.0;
    if (!model_.is_free()) {
      for (const auto& p : state.particles) {
        const Point z = y - p.position;
        if (log_model(model_)) {
          const double r2 = z.norm2();
          if (r2 < 1.0) log_factor += 0.5 * model_.beta * std::log(r2);
        } else {
          log_factor -= model_.beta * model_.potential->value(z);
        }
      }
    }
    if (!(std::log(u) < log_factor)) continue;
    Particle p;
    p.label = state.next_label++;
    p.position = y;
    state.particles.push_back(p);
    events.push_back({t, EventKind::kBirth, p.label, y});
  }
}

void Integrator::step(SimState& state, PathRecord& rec) const {
  for (int level = 0; level <= params_.max_retries; ++level) {
    std::vector<PathEvent> ev;
    if (!attempt(state, ev, level)) continue;
    if (level > 0) ++rec.retried_steps;
    if (params_.scheme == Scheme::kUpper) births(state, ev);
    ++state.step;
    rec.events.insert(rec.events.end(), ev.begin(), ev.end());
    return;
  }
  throw NumericError("step " + std::to_string(state.step) + " still collides after " +
                     std::to_string(params_.max_retries) + " dt halvings; replay with seed " + std::to_string(seed_));
}

void Integrator::run_until(SimState& state, PathRecord& rec, std::int64_t stop_step, const ProgressFn& progress) const {
  const std::int64_t total = params_.total_steps();
  const std::int64_t stop = stop_step < 0 ? total : std::min(stop_step, total);
  while (state.step < stop) {
    step(state, rec);
    if (state.step % params_.record_stride == 0 || state.step == total) record(state, rec);
    if (progress) progress(state.step, total);
  }
}

PathRecord Integrator::run(const Configuration& init, const ProgressFn& progress) const {
  SimState s = this->init(init);
  PathRecord rec = start(s);
  run_until(s, rec, -1, progress);
  return rec;
}

nlohmann::json Integrator::checkpoint(const SimState& state, const PathRecord& rec) const {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : state.particles) parts.push_back(particle_json(p));
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : rec.frames) {
    nlohmann::json fp = nlohmann::json::array();
    for (const auto& p : f.particles) fp.push_back(particle_json(p));
    frames.push_back({{"step", f.step}, {"time", hex_double(f.time)}, {"particles", fp}});
  }
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : rec.events) {
    Particle p;
    p.label = e.label;
    p.position = e.position;
    events.push_back({{"time", hex_double(e.time)}, {"kind", to_string(e.kind)}, {"particle", particle_json(p)}});
  }
  return {{"schema_version", kPathSchemaVersion},
          {"seed", seed_},
          {"model", model_.to_json()},
          {"scheme", params_.to_json()},
          {"state", {{"step", state.step}, {"next_label", state.next_label}, {"particles", parts}}},
          {"record", {{"retried_steps", rec.retried_steps}, {"frames", frames}, {"events", events}}}};
}

void Integrator::restore(const nlohmann::json& j, SimState& state, PathRecord& rec) const {
  try {
    if (j.at("schema_version").get<int>() != kPathSchemaVersion) throw ConfigError("checkpoint schema mismatch");
    if (j.at("seed").get<std::uint64_t>() != seed_ || j.at("model") != model_.to_json() ||
        j.at("scheme") != params_.to_json()) {
      throw ConfigError("checkpoint was written by a run with different parameters");
    }
    const auto& s = j.at("state");
    state = SimState{};
    state.step = s.at("step").get<std::int64_t>();
    state.next_label = s.at("next_label").get<std::int64_t>();
    for (const auto& p : s.at("particles")) state.particles.push_back(particle_from_json(p));

    const auto& r = j.at("record");
    rec = PathRecord{};
    rec.dim = model_.dim;
    rec.model_id = model_.id();
    rec.scheme = to_string(params_.scheme);
    rec.R = params_.R;
    rec.dt = params_.dt;
    rec.seed = seed_;
    rec.retried_steps = r.at("retried_steps").get<std::int64_t>();
    for (const auto& f : r.at("frames")) {
      Frame fr;
      fr.step = f.at("step").get<std::int64_t>();
      fr.time = parse_hex_double(f.at("time").get<std::string>());
      for (const auto& p : f.at("particles")) fr.particles.push_back(particle_from_json(p));
      rec.frames.push_back(std::move(fr));
    }
    for (const auto& e : r.at("events")) {
      const Particle p = particle_from_json(e.at("particle"));
      rec.events.push_back({parse_hex_double(e.at("time").get<std::string>()),
                            event_kind_from_string(e.at("kind").get<std::string>()), p.label, p.position});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed checkpoint: ") + e.what());
  }
}

namespace {

PathRecord simulate_as(Scheme kind, const Configuration& init, const ModelSpec& model, SchemeParams scheme,
                       std::uint64_t seed) {
  scheme.scheme = kind;
  return Integrator(model, std::move(scheme), seed).run(init);
}

}  // namespace

PathRecord simulate_lower(const Configuration& init, const ModelSpec& model, SchemeParams scheme, std::uint64_t seed) {
  return simulate_as(Scheme::kLower, init, model, std::move(scheme), seed);
}

PathRecord simulate_upper(const Configuration& init, const ModelSpec& model, SchemeParams scheme, std::uint64_t seed) {
  return simulate_as(Scheme::kUpper, init, model, std::move(scheme), seed);
}

PathRecord simulate_reference(const Configuration& init, const ModelSpec& model, SchemeParams scheme,
                              std::uint64_t seed) {
  return simulate_as(Scheme::kReference, init, model, std::move(scheme), seed);
}

}  // namespace ibm
