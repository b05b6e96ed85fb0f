#include "ibm/dynamics/scheme.hpp"

#include <cmath>

#include "ibm/errors.hpp"

namespace ibm {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kLower:
      return "lower";
    case Scheme::kUpper:
      return "upper";
    case Scheme::kReference:
      return "reference";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "lower") return Scheme::kLower;
  if (s == "upper") return Scheme::kUpper;
  if (s == "reference") return Scheme::kReference;
  throw ConfigError("unknown scheme \"" + s + "\" (expected lower, upper or reference)");
}

double SchemeParams::shell() const { return birth_shell < 0.0 ? 6.0 * std::sqrt(dt) : birth_shell; }

std::int64_t SchemeParams::total_steps() const {
  return static_cast<std::int64_t>(std::llround(t_end / dt));
}

void SchemeParams::validate() const {
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidParameter("scheme: R must be positive");
  if (!(dt > 0.0)) throw InvalidParameter("scheme: dt must be positive");
  if (!(t_end >= 0.0)) throw InvalidParameter("scheme: t_end must be nonnegative");
  if (std::fabs(t_end / dt - static_cast<double>(total_steps())) > 1e-6) {
    throw InvalidParameter("scheme: t_end must be a whole number of steps");
  }
  if (!(eps() < R)) throw InvalidParameter("scheme: reflect_eps must be much smaller than R");
  if (!(shell() > 0.0)) throw InvalidParameter("scheme: birth_shell must be positive");
  if (record_stride < 1) throw InvalidParameter("scheme: record_stride must be at least 1");
  if (max_retries < 0 || max_retries > 8) throw InvalidParameter("scheme: max_retries must be in [0, 8]");
}

nlohmann::json SchemeParams::to_json() const {
  nlohmann::json j = {{"scheme", to_string(scheme)},
                      {"R", R},
                      {"dt", dt},
                      {"t_end", t_end},
                      {"reflect_eps", eps()},
                      {"record_stride", record_stride},
                      {"max_retries", max_retries}};
  if (scheme == Scheme::kUpper) {
    j["birth_shell"] = shell();
    j["birth_intensity"] = birth_intensity;
    j["surrogate"] = "ghost-shell births with Metropolis acceptance (numerical surrogate)";
  }
  nlohmann::json d;
  d["mode"] = drift.mode == DriftMode::kTruncated ? "truncated" : "cutoff";
  d["variant"] = to_string(drift.variant);
  if (drift.mode == DriftMode::kTruncated) {
    d["radius"] = drift.radius;
  } else {
    d["r"] = drift.cutoff.r;
    d["s"] = drift.cutoff.s;
    d["p"] = drift.cutoff.p;
    d["rho_s"] = drift.cutoff.rho_s;
    d["a"] = drift.cutoff.a.values();
  }
  j["drift"] = d;
  return j;
}

std::pair<Point, double> reflect_project(const Point& x, double R) {
  if (!(R > 0.0)) throw InvalidParameter("reflect_project: R must be positive");
  const double r = x.norm();
  if (r <= R) return {x, 0.0};
  return {x * (R / r), r - R};
}

}  // namespace ibm
