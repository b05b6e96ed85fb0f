#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "ibm/diagnostics/stats.hpp"
#include "ibm/dynamics/integrator.hpp"
#include "ibm/dynamics/path_io.hpp"
#include "ibm/dynamics/scheme.hpp"
#include "ibm/errors.hpp"
#include "ibm/pointfields/dpp.hpp"
#include "ibm/pointfields/model.hpp"
#include "ibm/pointfields/window.hpp"
#include "ibm/util/parallel.hpp"

namespace ibm {
namespace {

SchemeParams params(Scheme s, double R, double dt, double t_end, int stride = 10) {
  SchemeParams p;
  p.scheme = s;
  p.R = R;
  p.dt = dt;
  p.t_end = t_end;
  p.record_stride = stride;
  p.drift.radius = 4.0;
  return p;
}

Configuration single(const Point& x) {
  Configuration c(x.dim());
  c.add(x);
  return c;
}

void expect_same_record(const PathRecord& a, const PathRecord& b) {
  ASSERT_EQ(a.frames.size(), b.frames.size());
  for (std::size_t f = 0; f < a.frames.size(); ++f) {
    ASSERT_EQ(a.frames[f].particles.size(), b.frames[f].particles.size()) << f;
    EXPECT_EQ(a.frames[f].time, b.frames[f].time);
    for (std::size_t i = 0; i < a.frames[f].particles.size(); ++i) {
      const auto& p = a.frames[f].particles[i];
      const auto& q = b.frames[f].particles[i];
      EXPECT_EQ(p.label, q.label);
      EXPECT_EQ(p.position, q.position);
      EXPECT_EQ(p.frozen, q.frozen);
      EXPECT_EQ(p.local_time, q.local_time);
    }
  }
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t e = 0; e < a.events.size(); ++e) {
    EXPECT_EQ(a.events[e].label, b.events[e].label);
    EXPECT_EQ(a.events[e].position, b.events[e].position);
  }
}

TEST(ReflectProject, Examples) {
  const auto [in, l0] = reflect_project(Point(0.3, -0.4), 1.0);
  EXPECT_EQ(in, Point(0.3, -0.4));
  EXPECT_EQ(l0, 0.0);
  const auto [out, l1] = reflect_project(Point(3.0, 4.0), 1.0);
  EXPECT_NEAR(out[0], 0.6, 1e-15);
  EXPECT_NEAR(out[1], 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(l1, 4.0);
  const auto [o1, l2] = reflect_project(Point(-2.5), 2.0);
  EXPECT_EQ(o1, Point(-2.0));
  EXPECT_DOUBLE_EQ(l2, 0.5);
  EXPECT_THROW(reflect_project(Point(1.0), 0.0), InvalidParameter);
}

TEST(SchemeParams, Validation) {
  auto p = params(Scheme::kLower, 5.0, 0.01, 1.0);
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.total_steps(), 100);
  p.t_end = 1.005;
  EXPECT_THROW(p.validate(), InvalidParameter);
  p.t_end = 1.0;
  p.record_stride = 0;
  EXPECT_THROW(p.validate(), InvalidParameter);
  EXPECT_EQ(scheme_from_string(to_string(Scheme::kUpper)), Scheme::kUpper);
  EXPECT_THROW(scheme_from_string("middle"), Error);
}

// A free particle reflected in [-1, 1] relaxes to the uniform law; the
// spectral gap (pi/2)^2/2 makes t = 5 far beyond the mixing time.
TEST(LowerScheme, ReflectedFreeParticleIsUniform) {
  const auto model = ModelSpec::poisson(1.0, 1);
  const auto p = params(Scheme::kLower, 1.0, 2e-3, 5.0, 2500);
  std::vector<double> finals(400);
  parallel_for(finals.size(), [&](std::size_t i) {
    const auto rec = simulate_lower(single(Point(0.9)), model, p, 1000 + i);
    finals[i] = rec.frames.back().particles[0].position[0];
  });
  const auto ks = ks_one_sample(finals, [](double x) { return std::clamp((x + 1.0) / 2.0, 0.0, 1.0); });
  EXPECT_GT(ks.p_value, 0.01);
}

TEST(LowerScheme, FreeMeanSquaredDisplacement) {
  const auto model = ModelSpec::poisson(1.0, 2);
  const auto p = params(Scheme::kLower, 50.0, 1e-2, 1.0, 25);
  const int n = 800;
  std::vector<std::vector<double>> sq(4, std::vector<double>(n));
  parallel_for(n, [&](std::size_t i) {
    const auto rec = simulate_lower(single(Point(0.0, 0.0)), model, p, 7 + i);
    for (std::size_t f = 1; f < rec.frames.size(); ++f) sq[f - 1][i] = rec.frames[f].particles[0].position.norm2();
  });
  for (int f = 0; f < 4; ++f) {
    const double t = 0.25 * (f + 1);
    const auto m = mean_se(sq[f]);
    // E|B_t|^2 = d t; the SE of |B_t|^2 is 2t/sqrt(n) in d = 2.
    EXPECT_NEAR(m.mean, 2.0 * t, 4.0 * 2.0 * t / std::sqrt(n)) << t;
  }
}

TEST(LowerScheme, ConservesCountAndFreezesExterior) {
  const auto model = ModelSpec::sine(2);
  const auto init = DppSampler(model, Interval{-12.0, 12.0}).sample(3);
  auto p = params(Scheme::kLower, 6.0, 1e-3, 0.2, 20);
  const auto rec = simulate_lower(init, model, p, 11);
  const std::size_t moving0 = std::count_if(rec.frames[0].particles.begin(), rec.frames[0].particles.end(),
                                            [](const Particle& q) { return !q.frozen; });
  EXPECT_GT(moving0, 5u);
  for (const auto& f : rec.frames) {
    ASSERT_EQ(f.particles.size(), init.size());
    std::size_t moving = 0;
    for (std::size_t i = 0; i < f.particles.size(); ++i) {
      const auto& q = f.particles[i];
      const auto& q0 = rec.frames[0].particles[i];
      EXPECT_EQ(q.label, q0.label);
      EXPECT_EQ(q.frozen, q0.frozen);
      if (q.frozen) {
        EXPECT_EQ(q.position, q0.position);
      } else {
        ++moving;
        EXPECT_LE(q.position.norm(), p.R);
      }
    }
    EXPECT_EQ(moving, moving0);
  }
  EXPECT_TRUE(rec.events.empty());
}

TEST(LowerScheme, LocalTimeZeroInsideAndPositiveAtBoundary) {
  const auto model = ModelSpec::poisson(1.0, 1);
  const auto p = params(Scheme::kLower, 100.0, 1e-3, 0.1, 100);
  const auto inside = simulate_lower(single(Point(0.0)), model, p, 1);
  EXPECT_EQ(inside.frames.back().particles[0].local_time, 0.0);
  const auto edge = simulate_lower(single(Point(99.999)), model, p, 1);
  const double lt = edge.frames.back().particles[0].local_time;
  EXPECT_GT(lt, 0.0);
  // Local time is nondecreasing along the path.
  double prev = 0.0;
  for (const auto& f : edge.frames) {
    EXPECT_GE(f.particles[0].local_time, prev);
    prev = f.particles[0].local_time;
  }
}

TEST(Integrator, DeterministicAndWorkerIndependent) {
  const auto model = ModelSpec::sine(2);
  const auto init = DppSampler(model, Interval{-10.0, 10.0}).sample(8);
  auto p = params(Scheme::kLower, 8.0, 1e-3, 0.1, 10);
  p.workers = 1;
  const auto a = simulate_lower(init, model, p, 42);
  const auto b = simulate_lower(init, model, p, 42);
  p.workers = 4;
  const auto c = simulate_lower(init, model, p, 42);
  expect_same_record(a, b);
  expect_same_record(a, c);
  const auto d = simulate_lower(init, model, p, 43);
  EXPECT_NE(a.frames.back().particles[0].position, d.frames.back().particles[0].position);
}

TEST(Integrator, RetryLevelsRefineOneBrownianPath) {
  auto p = params(Scheme::kLower, 10.0, 1e-2, 1.0, 10);
  p.max_retries = 4;
  const Integrator integ(ModelSpec::poisson(1.0, 2), p, 3);
  std::vector<double> sub, second_half;
  for (std::int64_t step = 0; step < 2000; ++step) {
    const Point whole = integ.increment(7, step, 0, 0);
    for (int level = 1; level <= 4; ++level) {
      Point sum(0.0, 0.0);
      for (int k = 0; k < (1 << level); ++k) sum += integ.increment(7, step, level, k);
      EXPECT_NEAR(sum[0], whole[0], 1e-14);
      EXPECT_NEAR(sum[1], whole[1], 1e-14);
    }
    // Halves at level 1 are the sum of their quarters at level 2.
    const Point half = integ.increment(7, step, 1, 1);
    const Point q = integ.increment(7, step, 2, 2) + integ.increment(7, step, 2, 3);
    EXPECT_NEAR(half[0], q[0], 1e-14);
    sub.push_back(integ.increment(7, step, 4, static_cast<int>(step % 16))[0]);
    second_half.push_back(half[0]);
  }
  // Substep variance dt / 2^level.
  auto var = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s / static_cast<double>(v.size());
  };
  const double n = static_cast<double>(sub.size());
  EXPECT_NEAR(var(sub), 1e-2 / 16, 4.0 * std::sqrt(2.0 / n) * 1e-2 / 16);
  EXPECT_NEAR(var(second_half), 1e-2 / 2, 4.0 * std::sqrt(2.0 / n) * 1e-2 / 2);
  EXPECT_NE(integ.increment(8, 0, 0, 0)[0], integ.increment(7, 0, 0, 0)[0]);
}

TEST(Integrator, SchemesShareNoiseByLabel) {
  // Away from dS_R a free particle follows the same path under every scheme.
  const auto model = ModelSpec::poisson(1.0, 1);
  Configuration init(1);
  init.add(Point(0.5));
  init.add(Point(-1.0));
  const auto pl = params(Scheme::kLower, 50.0, 1e-3, 0.2, 50);
  const auto lower = simulate_lower(init, model, pl, 5);
  const auto ref = simulate_reference(init, model, pl, 5);
  expect_same_record(lower, ref);
}

TEST(UpperScheme, DeathsOutsideBirthsInsideNoLocalTime) {
  const double lambda = 2.0, R = 3.0;
  const auto model = ModelSpec::poisson(lambda, 1);
  auto p = params(Scheme::kUpper, R, 1e-3, 1.0, 100);
  const auto init = sample_poisson(lambda, Interval{-R, R}, 9);
  const auto rec = simulate_upper(init, model, p, 9);
  int births = 0, deaths = 0;
  for (const auto& e : rec.events) {
    if (e.kind == EventKind::kDeath) {
      ++deaths;
      EXPECT_GT(e.position.norm(), R);
    } else if (e.kind == EventKind::kBirth) {
      ++births;
      EXPECT_LE(e.position.norm(), R);
    } else {
      ADD_FAILURE() << "unexpected freeze event";
    }
  }
  EXPECT_GT(births, 0);
  EXPECT_GT(deaths, 0);
  std::set<std::size_t> counts;
  for (const auto& f : rec.frames) {
    counts.insert(f.particles.size());
    for (const auto& q : f.particles) {
      EXPECT_EQ(q.local_time, 0.0);
      EXPECT_LE(q.position.norm(), R);
    }
  }
  EXPECT_GT(counts.size(), 1u);
}

TEST(UpperScheme, PoissonCountStaysAtEquilibrium) {
  const double lambda = 2.0, R = 3.0;
  const auto model = ModelSpec::poisson(lambda, 1);
  const auto p = params(Scheme::kUpper, R, 2e-3, 2.0, 1000);
  const int n = 200;
  std::vector<double> counts(n);
  parallel_for(n, [&](std::size_t i) {
    // Started at equilibrium, births must balance deaths for the count to stay put.
    const auto rec = simulate_upper(sample_poisson(lambda, Interval{-R, R}, 300 + i), model, p, 300 + i);
    counts[i] = static_cast<double>(rec.frames.back().particles.size());
  });
  const auto m = mean_se(counts);
  EXPECT_NEAR(m.mean, lambda * 2 * R, 3 * m.se);
}

TEST(ReferenceScheme, LeaversFreezeInPlace) {
  const auto model = ModelSpec::poisson(1.0, 1);
  const auto p = params(Scheme::kReference, 0.2, 1e-3, 0.5, 10);
  const auto rec = simulate_reference(single(Point(0.0)), model, p, 2);
  ASSERT_EQ(rec.events.size(), 1u);
  EXPECT_EQ(rec.events[0].kind, EventKind::kFreeze);
  EXPECT_GT(rec.events[0].position.norm(), 0.2);
  const auto& last = rec.frames.back().particles[0];
  EXPECT_TRUE(last.frozen);
  EXPECT_EQ(last.position, rec.events[0].position);
}

TEST(Integrator, CheckpointResumeIsExact) {
  const auto model = ModelSpec::sine(2);
  const auto init = DppSampler(model, Interval{-10.0, 10.0}).sample(4);
  const auto p = params(Scheme::kLower, 7.0, 1e-3, 0.1, 7);
  const Integrator integ(model, p, 77);
  const auto full = integ.run(init);

  SimState s = integ.init(init);
  PathRecord rec = integ.start(s);
  integ.run_until(s, rec, 37);
  const std::string text = integ.checkpoint(s, rec).dump();

  const Integrator again(model, p, 77);
  SimState s2;
  PathRecord rec2;
  again.restore(nlohmann::json::parse(text), s2, rec2);
  EXPECT_EQ(s2.step, 37);
  again.run_until(s2, rec2, -1);
  expect_same_record(full, rec2);

  const Integrator other(model, p, 78);
  EXPECT_THROW(other.restore(nlohmann::json::parse(text), s2, rec2), ConfigError);
}

TEST(PathIo, CsvRoundTrip) {
  const auto model = ModelSpec::ginibre();
  auto p = params(Scheme::kUpper, 3.0, 1e-3, 0.05, 5);
  Configuration init(2);
  init.add(Point(0.5, 0.1));
  init.add(Point(-1.2, 2.0));
  init.add(Point(4.0, 0.0));
  const auto rec = simulate_upper(init, model, p, 6);
  std::stringstream ss;
  write_path_csv(ss, rec);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "time,label,frozen,x1,x2,local_time");
  const auto frames = read_path_csv(ss, 2);
  PathRecord back = rec;
  back.frames = frames;
  expect_same_record(rec, back);

  const auto dir = std::filesystem::temp_directory_path() / "ibm_path_io_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_events_csv(dir / "events.csv", rec);
  const auto ev = read_events_csv(dir / "events.csv", 2);
  ASSERT_EQ(ev.size(), rec.events.size());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    EXPECT_EQ(ev[i].kind, rec.events[i].kind);
    EXPECT_EQ(ev[i].position, rec.events[i].position);
    EXPECT_EQ(ev[i].time, rec.events[i].time);
  }
  std::filesystem::remove_all(dir);
}

TEST(PathIo, HexDoubleIsExact) {
  for (double v : {0.1, -3.0e-300, 1.0 / 3.0, 6.02214076e23, 0.0}) {
    EXPECT_EQ(parse_hex_double(hex_double(v)), v);
  }
}

TEST(PathRecord, Accessors) {
  const auto model = ModelSpec::poisson(1.0, 1);
  const auto p = params(Scheme::kLower, 5.0, 0.01, 0.5, 10);
  const auto rec = simulate_lower(single(Point(1.0)), model, p, 3);
  ASSERT_EQ(rec.frames.size(), 6u);
  EXPECT_EQ(rec.frame_at(0.21), 2u);
  const auto traj = rec.trajectory(1);
  ASSERT_EQ(traj.size(), 6u);
  EXPECT_EQ(*traj[0], Point(1.0));
  EXPECT_FALSE(rec.trajectory(99)[0].has_value());
  EXPECT_EQ(rec.frames[3].find(1)->position, *traj[3]);
  EXPECT_EQ(rec.frames[3].configuration().size(), 1u);
}

}  // namespace
}  // namespace ibm
