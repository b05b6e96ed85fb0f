#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "ibm/diagnostics/checks.hpp"
#include "ibm/diagnostics/distance.hpp"
#include "ibm/diagnostics/invariance.hpp"
#include "ibm/diagnostics/moments.hpp"
#include "ibm/diagnostics/report.hpp"
#include "ibm/diagnostics/stats.hpp"
#include "ibm/dynamics/integrator.hpp"
#include "ibm/errors.hpp"
#include "ibm/pointfields/model.hpp"
#include "ibm/pointfields/window.hpp"
#include "ibm/random/philox.hpp"

namespace ibm {
namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double phi(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
double upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

Particle particle(std::int64_t label, const Point& x, bool frozen = false) {
  Particle p;
  p.label = label;
  p.position = x;
  p.frozen = frozen;
  return p;
}

Frame frame(double t, std::vector<Particle> ps) {
  Frame f;
  f.time = t;
  f.particles = std::move(ps);
  return f;
}

SchemeParams lower(double R, double dt, double t_end, int stride) {
  SchemeParams p;
  p.R = R;
  p.dt = dt;
  p.t_end = t_end;
  p.record_stride = stride;
  p.drift.radius = 4.0;
  return p;
}

TEST(ErfTail, Values) {
  EXPECT_DOUBLE_EQ(erf_tail(0.0), 0.5);
  EXPECT_NEAR(erf_tail(1.0), 0.15865525393145705, 1e-15);
  EXPECT_NEAR(erf_tail(-1.0), 1.0 - 0.15865525393145705, 1e-15);
  // Simpson quadrature of the Gaussian density as an independent oracle.
  for (double t = -3.0; t <= 6.0; t += 0.75) {
    const int n = 20000;
    const double hi = 40.0, h = (hi - t) / n;
    double s = phi(t) + phi(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * phi(t + i * h);
    EXPECT_NEAR(erf_tail(t), s * h / 3.0, 1e-12) << t;
  }
  EXPECT_GT(erf_tail(30.0), 0.0);
}

TEST(IntegrabilityCheck, ConstantIntensityClosedForms) {
  // int_R Erf(|x|) dx = 2 E[Z^+] = 2/sqrt(2 pi).
  EXPECT_NEAR(check_a4(1.0, 0.0, 1.0, 1).value, 2.0 * kInvSqrt2Pi, 1e-6);
  // Ginibre: (1/pi) int_{R^2} Erf(|x|) dx = 2 int_0^inf x Erf(x) dx = 1/2.
  const auto g = check_a4(1.0 / std::numbers::pi, 0.0, 1.0, 2);
  EXPECT_TRUE(g.finite);
  EXPECT_NEAR(g.value, 0.5, 1e-6);
  // Shifted and scaled: 2 T (phi(a) - a Erf(a)) with a = -r/T.
  for (double r : {0.5, 3.0}) {
    for (double T : {0.25, 2.0}) {
      const double a = -r / T;
      const double want = 2.0 * T * (phi(a) - a * upper_tail(a));
      EXPECT_NEAR(check_a4(1.0, r, T, 1).value, want, 1e-6 * std::max(1.0, want)) << r << " " << T;
    }
  }
}

TEST(IntegrabilityCheck, ZeroIntensityAndDivergence) {
  const auto z = check_a4(0.0, 1.0, 1.0, 2);
  EXPECT_EQ(z.value, 0.0);
  EXPECT_TRUE(z.finite);
  // Intensity growing like e^{x^2} beats the Gaussian tail.
  const auto d = check_a4([](const Point& x) { return std::exp(x.norm2()); }, 0.0, 1.0, 1, 200);
  EXPECT_FALSE(d.finite);
  // A varying intensity with a closed form: rho(x) = |x| on the line gives 2 int x Erf(x) = 1/2.
  EXPECT_NEAR(check_a4([](const Point& x) { return x.norm(); }, 0.0, 1.0, 1).value, 0.5, 1e-6);
  EXPECT_THROW(check_a4(1.0, 0.0, 0.0, 1), InvalidParameter);
}

TEST(IntegrabilityCheck, Liminf) {
  const auto v = check_a4_liminf(1.0, 4.0, 1.0, 2);
  EXPECT_TRUE(v.vanishes);
  ASSERT_GE(v.r.size(), 2u);
  EXPECT_EQ(v.r[0], 1.0);
  EXPECT_NEAR(v.value[0], upper_tail(1.0 / std::sqrt(5.0)) * std::numbers::pi * 25.0, 1e-12);
  EXPECT_FALSE(check_a4_liminf(1.0, 4.0, 1e6, 1).vanishes);
}

TEST(Nbj, Examples) {
  PathRecord rec;
  rec.frames.push_back(frame(0.0, {particle(1, Point(0.5)), particle(2, Point(3.0)), particle(3, Point(9.0))}));
  rec.frames.push_back(frame(1.0, {particle(1, Point(0.5)), particle(2, Point(1.5)), particle(3, Point(5.0))}));
  rec.frames.push_back(frame(2.0, {particle(1, Point(0.5)), particle(2, Point(1.5)), particle(3, Point(1.9))}));
  EXPECT_EQ(nbj_index(rec, 1.0, 2.0), 1);
  EXPECT_EQ(nbj_index(rec, 2.0, 0.5), 1);
  EXPECT_EQ(nbj_index(rec, 2.0, 1.0), 2);
  EXPECT_EQ(nbj_index(rec, 2.0, 2.0), 3);
  EXPECT_EQ(nbj_index(rec, 0.1, 2.0), 0);
  // Monotone in r and T.
  std::int64_t prev = 0;
  for (double r = 0.0; r < 10.0; r += 0.5) {
    const auto k = nbj_index(rec, r, 2.0);
    EXPECT_GE(k, prev);
    prev = k;
  }
}

TEST(MinGap, Examples) {
  EXPECT_DOUBLE_EQ(min_gap(frame(0, {particle(1, Point(0.0)), particle(2, Point(0.3)), particle(3, Point(1.0))})), 0.3);
  // Frozen-frozen pairs do not count while something moves.
  EXPECT_DOUBLE_EQ(min_gap(frame(0, {particle(1, Point(0.0)), particle(2, Point(5.0), true),
                                      particle(3, Point(5.1), true)})),
                   5.0);
  EXPECT_NEAR(min_gap(frame(0, {particle(1, Point(5.0), true), particle(2, Point(5.1), true)})), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(min_gap(frame(0, {particle(1, Point(0.2)), particle(2, Point(3.0))}), true), 0.2);
  EXPECT_EQ(min_gap(frame(0, {particle(1, Point(1.0))})), std::numeric_limits<double>::infinity());
  PathRecord rec;
  rec.frames.push_back(frame(0, {particle(1, Point(0.0)), particle(2, Point(1.0))}));
  rec.frames.push_back(frame(1, {particle(1, Point(0.0)), particle(2, Point(0.4))}));
  EXPECT_DOUBLE_EQ(min_gap(rec), 0.4);
}

TEST(Invariance, PoissonUnderFreeLowerSchemeIsStationary) {
  const auto model = ModelSpec::poisson(1.0, 1);
  const Window w = Interval{-8.0, 8.0};
  const auto rep = invariance_test(
      model, lower(8.0, 1e-2, 1.0, 50), [&](std::uint64_t s) { return sample_poisson(1.0, w, s); }, {0.5, 1.0}, w, 200,
      3, {.corr = {.bins = 4, .r_max = 1.0, .buffer = 1.0}});
  EXPECT_TRUE(rep.passed()) << rep.to_markdown();
  EXPECT_EQ(rep.verdicts().size(), 4u);
  ASSERT_NE(rep.find("intensity@t=0"), nullptr);
}

TEST(Invariance, WrongInitialLawIsDetected) {
  // A jittered lattice has the right intensity but is far too rigid; sine2
  // dynamics smear its pair correlation within t = 0.2.
  const auto model = ModelSpec::sine(2);
  const Window w = Interval{-8.0, 8.0};
  auto lattice = [](std::uint64_t s) {
    Rng rng(s, 0);
    Configuration c(1);
    for (int k = -8; k < 8; ++k) c.add(Point(k + 0.5 + rng.uniform(-0.1, 0.1)));
    return c;
  };
  const auto rep = invariance_test(model, lower(8.0, 1e-3, 0.2, 100), lattice, {0.2}, w, 100, 4,
                                   {.corr = {.bins = 4, .r_max = 1.0, .buffer = 1.0}});
  EXPECT_FALSE(rep.passed());
  bool g_failed = false;
  for (const auto& v : rep.verdicts()) g_failed = g_failed || (v.name.rfind("pair correlation", 0) == 0 && !v.pass);
  EXPECT_TRUE(g_failed);
}

TEST(Invariance, SamplesAtNeedsARecordedFrame) {
  PathRecord rec;
  rec.dt = 0.1;
  rec.frames.push_back(frame(0.0, {particle(1, Point(0.0))}));
  rec.frames.push_back(frame(1.0, {particle(1, Point(0.1))}));
  EXPECT_EQ(samples_at({rec}, 1.0).size(), 1u);
  EXPECT_THROW(samples_at({rec}, 0.5), ConfigError);
}

TEST(Moment4, FreeBrownianOracle) {
  const auto model = ModelSpec::poisson(1.0, 2);
  auto p = lower(1e3, 1e-3, 0.2, 5);
  std::vector<PathRecord> paths;
  Configuration init(2);
  init.add(Point(0.0, 0.0));
  for (int i = 0; i < 200; ++i) paths.push_back(Integrator(model, p, 50 + i).run(init));
  const std::vector<double> lags = {0.005, 0.01, 0.02, 0.04};
  const auto m = moment4_check(paths, lags);
  ASSERT_EQ(m.moment.size(), 4u);
  for (std::size_t l = 0; l < lags.size(); ++l) {
    // E|B_h|^4 = (d^2 + 2d) h^2 with d = 2.
    EXPECT_NEAR(m.moment[l], 8.0 * lags[l] * lags[l], 4 * m.moment_se[l]) << lags[l];
  }
  EXPECT_NEAR(m.fit.slope, 2.0, 4 * m.fit.se_slope);
  EXPECT_TRUE(m.pass);
  EXPECT_EQ(m.replicas_used, 200u);
  EXPECT_FALSE(m.report().verdicts().empty());
}

TEST(Moment4, FrozenTagIsExcludedAndBadLagsRejected) {
  const auto model = ModelSpec::poisson(1.0, 1);
  auto p = lower(1.0, 1e-2, 0.5, 1);
  Configuration init(1);
  init.add(Point(5.0));  // outside S_R: frozen
  std::vector<PathRecord> paths;
  for (int i = 0; i < 3; ++i) paths.push_back(Integrator(model, p, i).run(init));
  EXPECT_THROW(moment4_check(paths, {0.01, 0.02, 0.04}), InsufficientData);
  Configuration inside(1);
  inside.add(Point(0.0));
  for (auto& rec : paths) rec = Integrator(model, p, 9).run(inside);
  EXPECT_THROW(moment4_check(paths, {0.01, 0.02}), ConfigError);
  EXPECT_THROW(moment4_check(paths, {0.01, 0.015, 0.04}), ConfigError);
  EXPECT_THROW(moment4_check(paths, {0.01, 0.02, 5.0}), ConfigError);
}

std::vector<PathRecord> free_runs(int n, std::uint64_t seed, double R) {
  const auto model = ModelSpec::poisson(1.0, 1);
  const auto p = lower(R, 1e-2, 0.5, 10);
  std::vector<PathRecord> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(Integrator(model, p, seed + i).run(sample_poisson(1.0, Interval{-4.0, 4.0}, 77 + i)));
  }
  return out;
}

TEST(SchemeDistance, SelfAndSymmetry) {
  const auto a = free_runs(40, 100, 4.0);
  const auto b = free_runs(40, 500, 4.0);
  const Window w = Interval{-4.0, 4.0};
  const auto self = scheme_distance(a, a, w, 0.5);
  EXPECT_EQ(self.w1, 0.0);
  EXPECT_EQ(self.intensity_dev, 0.0);
  EXPECT_GT(self.w1_se, 0.0);
  const auto ab = scheme_distance(a, b, w, 0.5);
  const auto ba = scheme_distance(b, a, w, 0.5);
  EXPECT_DOUBLE_EQ(ab.w1, ba.w1);
  EXPECT_DOUBLE_EQ(ab.intensity_dev, ba.intensity_dev);
  EXPECT_GT(ab.w1, 0.0);
  const auto disp = tagged_displacements(a, 1, 0.5);
  ASSERT_EQ(disp.size(), a.size());
  const auto& f0 = a[0].frames.front();
  const auto& f1 = a[0].frames[a[0].frame_at(0.5)];
  EXPECT_EQ(*disp[0], f1.find(1)->position - f0.find(1)->position);
}

TEST(LadderDistance, DecreasingRule) {
  LadderResult r;
  r.rungs.resize(3);
  r.rungs[0].w1 = 1.0;
  r.rungs[1].w1 = 0.5;
  r.rungs[2].w1 = 0.2;
  r.diff = {0.5, 0.3};
  r.diff_se = {0.1, 0.1};
  EXPECT_TRUE(r.strictly_decreasing(2.0));
  EXPECT_FALSE(r.strictly_decreasing(4.0));
  r.rungs[2].w1 = 0.6;
  r.diff[1] = -0.1;
  EXPECT_FALSE(r.strictly_decreasing(0.0));

  // Rungs built on the same replicas: reference against itself is a zero rung.
  const auto ref = free_runs(30, 1, 4.0);
  const auto far = free_runs(30, 1, 1.0);
  const auto lr = ladder_distance({far, ref}, ref, Interval{-4.0, 4.0}, 0.5, {.bootstrap = 50});
  ASSERT_EQ(lr.rungs.size(), 2u);
  EXPECT_EQ(lr.rungs[1].w1, 0.0);
  EXPECT_GT(lr.rungs[0].w1, 0.0);
  EXPECT_DOUBLE_EQ(lr.diff[0], lr.rungs[0].w1);
}

TEST(Stats, KolmogorovSmirnov) {
  // One point at 0.5 against U(0,1): D = 0.5.
  EXPECT_DOUBLE_EQ(ks_one_sample({0.5}, [](double x) { return x; }).statistic, 0.5);
  const auto ks = ks_one_sample({0.1, 0.2, 0.3, 0.4}, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_DOUBLE_EQ(ks.statistic, 0.6);
  EXPECT_NEAR(kolmogorov_q(1.3581), 0.05, 1e-4);
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3}, {1, 2, 3}).statistic, 0.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2}, {3, 4}).statistic, 1.0);
  EXPECT_NEAR(normal_upper(1.959963984540054), 0.025, 1e-12);
}

TEST(Stats, Wasserstein) {
  EXPECT_DOUBLE_EQ(wasserstein1(std::vector<double>{0, 1}, std::vector<double>{1, 2}), 1.0);
  // Unequal sizes: quantile coupling of {0} against {0, 1} moves half the mass by 1.
  EXPECT_DOUBLE_EQ(wasserstein1(std::vector<double>{0}, std::vector<double>{0, 1}), 0.5);
  const std::vector<Point> a = {Point(0.0, 0.0), Point(1.0, 0.0)};
  const std::vector<Point> b = {Point(1.0, 1.0), Point(0.0, 1.0)};
  EXPECT_DOUBLE_EQ(wasserstein1(a, b), 1.0);
}

TEST(Stats, Hungarian) {
  const std::vector<double> cost = {4, 1, 3, 2, 0, 5, 3, 2, 2};
  const auto assign = hungarian(cost, 3);
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) total += cost[i * 3 + assign[i]];
  // Brute force over the 6 permutations.
  std::vector<std::size_t> perm = {0, 1, 2};
  double best = 1e9;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < 3; ++i) c += cost[i * 3 + perm[i]];
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_DOUBLE_EQ(total, best);
  EXPECT_DOUBLE_EQ(total, 5.0);
}

TEST(Stats, LinearFit) {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> y = {1, 3, 5, 7};
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.se_slope, 0.0, 1e-12);
  // Known sigma: SE(slope) = 1/sqrt(sum w (x - xbar_w)^2) = 1/sqrt(5) for unit sigma.
  const std::vector<double> sig = {1, 1, 1, 1};
  const auto g = linear_fit(x, std::vector<double>{1, 2, 2, 4}, sig);
  EXPECT_NEAR(g.se_slope, 1.0 / std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(g.slope, 0.9, 1e-14);
}

TEST(Stats, MeanSeAndBootstrap) {
  const std::vector<double> v = {1, 2, 3, 4, 5};
  const auto m = mean_se(v);
  EXPECT_DOUBLE_EQ(m.mean, 3.0);
  EXPECT_NEAR(m.se, std::sqrt(2.5 / 5), 1e-15);
  const double bs = bootstrap_se(
      v.size(),
      [&](const std::vector<std::size_t>& idx) {
        double s = 0.0;
        for (auto i : idx) s += v[i];
        return s / static_cast<double>(idx.size());
      },
      4000, 1);
  // Bootstrap SE of the mean is the plug-in sd / sqrt(n) = sqrt(2/5).
  EXPECT_NEAR(bs, std::sqrt(2.0 / 5.0), 0.03);
}

TEST(Report, JsonRoundTripAndMarkdown) {
  DiagnosticsReport rep("demo");
  rep.set_seed_range("1..10");
  rep.add("alpha", 0.25, 0.01, 10, "a note");
  rep.add("beta", 3.0);
  rep.verdict("alpha small", true, "alpha < 1", {"alpha"});
  rep.verdict("beta big", false, "beta > 5", {"beta"});
  rep.caveat("illustrative only");
  EXPECT_FALSE(rep.passed());
  const auto j = rep.to_json();
  EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
  const auto back = DiagnosticsReport::from_json(j);
  EXPECT_EQ(back.to_json(), j);
  ASSERT_NE(back.find("alpha"), nullptr);
  EXPECT_EQ(back.find("alpha")->se, 0.01);
  EXPECT_FALSE(back.find("beta")->se.has_value());
  EXPECT_EQ(back.find("alpha")->seed_range, "1..10");
  const auto md = rep.to_markdown();
  EXPECT_NE(md.find("alpha small"), std::string::npos);
  EXPECT_NE(md.find("FAIL"), std::string::npos);
  EXPECT_NE(md.find("illustrative only"), std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "ibm_report_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  rep.write(dir);
  std::ifstream is(dir / "report.json");
  EXPECT_EQ(nlohmann::json::parse(is), j);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.md"));
  std::filesystem::remove_all(dir);
}

TEST(Report, MergeKeepsEverything) {
  DiagnosticsReport a("a"), b("b");
  a.add("x", 1.0);
  a.verdict("x ok", true, "always");
  b.add("y", 2.0);
  b.verdict("y ok", true, "always");
  a.merge(b);
  EXPECT_EQ(a.statistics().size(), 2u);
  EXPECT_EQ(a.verdicts().size(), 2u);
  EXPECT_TRUE(a.passed());
  EXPECT_TRUE(DiagnosticsReport("empty").passed());
}

}  // namespace
}  // namespace ibm
