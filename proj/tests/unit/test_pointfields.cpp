#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>

#include "ibm/diagnostics/stats.hpp"
#include "ibm/errors.hpp"
#include "ibm/pointfields/correlations.hpp"
#include "ibm/pointfields/dpp.hpp"
#include "ibm/pointfields/gaussian_ensemble.hpp"
#include "ibm/pointfields/gibbs.hpp"
#include "ibm/pointfields/ginibre.hpp"
#include "ibm/pointfields/kernels.hpp"
#include "ibm/pointfields/model.hpp"
#include "ibm/pointfields/potentials.hpp"
#include "ibm/pointfields/sampler.hpp"
#include "ibm/pointfields/window.hpp"

namespace ibm {
namespace {

constexpr double kPi = std::numbers::pi;

// Diagonal of the hard-edge kernel written with the libstdc++ Bessel function.
double bessel_diag_oracle(double alpha, double x) {
  const double s = std::sqrt(x);
  const double j = std::cyl_bessel_j(alpha, s);
  return 0.25 * (j * j - std::cyl_bessel_j(alpha + 1, s) * std::cyl_bessel_j(alpha - 1, s));
}

double bessel_offdiag_oracle(double alpha, double x, double y) {
  const double sx = std::sqrt(x), sy = std::sqrt(y);
  auto jp = [&](double s) { return 0.5 * (std::cyl_bessel_j(alpha - 1, s) - std::cyl_bessel_j(alpha + 1, s)); };
  return (std::cyl_bessel_j(alpha, sx) * sy * jp(sy) - sx * jp(sx) * std::cyl_bessel_j(alpha, sy)) / (2 * (x - y));
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

TEST(Kernels, SineExamples) {
  EXPECT_DOUBLE_EQ(sine_kernel(0.3, 0.3), 1.0);
  EXPECT_NEAR(sine_kernel(0.0, 0.5), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(sine_kernel(1.0, 2.0), 0.0, 1e-15);
  EXPECT_NEAR(sine_kernel(1.7, -0.4), sine_kernel(-0.4, 1.7), 1e-15);
}

TEST(Kernels, GinibreDiagonalAndHermitian) {
  const Point x(0.3, -1.2), y(-0.7, 0.4);
  EXPECT_NEAR(ginibre_kernel(x, x).real(), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(ginibre_kernel(x, x).imag(), 0.0, 1e-15);
  const auto kxy = ginibre_kernel(x, y);
  const auto kyx = ginibre_kernel(y, x);
  EXPECT_NEAR(kxy.real(), kyx.real(), 1e-15);
  EXPECT_NEAR(kxy.imag(), -kyx.imag(), 1e-15);
  EXPECT_NEAR(std::abs(kxy), std::exp(-0.5 * (x - y).norm2()) / kPi, 1e-15);
}

TEST(Kernels, BesselMatchesStdLibrary) {
  for (double alpha : {1.0, 2.5}) {
    for (double x : {0.1, 1.0, 7.3, 30.0}) {
      EXPECT_NEAR(bessel_kernel(alpha, x, x), bessel_diag_oracle(alpha, x), 1e-12) << alpha << " " << x;
      for (double y : {0.4, 5.0, 19.0}) {
        EXPECT_NEAR(bessel_kernel(alpha, x, y), bessel_offdiag_oracle(alpha, x, y), 1e-12);
        EXPECT_NEAR(bessel_kernel(alpha, x, y), bessel_kernel(alpha, y, x), 1e-14);
      }
    }
    // Continuity across the near-diagonal switch.
    EXPECT_NEAR(bessel_kernel(alpha, 4.0, 4.0 + 1e-5), bessel_kernel(alpha, 4.0, 4.0), 1e-6);
  }
  EXPECT_THROW(bessel_kernel(1.0, -1.0, 1.0), DomainError);
}

TEST(Kernels, PairCorrelation) {
  const auto g = ModelSpec::ginibre();
  EXPECT_NEAR(pair_correlation(g, Point(0.0, 0.0), Point(1.0, 0.0)), 1.0 - std::exp(-1.0), 1e-14);
  EXPECT_EQ(pair_correlation(g, Point(0.2, 0.2), Point(0.2, 0.2)), 0.0);
  const auto s = ModelSpec::sine(2);
  const double r = 0.37;
  const double sinc = std::sin(kPi * r) / (kPi * r);
  EXPECT_NEAR(pair_correlation(s, Point(0.0), Point(r)), 1.0 - sinc * sinc, 1e-14);
  EXPECT_THROW(kernel_eval(ModelSpec::sine(4), Point(0.0), Point(1.0)), UnsupportedModel);
}

TEST(Model, SupportedRanges) {
  EXPECT_THROW(ModelSpec::sine(3), UnsupportedModel);
  EXPECT_THROW(ModelSpec::bessel(0.5), UnsupportedModel);
  EXPECT_NO_THROW(ModelSpec::bessel(1.0));
  EXPECT_NEAR(ModelSpec::ginibre().intensity(Point(3.0, 1.0)), 1.0 / kPi, 1e-15);
  const auto b = ModelSpec::bessel(2.0);
  EXPECT_NEAR(b.intensity(Point(5.0)), bessel_diag_oracle(2.0, 5.0), 1e-12);
  const auto back = ModelSpec::from_json(b.to_json());
  EXPECT_EQ(back.id(), b.id());
  EXPECT_THROW(ModelSpec::from_json({{"kind", "nope"}}), ConfigError);
}

TEST(Potentials, SymmetricWithMatchingGradients) {
  const std::vector<PotentialPtr> pots = {std::make_shared<BumpPotential>(2.0, 1.5),
                                          std::make_shared<InversePowerPotential>(1.0, 0.8, 6),
                                          std::make_shared<LogPotential>()};
  const double h = 1e-6;
  for (const auto& p : pots) {
    for (const Point& x : {Point(0.9, -0.3), Point(0.2, 1.1), Point(-0.5, 0.05)}) {
      EXPECT_DOUBLE_EQ(p->value(x), p->value(-1.0 * x)) << p->name();
      const Point g = p->gradient(x);
      for (int k = 0; k < 2; ++k) {
        Point a = x, b = x;
        a[k] += h;
        b[k] -= h;
        EXPECT_NEAR((p->value(a) - p->value(b)) / (2 * h), g[k], 1e-6 * std::max(1.0, std::fabs(g[k])))
            << p->name();
      }
    }
  }
  const BumpPotential bump(2.0, 1.5);
  EXPECT_EQ(bump.value(Point(1.6)), 0.0);
  EXPECT_EQ(bump.value(Point(0.0)), 2.0);
  const InversePowerPotential ip(1.0, 0.8, 6);
  EXPECT_NEAR(ip.value(Point(1.6)), std::pow(0.5, 6), 1e-15);
  EXPECT_LE(ip.value(Point(ip.range(1e-8))), 1e-8 * (1 + 1e-9));
  EXPECT_NEAR(LogPotential().value(Point(std::exp(1.0))), -1.0, 1e-15);
}

TEST(Potentials, FromJson) {
  EXPECT_EQ(potential_from_json({{"type", "bump"}, {"eps", 1.0}, {"sigma", 2.0}})->value(Point(0.0)), 1.0);
  EXPECT_THROW(potential_from_json({{"type", "yukawa"}}), ConfigError);
  EXPECT_THROW(potential_from_json({{"eps", 1.0}}), ConfigError);
  const auto p = potential_from_json({{"type", "inverse_power"}, {"n", 8}});
  EXPECT_EQ(potential_from_json(p->to_json())->name(), p->name());
}

TEST(Window, Geometry) {
  const Window iv = Interval{-2.0, 3.0};
  const Window disc = Ball{2.0, 2};
  EXPECT_DOUBLE_EQ(window_volume(iv), 5.0);
  EXPECT_NEAR(window_volume(disc), 4 * kPi, 1e-14);
  EXPECT_DOUBLE_EQ(distance_to_boundary(iv, Point(2.0)), 1.0);
  EXPECT_DOUBLE_EQ(distance_to_boundary(disc, Point(0.0, 1.5)), 0.5);
  EXPECT_TRUE(window_contains(shrink(iv, 1.0), Point(1.9)));
  EXPECT_FALSE(window_contains(shrink(iv, 1.0), Point(2.1)));
  EXPECT_THROW(shrink(disc, 2.5), InvalidParameter);
  EXPECT_DOUBLE_EQ(enclosing_radius(iv), 3.0);
  EXPECT_NEAR(ball_volume(1.0, 1), 2.0, 1e-15);
}

TEST(Poisson, CountMeanAndVariance) {
  const Window w = Ball{3.0, 2};
  const double lambda = 0.7;
  const double mean = lambda * window_volume(w);
  double s = 0.0, s2 = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const auto c = sample_poisson(lambda, w, 100 + i);
    for (std::size_t k = 0; k < c.size(); ++k) ASSERT_TRUE(window_contains(w, c.point(k)));
    s += c.size();
    s2 += static_cast<double>(c.size()) * c.size();
  }
  const double m = s / n;
  EXPECT_NEAR(m, mean, 4 * std::sqrt(mean / n));
  EXPECT_NEAR((s2 / n - m * m) / mean, 1.0, 0.1);
}

TEST(Ginibre, SizeAndBulkDensity) {
  EXPECT_EQ(sample_ginibre(1, std::numeric_limits<double>::infinity(), 3).size(), 1u);
  const int n = 300;
  const auto all = sample_ginibre(n, std::numeric_limits<double>::infinity(), 4);
  EXPECT_EQ(all.size(), static_cast<std::size_t>(n));
  // Circular law: uniform on the disc of radius sqrt(n) with density 1/pi.
  const double r = 0.5 * std::sqrt(n);
  int inside = 0;
  for (std::size_t i = 0; i < all.size(); ++i) inside += all.point(i).norm() <= r;
  EXPECT_NEAR(inside, n / 4.0, 15.0);
  const auto windowed = sample_ginibre(n, 5.0, 4);
  for (std::size_t i = 0; i < windowed.size(); ++i) EXPECT_LE(windowed.point(i).norm(), 5.0);
  EXPECT_THROW(sample_ginibre(n, 0.9 * std::sqrt(n), 1), InvalidParameter);
}

TEST(Dpp, SineTraceAndCountStatistics) {
  const auto model = ModelSpec::sine(2);
  const Window w = Interval{-5.0, 5.0};
  const DppSampler sampler(model, w);
  EXPECT_NEAR(sampler.expected_count(), 10.0, 1e-6);
  EXPECT_NEAR(kernel_trace(model, w), 10.0, 1e-12);
  // Number variance of sine2 grows like log L / pi^2; well below Poisson.
  EXPECT_LT(sampler.count_variance(), 1.0);
  for (double l : sampler.eigenvalues()) {
    EXPECT_GE(l, -1e-10);
    EXPECT_LE(l, 1.0 + 1e-10);
  }
  const int n = 300;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto c = sampler.sample(1000 + i);
    for (std::size_t k = 0; k < c.size(); ++k) ASSERT_TRUE(window_contains(w, c.point(k)));
    s += c.size();
    s2 += static_cast<double>(c.size()) * c.size();
  }
  const double m = s / n;
  const double var = s2 / n - m * m;
  EXPECT_NEAR(m, sampler.expected_count(), 4 * std::sqrt(sampler.count_variance() / n));
  EXPECT_LT(var, m);
  EXPECT_NEAR(var, sampler.count_variance(), 0.5 * sampler.count_variance() + 0.05);
}

TEST(Dpp, BesselTraceMatchesQuadrature) {
  const auto model = ModelSpec::bessel(1.0);
  const Window w = Interval{0.0, 40.0};
  // Substitute x = u^2 to tame the square-root behaviour at the hard edge.
  const double oracle = simpson([](double u) { return 2 * u * bessel_diag_oracle(1.0, u * u); }, 0.0, std::sqrt(40.0), 4000);
  EXPECT_NEAR(kernel_trace(model, w), oracle, 1e-8);
  const DppSampler sampler(model, w);
  EXPECT_NEAR(sampler.expected_count(), oracle, 1e-4);
  double s = 0.0;
  const int n = 300;
  for (int i = 0; i < n; ++i) s += sampler.sample(50 + i).size();
  EXPECT_NEAR(s / n, oracle, 4 * std::sqrt(sampler.count_variance() / n) + 1e-3);
}

TEST(Dpp, DeterministicPerSeed) {
  const DppSampler sampler(ModelSpec::ginibre(), Ball{2.5, 2});
  const auto a = sampler.sample(9);
  const auto b = sampler.sample(9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.point(i), b.point(i));
}

TEST(GaussianEnsemble, UnitSpacingInBulk) {
  const Interval w{-15.0, 15.0};
  for (double beta : {1.0, 2.0, 4.0}) {
    double s = 0.0;
    const int n = 60;
    for (int i = 0; i < n; ++i) s += sample_gaussian_ensemble_bulk(beta, w, 0, 7 + i).size();
    EXPECT_NEAR(s / n, 30.0, 0.6) << beta;
  }
  EXPECT_THROW(sample_gaussian_ensemble_bulk(3.0, w, 0, 1), UnsupportedModel);
}

TEST(Gibbs, DetailedBalanceOnThreeStates) {
  const std::vector<double> e = {0.0, 1.0, -0.5};
  const double beta = 1.3;
  Eigen::MatrixXd q(3, 3);
  q << 0.2, 0.5, 0.3, 0.5, 0.1, 0.4, 0.3, 0.4, 0.3;
  const auto p = mh_transition_matrix(e, beta, q);
  std::vector<double> pi(3);
  double z = 0.0;
  for (int i = 0; i < 3; ++i) z += pi[i] = std::exp(-beta * e[i]);
  for (auto& v : pi) v /= z;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-14);
    for (int j = 0; j < 3; ++j) {
      EXPECT_GE(p(i, j), 0.0);
      EXPECT_LT(std::fabs(pi[i] * p(i, j) - pi[j] * p(j, i)), 1e-12);
    }
  }
  EXPECT_EQ(metropolis_acceptance(0.0, -1.0, 1.0), 1.0);
  EXPECT_NEAR(metropolis_acceptance(0.0, 1.0, 2.0), std::exp(-2.0), 1e-15);
  EXPECT_EQ(metropolis_acceptance(0.0, std::numeric_limits<double>::infinity(), 1.0), 0.0);
}

TEST(Gibbs, ZeroPotentialIsUniform) {
  const auto model = ModelSpec::poisson(1.0, 1);
  std::vector<double> xs;
  for (int rep = 0; rep < 100; ++rep) {
    const auto c = sample_gibbs(model, 4.0, Configuration(1), 10, 500 + rep, {.sweeps = 20});
    ASSERT_EQ(c.size(), 10u);
    for (std::size_t i = 0; i < c.size(); ++i) xs.push_back(c.point(i)[0]);
  }
  const auto ks = ks_one_sample(xs, [](double x) { return std::clamp((x + 4.0) / 8.0, 0.0, 1.0); });
  EXPECT_GT(ks.p_value, 0.01);
}

TEST(Gibbs, RepulsionSpreadsParticles) {
  auto mean_min_gap = [](const ModelSpec& model) {
    double s = 0.0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
      const auto c = sample_gibbs(model, 3.0, Configuration(1), 6, 900 + rep, {.sweeps = 100});
      std::vector<double> v;
      for (std::size_t i = 0; i < c.size(); ++i) v.push_back(c.point(i)[0]);
      std::sort(v.begin(), v.end());
      double g = 1e9;
      for (std::size_t i = 1; i < v.size(); ++i) g = std::min(g, v[i] - v[i - 1]);
      s += g;
    }
    return s / reps;
  };
  const auto free = ModelSpec::poisson(1.0, 1);
  const auto rep = ModelSpec::ruelle(std::make_shared<BumpPotential>(5.0, 0.8), 1.0, 1.0, 1);
  EXPECT_GT(mean_min_gap(rep), 1.5 * mean_min_gap(free));
}

TEST(Gibbs, ExteriorIsKeptFrozen) {
  const auto model = ModelSpec::ruelle(std::make_shared<BumpPotential>(1.0, 1.0), 1.0, 1.0, 1);
  Configuration ext(1);
  ext.add(Point(3.5), true);
  ext.add(Point(-4.0), true);
  const auto c = sample_gibbs(model, 3.0, ext, 4, 1, {.sweeps = 10});
  ASSERT_EQ(c.size(), 6u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(c.point(i).norm(), 3.0);
  EXPECT_EQ(c.point(4), Point(3.5));
  EXPECT_EQ(c.point(5), Point(-4.0));
}

TEST(Correlations, PoissonIsFlat) {
  const Window w = Interval{-20.0, 20.0};
  std::vector<Configuration> samples;
  for (int i = 0; i < 200; ++i) samples.push_back(sample_poisson(2.0, w, 40 + i));
  const auto est = estimate_correlations(samples, w, {.bins = 8, .r_max = 2.0});
  EXPECT_NEAR(est.intensity, 2.0, 4 * est.intensity_se);
  ASSERT_EQ(est.g.size(), 8u);
  for (std::size_t k = 0; k < est.g.size(); ++k) {
    EXPECT_GT(est.g_se[k], 0.0);
    EXPECT_NEAR(est.g[k], 1.0, 4 * est.g_se[k] + 0.02) << k;
  }
}

TEST(Correlations, SineTwoMatchesKernel) {
  const auto model = ModelSpec::sine(2);
  const Window w = Interval{-12.0, 12.0};
  const DppSampler sampler(model, w);
  std::vector<Configuration> samples;
  for (int i = 0; i < 300; ++i) samples.push_back(sampler.sample(70 + i));
  const auto est = estimate_correlations(samples, w, {.bins = 6, .r_max = 1.5});
  for (std::size_t k = 0; k < est.g.size(); ++k) {
    // Bin average of 1 - sinc^2 over [r_lo, r_hi] (1-d: uniform in r).
    const double oracle =
        simpson([](double r) { const double s = r == 0 ? 1.0 : std::sin(kPi * r) / (kPi * r); return 1 - s * s; },
                est.r_lo[k], est.r_hi[k], 200) /
        (est.r_hi[k] - est.r_lo[k]);
    EXPECT_NEAR(est.g[k], oracle, 4 * est.g_se[k] + 0.01) << k;
  }
}

TEST(Correlations, DuplicatedSampleHasZeroError) {
  const Window w = Interval{-10.0, 10.0};
  const auto c = sample_poisson(1.0, w, 5);
  const auto est = estimate_correlations({c, c}, w, {.bins = 4, .r_max = 1.0});
  EXPECT_EQ(est.intensity_se, 0.0);
  for (double se : est.g_se) EXPECT_EQ(se, 0.0);
  EXPECT_THROW(estimate_correlations({c}, w), InsufficientData);
}

TEST(Sampler, AutoMethodsAndWindows) {
  SamplerSpec spec;
  spec.window = 4.0;
  EXPECT_EQ(ModelSampler(ModelSpec::sine(2), spec).method(), "dpp");
  EXPECT_EQ(ModelSampler(ModelSpec::ginibre(), spec).method(), "ginibre");
  EXPECT_EQ(ModelSampler(ModelSpec::poisson(1.0, 1), spec).method(), "poisson");
  EXPECT_EQ(window_dim(sampler_window(ModelSpec::ginibre(), 3.0)), 2);
  const auto bw = std::get<Interval>(sampler_window(ModelSpec::bessel(1.0), 3.0));
  EXPECT_EQ(bw.lo, 0.0);
  EXPECT_EQ(bw.hi, 3.0);
  const ModelSampler s(ModelSpec::sine(4), spec);
  const auto a = s.sample(3), b = s.sample(3);
  EXPECT_TRUE(same_multiset(a, b));
}

}  // namespace
}  // namespace ibm
