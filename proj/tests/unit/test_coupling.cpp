#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "monotone/coupling.hpp"
#include "monotone/errors.hpp"
#include "monotone/exact.hpp"
#include "monotone/ginv.hpp"
#include "monotone/rng.hpp"

using namespace monotone;

TEST(Stream, UniformsAreInHalfOpenUnitIntervalAndDeterministic) {
  const Stream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  int differ_id = 0, differ_seed = 0;
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = a.uniform(static_cast<std::uint64_t>(i));
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    ASSERT_EQ(u, b.uniform(static_cast<std::uint64_t>(i)));
    differ_id += u != c.uniform(static_cast<std::uint64_t>(i));
    differ_seed += u != d.uniform(static_cast<std::uint64_t>(i));
    sum += u;
  }
  EXPECT_EQ(differ_id, n);
  EXPECT_EQ(differ_seed, n);
  // Mean of 1e5 uniforms: sd is about 9.1e-4.
  EXPECT_NEAR(sum / n, 0.5, 5e-3);
}

TEST(SimulateCoupled, ZeroStepsReturnsInitialStates) {
  const auto k = reflected_walk({{-1, 0.5}, {1, 0.5}}, 5).kernel;
  const std::vector<double> x0{0.0, 3.0, 5.0};
  const auto paths = simulate_coupled(k, x0, 0, 1);
  ASSERT_EQ(paths.trajectories.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_EQ(paths.trajectories[i].size(), 1u);
    EXPECT_EQ(paths.trajectories[i][0], x0[i]);
  }
  EXPECT_THROW(simulate_coupled(k, std::vector<double>{0.5}, 3, 1), DomainError);
}

TEST(SimulateCoupled, OrderingHoldsOnLongRuns) {
  std::mt19937_64 rng(31);
  const auto space = OrderedStateSpace::integers(0, 7);
  for (int trial = 0; trial < 3; ++trial) {
    const auto k = gen::monotone_kernel(rng, space);
    const std::vector<double> x0{0.0, 3.0, 7.0};
    const auto paths = simulate_coupled(k, x0, 100000, 1000 + static_cast<std::uint64_t>(trial));
    EXPECT_EQ(paths.ordering_violations(), 0u);
  }
}

TEST(SimulateCoupled, IncrementOrderingUnderCondition1) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const auto model = state_dependent_walk(gen::walk_spec(rng, 9, true));
    ASSERT_TRUE(check_condition1(model.kernel).passed);
    const std::vector<double> x0{0.0, 2.0, 4.0, 6.0, 8.0};
    const auto paths = simulate_coupled(model.kernel, x0, 10000, 7 + static_cast<std::uint64_t>(trial));
    EXPECT_EQ(paths.ordering_violations(), 0u);
    EXPECT_EQ(paths.increment_violations(), 0u);
  }
}

TEST(SimulateCoupled, NonMonotoneKernelCanCross) {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  const FiniteKernel swap(OrderedStateSpace::integers(0, 1), m);
  const auto paths = simulate_coupled(swap, std::vector<double>{0.0, 1.0}, 4, 3);
  EXPECT_GT(paths.ordering_violations(), 0u);
}

TEST(SimulateCoupled, DeterministicInSeedAndCyclesSequences) {
  std::mt19937_64 rng(33);
  const auto space = OrderedStateSpace::integers(0, 5);
  const auto a = gen::monotone_kernel(rng, space);
  const auto b = gen::monotone_kernel(rng, space);
  const std::vector<double> x0{1.0, 4.0};
  const auto p1 = simulate_coupled(a, x0, 200, 99);
  const auto p2 = simulate_coupled(a, x0, 200, 99);
  EXPECT_EQ(p1.trajectories, p2.trajectories);
  EXPECT_NE(p1.trajectories, simulate_coupled(a, x0, 200, 100).trajectories);

  const KernelSequence seq({a, b});
  const auto ps = simulate_coupled(seq, x0, 200, 99);
  const auto ga = build_ginv(a), gb = build_ginv(b);
  const Stream stream(99, streams::kCoupling);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    double x = x0[i];
    for (std::size_t n = 1; n <= 200; ++n) {
      const auto& g = (n - 1) % 2 == 0 ? ga : gb;
      x = g.query(x, stream.uniform(n - 1));
      ASSERT_EQ(ps.trajectories[i][n], x) << "path " << i << " step " << n;
    }
  }
}

TEST(MonteCarlo, AgreesWithExactWithinFourStandardErrors) {
  const auto k = reflected_walk({{-1, 0.6}, {1, 0.4}}, 12).kernel;
  const auto pi = stationary(k);
  const std::size_t t_max = 10, n_paths = 20000;

  const auto r = mc_autocovariance(k, pi, t_max, n_paths, 5);
  const auto exact = covariance_curve(k, pi, [](double x) { return x; }, [](double x) { return x; }, t_max);
  ASSERT_EQ(r.size(), t_max + 1);
  for (std::size_t t = 0; t <= t_max; ++t) {
    EXPECT_EQ(r[t].n_samples, n_paths);
    EXPECT_GT(r[t].std_error, 0.0);
    EXPECT_LE(std::abs(r[t].value - exact.values[t]), 4.0 * r[t].std_error + 1e-9) << t;
  }

  auto h = [](double x, double y) { return std::min(x, y); };
  const auto ms = mc_supermod_curve(k, pi, h, t_max, n_paths, 6);
  const auto es = supermod_curve(k, pi, h, t_max);
  for (std::size_t t = 0; t <= t_max; ++t)
    EXPECT_LE(std::abs(ms[t].value - es.values[t]), 4.0 * ms[t].std_error + 1e-9) << t;

  std::vector<BivariateFn> hs{[](double x, double d) { return x * d; }};
  std::vector<std::size_t> lags{2};
  const auto md = mc_difference_curves(k, pi, hs, lags, t_max, n_paths, 7);
  const auto ed = difference_curves(k, pi, hs, lags, t_max);
  for (std::size_t t = 0; t <= t_max; ++t)
    EXPECT_LE(std::abs(md[0][t].value - ed[0].values[t]), 4.0 * md[0][t].std_error + 1e-9) << t;
}

TEST(MonteCarlo, ConstantProcessAutocovarianceIsVariance) {
  const auto space = OrderedStateSpace::integers(0, 4);
  const auto k = constant_model(space).kernel;
  const Distribution init(space, {0.2, 0.2, 0.2, 0.2, 0.2});
  const auto r = mc_autocovariance(k, init, 6, 50000, 11);
  for (std::size_t t = 1; t <= 6; ++t) EXPECT_DOUBLE_EQ(r[t].value, r[0].value);
  // Var of uniform {0..4} is 2; the plug-in estimate has sd about 0.006.
  EXPECT_NEAR(r[0].value, 2.0, 4.0 * r[0].std_error);
}

TEST(MonteCarlo, DeterministicAndValidated) {
  const auto k = reflected_walk({{-1, 0.5}, {1, 0.5}}, 4).kernel;
  const auto pi = stationary(k);
  const auto a = mc_autocovariance(k, pi, 3, 100, 1);
  const auto b = mc_autocovariance(k, pi, 3, 100, 1);
  for (std::size_t t = 0; t <= 3; ++t) EXPECT_EQ(a[t].value, b[t].value);
  EXPECT_THROW(mc_autocovariance(k, pi, 3, 1, 1), DomainError);
  const Distribution other(OrderedStateSpace::integers(0, 1), {0.5, 0.5});
  EXPECT_THROW(mc_autocovariance(k, other, 3, 10, 1), ShapeError);
}
