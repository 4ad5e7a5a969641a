#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "generators.hpp"
#include "monotone/errors.hpp"
#include "monotone/exact.hpp"
#include "monotone/uniformize.hpp"

using namespace monotone;

namespace {

// Sums f over every path x_0..x_len weighted by init and the kernel.
double path_sum(const FiniteKernel& k, const std::vector<double>& init, std::size_t len,
                const std::function<double(const std::vector<double>&)>& f) {
  const std::size_t n = k.size();
  std::vector<std::size_t> idx(len + 1, 0);
  std::vector<double> states(len + 1);
  double total = 0.0;
  while (true) {
    double w = init[idx[0]];
    for (std::size_t t = 0; t < len && w > 0.0; ++t) w *= k(idx[t], idx[t + 1]);
    if (w > 0.0) {
      for (std::size_t t = 0; t <= len; ++t) states[t] = k.space()[idx[t]];
      total += w * f(states);
    }
    std::size_t pos = 0;
    while (pos <= len && ++idx[pos] == n) idx[pos++] = 0;
    if (pos > len) break;
  }
  return total;
}

// Stationary law by brute power iteration; only valid for aperiodic irreducible kernels.
std::vector<double> power_pi(const FiniteKernel& k) {
  Matrix p = k.matrix();
  for (int i = 0; i < 60; ++i) {
    p = p * p;
    for (Eigen::Index r = 0; r < p.rows(); ++r) p.row(r) /= p.row(r).sum();
  }
  std::vector<double> pi(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) pi[j] = p(0, static_cast<Eigen::Index>(j));
  return pi;
}

FiniteKernel positive_kernel(std::mt19937_64& rng, std::size_t n) {
  return gen::any_kernel(rng, n, 0.0);
}

}  // namespace

TEST(Stationary, TwoStateClosedForm) {
  Matrix m(2, 2);
  m << 0.9, 0.1, 0.2, 0.8;
  const auto pi = stationary(FiniteKernel(OrderedStateSpace::integers(0, 1), m));
  EXPECT_NEAR(pi[0], 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(pi[1], 1.0 / 3.0, 1e-14);
  EXPECT_TRUE(pi.unique());
}

TEST(Stationary, ReflectedWalkIsTruncatedGeometric) {
  const long top = 20;
  const auto model = reflected_walk({{-1, 0.7}, {1, 0.3}}, top);
  const auto pi = stationary(model.kernel);
  double z = 0.0;
  for (long i = 0; i <= top; ++i) z += std::pow(3.0 / 7.0, static_cast<double>(i));
  for (long i = 0; i <= top; ++i)
    EXPECT_NEAR(pi[static_cast<std::size_t>(i)], std::pow(3.0 / 7.0, static_cast<double>(i)) / z, 1e-13);
}

TEST(Stationary, MatchesPowerIterationOnRandomKernels) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = positive_kernel(rng, gen::index(rng, 1, 12));
    const auto pi = stationary(k);
    const auto oracle = power_pi(k);
    for (std::size_t i = 0; i < k.size(); ++i) ASSERT_NEAR(pi[i], oracle[i], 1e-12);
    EXPECT_LE(pi.invariance_residual(k), 1e-12);
  }
}

TEST(ClosedClasses, AbsorbingStatesAndMixture) {
  Matrix m(4, 4);
  m << 1.0, 0.0, 0.0, 0.0,
       0.3, 0.2, 0.5, 0.0,
       0.0, 0.0, 0.5, 0.5,
       0.0, 0.0, 0.5, 0.5;
  const FiniteKernel k(OrderedStateSpace::integers(0, 3), m);
  const auto cls = closed_classes(k);
  ASSERT_EQ(cls.size(), 2u);
  EXPECT_EQ(cls[0], std::vector<std::size_t>({0}));
  EXPECT_EQ(cls[1], std::vector<std::size_t>({2, 3}));
  const auto pi = stationary(k);
  EXPECT_FALSE(pi.unique());
  EXPECT_FALSE(pi.note().empty());
  EXPECT_NEAR(pi[0], 0.5, 1e-14);
  EXPECT_NEAR(pi[1], 0.0, 1e-14);
  EXPECT_NEAR(pi[2], 0.25, 1e-14);
  EXPECT_NEAR(pi[3], 0.25, 1e-14);
}

TEST(ClosedClasses, PeriodicChainStillSolves) {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  const auto pi = stationary(FiniteKernel(OrderedStateSpace::integers(0, 1), m));
  EXPECT_NEAR(pi[0], 0.5, 1e-15);
  EXPECT_TRUE(pi.unique());
}

TEST(CovarianceCurve, MatchesPathEnumeration) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = gen::index(rng, 2, 3);
    const auto k = gen::any_kernel(rng, n, 0.3);
    const auto init = gen::simplex(rng, n);
    const Distribution mu(k.space(), init);
    auto f1 = [](double x) { return x * x - 1.0; };
    auto f2 = [](double x) { return std::exp(x / 3.0); };
    const std::size_t t_max = 4;
    const auto c = covariance_curve(k, mu, f1, f2, t_max);
    ASSERT_EQ(c.size(), t_max + 1);
    for (std::size_t t = 0; t <= t_max; ++t) {
      const double exy = path_sum(k, init, t, [&](const auto& x) { return f1(x[0]) * f2(x[t]); });
      const double ex = path_sum(k, init, t, [&](const auto& x) { return f1(x[0]); });
      const double ey = path_sum(k, init, t, [&](const auto& x) { return f2(x[t]); });
      ASSERT_NEAR(c.values[t], exy - ex * ey, 1e-13) << "trial " << trial << " t " << t;
      EXPECT_EQ(c.times[t], static_cast<double>(t));
    }
  }
}

TEST(SupermodCurves, MatchPathEnumeration) {
  std::mt19937_64 rng(23);
  std::vector<BivariateFn> hs{[](double x, double y) { return x * y; },
                              [](double x, double y) { return std::min(x, y); },
                              [](double x, double y) { return x - y; }};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = gen::index(rng, 2, 4);
    const auto k = gen::any_kernel(rng, n, 0.3);
    const auto init = gen::simplex(rng, n, 0.3);
    const auto cs = supermod_curves(k, Distribution(k.space(), init), hs, 3);
    for (std::size_t h = 0; h < hs.size(); ++h)
      for (std::size_t t = 0; t <= 3; ++t)
        ASSERT_NEAR(cs[h].values[t], path_sum(k, init, t, [&](const auto& x) { return hs[h](x[0], x[t]); }),
                    1e-13);
    const auto single = supermod_curve(k, Distribution(k.space(), init), hs[1], 3);
    for (std::size_t t = 0; t <= 3; ++t) EXPECT_DOUBLE_EQ(single.values[t], cs[1].values[t]);
  }
}

TEST(DifferenceCurves, MatchPathEnumeration) {
  std::mt19937_64 rng(24);
  std::vector<BivariateFn> hs{[](double x, double d) { return x * d; },
                              [](double x, double d) { return std::min(x, d); }};
  std::vector<std::size_t> lags{1, 2};
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = gen::index(rng, 2, 3);
    const auto k = gen::any_kernel(rng, n, 0.3);
    const auto init = gen::simplex(rng, n);
    const Distribution mu(k.space(), init);
    const std::size_t t_max = 3;
    const auto cs = difference_curves(k, mu, hs, lags, t_max);
    ASSERT_EQ(cs.size(), lags.size() * hs.size());
    for (std::size_t si = 0; si < lags.size(); ++si)
      for (std::size_t hi = 0; hi < hs.size(); ++hi)
        for (std::size_t t = 0; t <= t_max; ++t) {
          const std::size_t s = lags[si];
          const double expect = path_sum(k, init, t + s, [&](const auto& x) {
            return hs[hi](x[0], x[t] - x[t + s]);
          });
          ASSERT_NEAR(cs[si * hs.size() + hi].values[t], expect, 1e-13);
        }
    const auto one = difference_curve(k, mu, hs[0], 2, t_max);
    for (std::size_t t = 0; t <= t_max; ++t) EXPECT_NEAR(one.values[t], cs[2].values[t], 1e-15);
  }
}

TEST(PointChecks, MatchPathEnumeration) {
  std::mt19937_64 rng(25);
  auto h = [](double x, double y) { return std::min(x, y) + 0.5 * x * y; };
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3;
    const auto p1 = positive_kernel(rng, n);
    const auto p2 = gen::any_kernel(rng, n);
    const auto p3 = gen::any_kernel(rng, n);
    const auto pi = power_pi(p1);

    // Chain p1, p2 from pi: X0 ~ pi, X1 ~ p1, X2 ~ p2.
    double lhs3 = 0.0, rhs3 = 0.0, lhs4 = 0.0, rhs4 = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          const double w = pi[a] * p1(a, b) * p2(b, c);
          const double x0 = static_cast<double>(a), x1 = static_cast<double>(b), x2 = static_cast<double>(c);
          lhs3 += w * h(x0, x2);
          rhs3 += w * h(x1, x2);
          for (std::size_t d = 0; d < n; ++d) {
            const double x3 = static_cast<double>(d);
            lhs4 += w * p3(c, d) * h(x0, x2 - x3);
            rhs4 += w * p3(c, d) * h(x1, x2 - x3);
          }
        }
    const auto r3 = three_point_check(p1, p2, h);
    EXPECT_NEAR(r3.lhs, lhs3, 1e-12);
    EXPECT_NEAR(r3.rhs, rhs3, 1e-12);
    const auto r4 = four_point_check(p1, p2, p3, h);
    EXPECT_NEAR(r4.lhs, lhs4, 1e-12);
    EXPECT_NEAR(r4.rhs, rhs4, 1e-12);
  }
}

TEST(Transient, AbsorbedPoissonClosedForms) {
  const double lambda = 1.0, dt = 0.25;
  const auto model = absorbed_poisson(0, 2, lambda, dt, 4.0);
  ASSERT_EQ(model.horizon_steps, std::optional<std::size_t>(16));
  const auto mean = transient_mean_curve(model.kernel, 0.0, 16);
  const auto var = transient_variance_curve(model.kernel, 0.0, 16);
  for (std::size_t i = 0; i <= 16; ++i) {
    const double t = dt * static_cast<double>(i);
    const double p0 = std::exp(-lambda * t);
    const double p1 = lambda * t * p0;
    const double p2 = 1.0 - p0 - p1;
    const double m = p1 + 2.0 * p2;
    EXPECT_NEAR(mean.times[i], t, 1e-15);
    EXPECT_NEAR(mean.values[i], m, 1e-12) << t;
    EXPECT_NEAR(var.values[i], p1 + 4.0 * p2 - m * m, 1e-12) << t;
  }
}

TEST(Transient, RejectsDownwardStart) {
  Matrix m(3, 3);
  m << 1.0, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, 0.5, 0.5;
  const FiniteKernel k(OrderedStateSpace::integers(0, 2), m);
  EXPECT_NO_THROW(transient_mean_curve(k, 0.0, 3));
  EXPECT_THROW(transient_mean_curve(k, 1.0, 3), PreconditionError);
  EXPECT_THROW(transient_variance_curve(k, 2.0, 3), PreconditionError);
  EXPECT_THROW(transient_mean_curve(k, 0.5, 3), DomainError);
}

TEST(Transient, SupermodProfileMatchesEnumeration) {
  const auto model = absorbed_poisson(0, 3, 0.8, 0.5, 2.0);
  const auto& k = model.kernel;
  auto h = [](double x, double y) { return x * y; };
  const std::size_t t = 3;
  const auto prof = transient_supermod_profile(k, 0.0, h, t);
  ASSERT_EQ(prof.size(), t + 1);
  std::vector<double> init(k.size(), 0.0);
  init[0] = 1.0;
  for (std::size_t s = 0; s <= t; ++s)
    EXPECT_NEAR(prof.values[s], path_sum(k, init, t, [&](const auto& x) { return h(x[s], x[t]); }), 1e-13);
}

TEST(Uniformize, TwoStateExponential) {
  Matrix q(2, 2);
  q << -1.0, 1.0, 2.0, -2.0;
  for (double t : {0.0, 0.1, 1.0, 7.5, 40.0}) {
    const Matrix p = uniformize(q, t);
    const double e = std::exp(-3.0 * t);
    EXPECT_NEAR(p(0, 0), 2.0 / 3.0 + e / 3.0, 1e-13) << t;
    EXPECT_NEAR(p(1, 0), 2.0 / 3.0 - 2.0 * e / 3.0, 1e-13) << t;
    EXPECT_NEAR(p.row(1).sum(), 1.0, 1e-15);
  }
  Matrix bad = q;
  bad(0, 1) = -1.0;
  EXPECT_THROW(uniformize(bad, 1.0), InvariantError);
}
