#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "monotone/checks.hpp"
#include "monotone/errors.hpp"
#include "monotone/exact.hpp"
#include "monotone/models.hpp"

using namespace monotone;

namespace {

void expect_predictions(const ModelKernel& m) {
  EXPECT_EQ(check_stoch_monotone(m.kernel).passed, m.predicted_monotone) << m.name;
  EXPECT_EQ(check_condition1(m.kernel).passed, m.predicted_condition1) << m.name;
}

}  // namespace

TEST(ReflectedWalk, PredictionsHoldForRandomIncrements) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = reflected_walk(gen::increments(rng, 3), static_cast<long>(gen::index(rng, 1, 15)));
    EXPECT_TRUE(m.predicted_monotone);
    expect_predictions(m);
    const auto t = two_sided_reflected_walk(gen::increments(rng, 2), static_cast<long>(gen::index(rng, 1, 10)));
    expect_predictions(t);
  }
  EXPECT_THROW(two_sided_reflected_walk({{1, 1.0}}, 0), DomainError);
}

TEST(ReflectedWalk, ReportsMassPastTheTop) {
  const auto m = reflected_walk({{-1, 0.5}, {2, 0.5}}, 6);
  EXPECT_DOUBLE_EQ(m.truncation_mass, 0.5);
  EXPECT_DOUBLE_EQ(m.kernel(5, 6), 0.5);
  EXPECT_DOUBLE_EQ(m.kernel(0, 0), 0.5);
}

TEST(StateDependentWalk, PlusMinusOneMatchesReflectedWalk) {
  const long top = 8;
  WalkSpec s;
  for (long i = 0; i <= top; ++i) {
    s.p.push_back(0.3);
    s.q.push_back(i == 0 ? 0.0 : 0.5);
    s.r.push_back(i == 0 ? 0.7 : 0.2);
  }
  const auto a = state_dependent_walk(s);
  const auto b = reflected_walk({{-1, 0.5}, {0, 0.2}, {1, 0.3}}, top);
  EXPECT_LT((a.kernel.matrix() - b.kernel.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_DOUBLE_EQ(a.truncation_mass, 0.3);
}

TEST(StateDependentWalk, PredictionsMatchCheckers) {
  std::mt19937_64 rng(42);
  int mono_fail = 0, c1_fail = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = state_dependent_walk(gen::walk_spec(rng, gen::index(rng, 2, 8), trial % 3 == 0));
    expect_predictions(m);
    mono_fail += !m.predicted_monotone;
    c1_fail += !m.predicted_condition1;
  }
  EXPECT_GT(mono_fail, 10);
  EXPECT_GT(c1_fail, 50);
  WalkSpec bad{{0.5, 0.5}, {0.1, 0.5}, {0.4, 0.0}};
  EXPECT_THROW(state_dependent_walk(bad), InvariantError);
}

TEST(BirthDeath, MM1SkeletonHasTruncatedGeometricLaw) {
  BirthDeathSpec s;
  const std::size_t n = 16;
  s.lambdas.assign(n, 1.0);
  s.mus.assign(n, 2.0);
  s.mus[0] = 0.0;
  const auto m = birth_death_skeleton(s, 0.05);
  EXPECT_DOUBLE_EQ(m.kernel.time_step(), 0.05);
  expect_predictions(m);
  EXPECT_TRUE(m.predicted_condition1);
  const auto pi = stationary(m.kernel);
  const double z = (1.0 - std::pow(0.5, static_cast<double>(n))) / 0.5;
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(pi[i], std::pow(0.5, static_cast<double>(i)) / z, 1e-10);
}

TEST(BirthDeath, RandomSpecsFollowPredictions) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const bool ordered = trial % 2 == 0;
    const auto s = gen::bd_spec(rng, gen::index(rng, 3, 10), ordered);
    const auto m = birth_death_skeleton(s, gen::uniform(rng, 0.05, 2.0));
    EXPECT_EQ(m.predicted_condition1, ordered);
    expect_predictions(m);
  }
}

TEST(BirthDeath, SkeletonsFormASemigroup) {
  std::mt19937_64 rng(44);
  const auto s = gen::bd_spec(rng, 6, true);
  const auto a = birth_death_skeleton(s, 0.3).kernel;
  const auto b = birth_death_skeleton(s, 0.6).kernel;
  EXPECT_LT((compose(a, a).matrix() - b.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(JointBD, MarginalsProjectToTheSingleChains) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    auto s1 = gen::bd_spec(rng, 5, true);
    auto s2 = s1;
    for (std::size_t i = 0; i < s2.lambdas.size(); ++i) {
      s2.lambdas[i] += gen::uniform(rng, 0.0, 0.5);
      if (i > 0) s1.mus[i] += gen::uniform(rng, 0.0, 0.5);
    }
    const auto joint = bd_coupled_generator(s1, s2);
    const double t = 0.7;
    const Matrix pj = joint.skeleton(t);
    const auto k1 = birth_death_skeleton(s1, t).kernel;
    const auto k2 = birth_death_skeleton(s2, t).kernel;
    const Matrix m1 = joint.project(pj, 1), m2 = joint.project(pj, 2);
    for (std::size_t r = 0; r < joint.pairs().size(); ++r) {
      const auto [i, j] = joint.pairs()[r];
      for (std::size_t y = 0; y < k1.size(); ++y) {
        ASSERT_NEAR(m1(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(y)), k1(i, y), 1e-8);
        ASSERT_NEAR(m2(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(y)), k2(j, y), 1e-8);
      }
    }
    for (std::size_t r = 0; r < joint.pairs().size(); ++r) {
      const auto [i, j] = joint.pairs()[r];
      EXPECT_EQ(joint.index(i, j), r);
      const auto run = joint.simulate_moves(i, j, 2000, 17 + r);
      EXPECT_EQ(run.exits, 0u);
      EXPECT_LE(run.final_state.first, run.final_state.second);
    }
  }
}

TEST(JointBD, RejectsUnorderedRates) {
  BirthDeathSpec a{{1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {}};
  BirthDeathSpec b{{1.0, 0.5, 0.0}, {0.0, 1.0, 1.0}, {}};
  EXPECT_NO_THROW(bd_coupled_generator(b, a));
  try {
    bd_coupled_generator(a, b);
    FAIL() << "expected OrderingError";
  } catch (const OrderingError& e) {
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
}

TEST(ShotNoise, DriftOnlyDecaysGeometrically) {
  const auto grid = OrderedStateSpace::uniform(0.0, 10.0, 101);
  const double r = 0.5, dt = 0.1;
  const auto m = shot_noise_skeleton(r, {{1.0, 1.0}}, 0.0, dt, grid);
  expect_predictions(m);
  const double a = std::exp(-r * dt), h = 0.1;
  Matrix p = Matrix::Identity(101, 101);
  for (std::size_t n = 1; n <= 20; ++n) {
    p = p * m.kernel.matrix();
    double bound = 0.0;
    for (std::size_t k = 0; k < n; ++k) bound += std::pow(a, static_cast<double>(k));
    bound *= h / 2.0;
    for (std::size_t x = 0; x < 101; ++x) {
      // Drift-only rows are point masses.
      Eigen::Index y;
      p.row(static_cast<Eigen::Index>(x)).maxCoeff(&y);
      const double exact = grid[x] * std::pow(a, static_cast<double>(n));
      ASSERT_LE(std::abs(grid[static_cast<std::size_t>(y)] - exact), bound + 1e-12) << n << " " << x;
    }
  }
}

TEST(ShotNoise, ValidatesArguments) {
  const auto grid = OrderedStateSpace::uniform(0.0, 6.0, 61);
  EXPECT_THROW(shot_noise_skeleton(10.0, {{0.1, 1.0}}, 1.0, 0.1, grid), DomainError);
  EXPECT_THROW(shot_noise_skeleton(1.0, {{0.1, 1.0}}, 1.0, 0.1, OrderedStateSpace({0.0, 0.1, 0.3})),
               DomainError);
  EXPECT_THROW(shot_noise_skeleton(0.01, {{3.0, 1.0}}, 50.0, 0.1, grid), TruncationError);
  const auto ok = shot_noise_skeleton(1.0, {{0.1, 0.5}, {0.2, 0.5}}, 5.0, 0.1, grid);
  EXPECT_TRUE(ok.predicted_monotone);
  expect_predictions(ok);
}

TEST(Dam, PredictionsFollowRelease) {
  const auto grid = OrderedStateSpace::uniform(0.0, 5.0, 51);
  const JumpLaw jumps{{0.2, 1.0}};
  const auto linear = dam_skeleton([](double x) { return 0.8 * x; }, jumps, 1.0, 0.1, grid);
  EXPECT_TRUE(linear.predicted_monotone && linear.predicted_condition1);
  expect_predictions(linear);
  // Release that falls off at high levels breaks Condition 1.
  const auto humped = dam_skeleton([](double x) { return x < 2.0 ? 2.0 * x : 4.0 - 0.5 * (x - 2.0); }, jumps, 1.0, 0.1, grid);
  EXPECT_TRUE(humped.predicted_monotone);
  EXPECT_FALSE(humped.predicted_condition1);
  expect_predictions(humped);
  // Release so large the level overtakes itself.
  const auto steep = dam_skeleton([](double x) { return x > 2.0 ? 25.0 : 0.0; }, jumps, 1.0, 0.1, grid);
  EXPECT_FALSE(steep.predicted_monotone);
  expect_predictions(steep);
}

TEST(AbsorbedPoisson, RowsArePoissonAndAbsorbing) {
  const auto m = absorbed_poisson(1, 4, 2.0, 0.5, 3.0);
  EXPECT_EQ(m.kernel.space().front(), 1.0);
  EXPECT_EQ(m.kernel.space().back(), 4.0);
  EXPECT_EQ(m.horizon_steps, std::optional<std::size_t>(6));
  const double mu = 1.0;
  EXPECT_NEAR(m.kernel(0, 0), std::exp(-mu), 1e-15);
  EXPECT_NEAR(m.kernel(0, 1), mu * std::exp(-mu), 1e-15);
  EXPECT_NEAR(m.kernel(0, 3), 1.0 - std::exp(-mu) * (1.0 + mu + mu * mu / 2.0), 1e-15);
  EXPECT_DOUBLE_EQ(m.kernel(3, 3), 1.0);
  expect_predictions(m);
}

TEST(ConstantModel, IsIdentity) {
  const auto m = constant_model(OrderedStateSpace({-1.0, 0.5, 2.0}));
  EXPECT_TRUE(m.kernel.matrix().isIdentity());
  expect_predictions(m);
}
