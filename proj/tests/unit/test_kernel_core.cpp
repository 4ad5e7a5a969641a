#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "monotone/errors.hpp"
#include "monotone/ginv.hpp"
#include "monotone/kernel.hpp"
#include "monotone/serialize.hpp"

using namespace monotone;

namespace {

FiniteKernel two_state() {
  Matrix m(2, 2);
  m << 0.9, 0.1, 0.2, 0.8;
  return FiniteKernel(OrderedStateSpace::integers(0, 1), m);
}

}  // namespace

TEST(OrderedStateSpace, RejectsUnsortedAndEmpty) {
  EXPECT_THROW(OrderedStateSpace({}), InvariantError);
  EXPECT_THROW(OrderedStateSpace({0.0, 0.0}), InvariantError);
  EXPECT_THROW(OrderedStateSpace({1.0, 0.5}), InvariantError);
  EXPECT_THROW(OrderedStateSpace({0.0, std::nan("")}), InvariantError);
  EXPECT_THROW(OrderedStateSpace({0.0, 1.0}, {"a"}), InvariantError);
}

TEST(OrderedStateSpace, IntegerAndUniformGrids) {
  const auto z = OrderedStateSpace::integers(-2, 2);
  ASSERT_EQ(z.size(), 5u);
  EXPECT_EQ(z.front(), -2.0);
  EXPECT_EQ(z.index_of(1.0), 3u);
  EXPECT_FALSE(z.find(0.5));
  EXPECT_THROW(z.index_of(0.5), DomainError);

  const auto u = OrderedStateSpace::uniform(0.0, 6.0, 400);
  EXPECT_EQ(u.size(), 400u);
  EXPECT_EQ(u.back(), 6.0);
}

TEST(FiniteKernel, ValidatesShapeAndRows) {
  const auto s = OrderedStateSpace::integers(0, 1);
  Matrix bad_shape(2, 3);
  bad_shape.setConstant(1.0 / 3.0);
  EXPECT_THROW(FiniteKernel(s, bad_shape), ShapeError);

  Matrix negative(2, 2);
  negative << 1.1, -0.1, 0.5, 0.5;
  EXPECT_THROW(FiniteKernel(s, negative), InvariantError);

  Matrix short_row(2, 2);
  short_row << 0.5, 0.4, 0.5, 0.5;
  EXPECT_THROW(FiniteKernel(s, short_row), InvariantError);

  EXPECT_THROW(FiniteKernel(s, Matrix::Identity(2, 2), 1e-12, 0.0), InvariantError);
}

TEST(FiniteKernel, RenormalizesWithinTolerance) {
  Matrix m(2, 2);
  m << 0.5 + 4e-13, 0.5, -1e-13, 1.0;
  FiniteKernel k(OrderedStateSpace::integers(0, 1), m);
  EXPECT_EQ(k(1, 0), 0.0);
  EXPECT_NEAR(k.matrix().row(0).sum(), 1.0, 4e-16);
}

TEST(Compose, TwoStepOracle) {
  const auto k = two_state();
  const auto kk = compose(k, k);
  EXPECT_NEAR(kk(0, 0), 0.83, 1e-15);
  EXPECT_NEAR(kk(0, 1), 0.17, 1e-15);
  EXPECT_NEAR(kk(1, 0), 0.34, 1e-15);
  EXPECT_NEAR(kk(1, 1), 0.66, 1e-15);
  EXPECT_DOUBLE_EQ(kk.time_step(), 2.0);
}

TEST(Compose, RejectsMismatchedSpaces) {
  const auto k = two_state();
  const auto other = FiniteKernel::identity(OrderedStateSpace::integers(0, 2));
  EXPECT_THROW(compose(k, other), ShapeError);
  EXPECT_THROW(KernelSequence({k, other}), ShapeError);
  EXPECT_THROW(KernelSequence({}), InvariantError);
}

TEST(NStep, ZeroIsIdentityAndPowersAgree) {
  const auto k = two_state();
  EXPECT_TRUE(n_step(k, 0).matrix().isApprox(Matrix::Identity(2, 2)));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = gen::any_kernel(rng, 6);
    Matrix p = Matrix::Identity(6, 6);
    for (int n = 1; n <= 5; ++n) {
      p = p * a.matrix();
      EXPECT_LT((n_step(a, static_cast<std::size_t>(n)).matrix() - p).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(KernelSequence, ProductComposesInOrder) {
  std::mt19937_64 rng(5);
  const auto a = gen::any_kernel(rng, 4);
  const auto b = gen::any_kernel(rng, 4);
  const auto c = gen::any_kernel(rng, 4);
  KernelSequence seq({a, b, c});
  const Matrix expect = a.matrix() * b.matrix() * c.matrix();
  EXPECT_LT((seq.product().matrix() - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Ginv, GaloisPropertyOnRandomKernels) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = gen::any_kernel(rng, 1 + gen::index(rng, 0, 9), 0.4);
    const auto table = build_ginv(k);
    const auto& s = k.space();
    for (int q = 0; q < 200; ++q) {
      const std::size_t x = gen::index(rng, 0, s.size() - 1);
      const double u = q == 0 ? 1.0 : gen::uniform(rng, 1e-9, 1.0);
      const double g = ginv_query(table, s[x], u);
      for (std::size_t y = 0; y < s.size(); ++y)
        ASSERT_EQ(g <= s[y], u <= table.cdf(x, y)) << "trial " << trial << " x " << x << " u " << u;
    }
  }
}

TEST(Ginv, DomainErrors) {
  const auto table = build_ginv(two_state());
  EXPECT_THROW(ginv_query(table, 0.0, 0.0), DomainError);
  EXPECT_THROW(ginv_query(table, 0.0, 1.5), DomainError);
  EXPECT_THROW(ginv_query(table, 0.5, 0.5), DomainError);
  EXPECT_EQ(ginv_query(table, 0.0, 1.0), 1.0);
  EXPECT_EQ(ginv_query(table, 0.0, 0.9), 0.0);
  EXPECT_EQ(ginv_query(table, 0.0, 0.9000001), 1.0);
}

TEST(Ginv, UOneSkipsTrailingZeroMass) {
  Matrix m(3, 3);
  m << 0.3, 0.7, 0.0, 0.1 + 0.2, 0.7, 0.0, 0.0, 0.0, 1.0;
  const auto table = build_ginv(FiniteKernel(OrderedStateSpace::integers(0, 2), m));
  EXPECT_EQ(ginv_query(table, 0.0, 1.0), 1.0);
  EXPECT_EQ(ginv_query(table, 1.0, 1.0), 1.0);
}

TEST(Ginv, InverseTransformSamplingMatchesRow) {
  // Chi-square goodness of fit of G(x, U) against row x.
  std::mt19937_64 rng(99);
  const auto k = gen::any_kernel(rng, 6, 0.0);
  const auto table = build_ginv(k);
  const std::size_t n = 200000;
  std::vector<double> counts(6, 0.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double u = u01(rng);
    if (u == 0.0) u = 1.0;
    counts[table.query_index(2, u)] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t y = 0; y < 6; ++y) {
    const double e = static_cast<double>(n) * k(2, y);
    chi2 += (counts[y] - e) * (counts[y] - e) / e;
  }
  // 5 degrees of freedom; 99.9% quantile is 20.5.
  EXPECT_LT(chi2, 20.5);
}

TEST(Serialize, KernelRoundTripRevalidates) {
  std::mt19937_64 rng(3);
  const auto k = gen::any_kernel(rng, 5);
  const auto j = kernel_to_json(k);
  const auto back = kernel_from_json(j);
  EXPECT_EQ(back.matrix(), k.matrix());
  EXPECT_EQ(back.space(), k.space());

  auto broken = j;
  broken["rows"][1][2] = 5.0;
  EXPECT_THROW(kernel_from_json(broken), InvariantError);
  broken = j;
  broken["states"][0] = 10.0;
  EXPECT_THROW(kernel_from_json(broken), InvariantError);
  broken = j;
  broken["rows"].erase(0);
  EXPECT_THROW(kernel_from_json(broken), ShapeError);
  EXPECT_THROW(kernel_from_json(Json::object()), ShapeError);
}

TEST(Serialize, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    const auto s = format_number(x);
    EXPECT_EQ(std::stod(s), x) << s;
  }
}
