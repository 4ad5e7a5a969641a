#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "monotone/checks.hpp"
#include "monotone/curve.hpp"
#include "monotone/distribution.hpp"
#include "monotone/kernel.hpp"

namespace monotone {

/// Closed communicating classes of the transition graph, each as sorted state
/// indices, ordered by smallest member.
std::vector<std::vector<std::size_t>> closed_classes(const FiniteKernel& kernel);

/// Invariant distribution pi with ||pi P - pi||_inf <= tol.
///
/// Each closed class is solved directly (dense LU on the class's balance
/// equations with one row replaced by the normalization). With several
/// closed classes the result is their equal-weight mixture and is marked
/// non-unique. Throws NumericalError if the residual exceeds tol.
Distribution stationary(const FiniteKernel& kernel, double tol = 1e-10);

/// Cov(f1(X_0), f2(X_t)) for X_0 ~ init, t = 0..t_max steps.
Curve covariance_curve(const FiniteKernel& kernel, const Distribution& init,
                       const ScalarFn& f1, const ScalarFn& f2, std::size_t t_max);

/// E h(X_0, X_t) for X_0 ~ init.
Curve supermod_curve(const FiniteKernel& kernel, const Distribution& init,
                     const BivariateFn& h, std::size_t t_max);

/// supermod_curve for several h sharing one pass over the joint laws.
std::vector<Curve> supermod_curves(const FiniteKernel& kernel, const Distribution& init,
                                   std::span<const BivariateFn> hs, std::size_t t_max);

/// E h(X_0, X_t - X_{t+s}) for X_0 ~ init.
Curve difference_curve(const FiniteKernel& kernel, const Distribution& init,
                       const BivariateFn& h, std::size_t s, std::size_t t_max);

/// difference_curve for every (s, h) pair; result index is [si * hs.size() + hi].
std::vector<Curve> difference_curves(const FiniteKernel& kernel, const Distribution& init,
                                     std::span<const BivariateFn> hs,
                                     std::span<const std::size_t> lags, std::size_t t_max);

struct InequalityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double tol = 1e-12) const noexcept { return lhs <= rhs + tol; }
};

/// lhs = E h(X_0, X_2), rhs = E h(X_1, X_2) for X_0 ~ pi_1 (invariant for p1),
/// X_1 ~ p1(X_0, .), X_2 ~ p2(X_1, .). For stochastically monotone p1, p2 and
/// supermodular h, lhs <= rhs.
InequalityResult three_point_check(const FiniteKernel& p1, const FiniteKernel& p2,
                                   const BivariateFn& h);

/// lhs = E h(X_0, X_2 - X_3), rhs = E h(X_1, X_2 - X_3) along p1, p2, p3 with
/// X_0 ~ pi_1. Ordered when all kernels are monotone and satisfy Condition 1.
InequalityResult four_point_check(const FiniteKernel& p1, const FiniteKernel& p2,
                                  const FiniteKernel& p3, const BivariateFn& h);

/// E_{x0} X_t. Requires the kernel to be stochastically monotone and row x0
/// to put no mass below x0, which makes X_0 <= X_t for all t; throws
/// PreconditionError otherwise.
Curve transient_mean_curve(const FiniteKernel& kernel, double x0, std::size_t t_max);

/// Var_{x0}(X_t) under the same precondition. No shape is implied.
Curve transient_variance_curve(const FiniteKernel& kernel, double x0, std::size_t t_max);

/// s -> E_{x0} h(X_s, X_t) for s = 0..t (times are s in physical units).
Curve transient_supermod_profile(const FiniteKernel& kernel, double x0,
                                 const BivariateFn& h, std::size_t t);

}  // namespace monotone
