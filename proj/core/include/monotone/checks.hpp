#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "monotone/kernel.hpp"

namespace monotone {

inline constexpr double kDefaultCheckTol = 1e-10;

using ScalarFn = std::function<double(double)>;
using BivariateFn = std::function<double(double, double)>;

enum class Property { StochMonotone, Condition1, Supermodular };

std::string to_string(Property p);

/// Smallest counterexample found by a structural check.
///
/// For the kernel checks, (x1, x2) is the consecutive state pair and
/// `threshold` the tail threshold y (for Condition 1, the shift y in
/// p(x, (x+y, inf))). For supermodularity, (x1, x2) and (threshold,
/// threshold_hi) are the corners of the violating square. `level` is set by
/// the generalized-inverse scans to the u at which G orders the wrong way.
struct Witness {
  double x1 = 0.0;
  double x2 = 0.0;
  double threshold = 0.0;
  double gap = 0.0;
  std::optional<double> threshold_hi;
  std::optional<double> level;
};

struct CheckReport {
  Property property = Property::StochMonotone;
  bool passed = true;
  std::optional<Witness> witness;
  double tolerance = kDefaultCheckTol;
};

/// p(x, (y, inf)) nondecreasing in x for every grid threshold y, tested on
/// consecutive state pairs with slack `tol`. Failing reports carry the
/// largest violation.
CheckReport check_stoch_monotone(const FiniteKernel& kernel,
                                 double tol = kDefaultCheckTol);

/// p(x, (x+y, inf)) nonincreasing in x for every real y. Tails are piecewise
/// constant in y, so y ranges over the finite set of differences s - x for
/// the two states of each consecutive pair.
CheckReport check_condition1(const FiniteKernel& kernel,
                             double tol = kDefaultCheckTol);

struct GinvReport {
  CheckReport monotone;    ///< G(x, u) nondecreasing in x
  CheckReport condition1;  ///< G(x, u) - x nonincreasing in x
};

/// Same two properties, decided through the generalized inverse instead of
/// tails. With slack `tol`, the scan tests G(x1, v - tol) <= G(x2, v) (resp.
/// G(x2, v - tol) - x2 <= G(x1, v) - x1) for v on a 1e-4 grid of (0,1]
/// joined with every CDF jump level, which is where violations first appear.
/// Verdicts coincide with check_stoch_monotone / check_condition1.
GinvReport check_ginv_monotone(const FiniteKernel& kernel,
                               double tol = kDefaultCheckTol);

/// 2x2 supermodularity inequality on every consecutive square of
/// grid_x x grid_y. Throws DomainError if h is not finite on the grid.
CheckReport check_supermodular(const BivariateFn& h, std::span<const double> grid_x,
                               std::span<const double> grid_y,
                               double tol = kDefaultCheckTol);

struct ClosureReport {
  CheckReport monotone;
  /// Present when every kernel in the sequence satisfies Condition 1.
  std::optional<CheckReport> condition1;
  double tol_budget = 0.0;
  bool passed() const noexcept {
    return monotone.passed && (!condition1 || condition1->passed);
  }
};

/// Composes the sequence and rechecks the product. The tolerance budget is
/// the sum of the members' row tolerances. Throws PreconditionError if some
/// member is not stochastically monotone (at `member_tol`).
ClosureReport check_closure(const KernelSequence& seq,
                            double member_tol = kDefaultCheckTol);

}  // namespace monotone
