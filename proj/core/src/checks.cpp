#include "monotone/checks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "monotone/errors.hpp"
#include "monotone/ginv.hpp"

namespace monotone {
namespace {

constexpr std::size_t kLevelGridSize = 10000;  // u-grid step 1e-4

// suffix[x*(n+1) + k] = p(x, {s_k, ..., s_{n-1}}), suffix[..n] = 0.
std::vector<double> suffix_sums(const FiniteKernel& kernel) {
  const std::size_t n = kernel.size();
  std::vector<double> out(n * (n + 1), 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    auto row = kernel.row(x);
    double acc = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      acc += row[k];
      out[x * (n + 1) + k] = acc;
    }
  }
  return out;
}

// Keeps the largest violation seen so far.
struct WorstViolation {
  std::optional<Witness> witness;
  void offer(const Witness& w) {
    if (!witness || w.gap > witness->gap) witness = w;
  }
};

CheckReport finish(Property property, double tol, WorstViolation worst) {
  CheckReport r;
  r.property = property;
  r.tolerance = tol;
  r.passed = !worst.witness.has_value();
  r.witness = std::move(worst.witness);
  return r;
}

// First index k with states[k] - x > y (differences within `slack` count as equal).
std::size_t first_above_shift(std::span<const double> states, double x, double y,
                              double slack) {
  auto it = std::upper_bound(states.begin(), states.end(), y,
                             [x, slack](double yy, double s) { return s - x > yy + slack; });
  return static_cast<std::size_t>(it - states.begin());
}

// Shifted CDF value F_x(x + y) read from a generalized-inverse table.
double shifted_cdf(const GeneralizedInverseTable& table, std::size_t xi, double y,
                   double slack) {
  auto states = table.space().states();
  const std::size_t k = first_above_shift(states, states[xi], y, slack);
  return k == 0 ? 0.0 : table.cdf(xi, k - 1);
}

std::vector<double> candidate_levels(const GeneralizedInverseTable& table,
                                     std::size_t jump_row) {
  std::vector<double> levels;
  levels.reserve(kLevelGridSize + table.size());
  for (std::size_t k = 1; k <= kLevelGridSize; ++k)
    levels.push_back(static_cast<double>(k) / static_cast<double>(kLevelGridSize));
  for (double f : table.cdf_row(jump_row))
    if (f > 0.0) levels.push_back(f);
  return levels;
}

}  // namespace

std::string to_string(Property p) {
  switch (p) {
    case Property::StochMonotone: return "stoch_monotone";
    case Property::Condition1: return "condition1";
    case Property::Supermodular: return "supermodular";
  }
  return "unknown";
}

CheckReport check_stoch_monotone(const FiniteKernel& kernel, double tol) {
  const std::size_t n = kernel.size();
  const auto states = kernel.space().states();
  const auto suffix = suffix_sums(kernel);
  WorstViolation worst;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double* lo = &suffix[i * (n + 1)];
    const double* hi = &suffix[(i + 1) * (n + 1)];
    // Tail above the threshold s_j is the suffix starting at j + 1.
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double gap = lo[j + 1] - hi[j + 1];
      if (gap > tol) worst.offer({states[i], states[i + 1], states[j], gap, {}, {}});
    }
  }
  return finish(Property::StochMonotone, tol, std::move(worst));
}

CheckReport check_condition1(const FiniteKernel& kernel, double tol) {
  const std::size_t n = kernel.size();
  const auto states = kernel.space().states();
  const double slack = kernel.space().difference_slack();
  const auto suffix = suffix_sums(kernel);
  auto shifted_tail = [&](std::size_t xi, double y) {
    return suffix[xi * (n + 1) + first_above_shift(states, states[xi], y, slack)];
  };

  WorstViolation worst;
  std::vector<double> shifts;
  shifts.reserve(2 * n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x1 = states[i];
    const double x2 = states[i + 1];
    shifts.clear();
    for (double s : states) {
      shifts.push_back(s - x1);
      shifts.push_back(s - x2);
    }
    for (double y : shifts) {
      const double gap = shifted_tail(i + 1, y) - shifted_tail(i, y);
      if (gap > tol) worst.offer({x1, x2, y, gap, {}, {}});
    }
  }
  return finish(Property::Condition1, tol, std::move(worst));
}

GinvReport check_ginv_monotone(const FiniteKernel& kernel, double tol) {
  const GeneralizedInverseTable table(kernel);
  const std::size_t n = kernel.size();
  const auto states = kernel.space().states();
  const double slack = kernel.space().difference_slack();

  WorstViolation mono;
  WorstViolation cond;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x1 = states[i];
    const double x2 = states[i + 1];

    for (double v : candidate_levels(table, i + 1)) {
      if (!(v - tol > 0.0)) continue;
      const std::size_t a = table.query_index(i, v - tol);
      const std::size_t b = table.query_index(i + 1, v);
      if (a > b) {
        const double gap = table.cdf(i + 1, b) - table.cdf(i, b);
        mono.offer({x1, x2, states[b], gap, {}, v});
      }
    }

    for (double v : candidate_levels(table, i)) {
      if (!(v - tol > 0.0)) continue;
      const std::size_t a = table.query_index(i + 1, v - tol);
      const std::size_t b = table.query_index(i, v);
      if ((states[a] - x2) - (states[b] - x1) > slack) {
        const double y = states[b] - x1;
        const double gap = shifted_cdf(table, i, y, slack) - shifted_cdf(table, i + 1, y, slack);
        cond.offer({x1, x2, y, gap, {}, v});
      }
    }
  }
  return {finish(Property::StochMonotone, tol, std::move(mono)),
          finish(Property::Condition1, tol, std::move(cond))};
}

CheckReport check_supermodular(const BivariateFn& h, std::span<const double> grid_x,
                               std::span<const double> grid_y, double tol) {
  const std::size_t nx = grid_x.size();
  const std::size_t ny = grid_y.size();
  std::vector<double> table(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = h(grid_x[i], grid_y[j]);
      if (!std::isfinite(v))
        throw DomainError("h is not finite at (" + std::to_string(grid_x[i]) + ", " +
                          std::to_string(grid_y[j]) + ")");
      table[i * ny + j] = v;
    }

  WorstViolation worst;
  for (std::size_t i = 0; i + 1 < nx; ++i)
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const double off = table[i * ny + j + 1] + table[(i + 1) * ny + j];
      const double on = table[i * ny + j] + table[(i + 1) * ny + j + 1];
      const double gap = off - on;
      if (gap > tol) worst.offer({grid_x[i], grid_x[i + 1], grid_y[j], gap, grid_y[j + 1], {}});
    }
  return finish(Property::Supermodular, tol, std::move(worst));
}

ClosureReport check_closure(const KernelSequence& seq, double member_tol) {
  bool all_condition1 = true;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (!check_stoch_monotone(seq[k], member_tol).passed)
      throw PreconditionError("check_closure: kernel " + std::to_string(k) +
                              " is not stochastically monotone");
    all_condition1 = all_condition1 && check_condition1(seq[k], member_tol).passed;
  }
  const FiniteKernel product = seq.product();
  ClosureReport report;
  report.tol_budget = product.row_tol();
  report.monotone = check_stoch_monotone(product, report.tol_budget);
  if (all_condition1) report.condition1 = check_condition1(product, report.tol_budget);
  return report;
}

}  // namespace monotone
