#include "monotone/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "monotone/errors.hpp"

namespace monotone {
namespace {

std::vector<double> times_for(const FiniteKernel& kernel, std::size_t t_max) {
  std::vector<double> t(t_max + 1);
  for (std::size_t k = 0; k <= t_max; ++k) t[k] = static_cast<double>(k) * kernel.time_step();
  return t;
}

void require_same_space(const FiniteKernel& kernel, const Distribution& init) {
  if (!(kernel.space() == init.space()))
    throw ShapeError("initial distribution and kernel live on different state spaces");
}

Vector tabulate(const OrderedStateSpace& space, const ScalarFn& f) {
  Vector v(static_cast<Eigen::Index>(space.size()));
  for (std::size_t i = 0; i < space.size(); ++i) v(static_cast<Eigen::Index>(i)) = f(space[i]);
  return v;
}

std::vector<std::size_t> support(const Distribution& d) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d.space().size(); ++i)
    if (d[i] > 0.0) idx.push_back(i);
  return idx;
}

// Rows of diag(init) restricted to init's support.
Matrix weighted_start(const Distribution& init, std::span<const std::size_t> rows) {
  const auto n = static_cast<Eigen::Index>(init.space().size());
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(rows[r])) = init[rows[r]];
  return m;
}

// H(r, y) = h(s_{rows[r]}, s_y).
Matrix tabulate_pairs(const OrderedStateSpace& space, std::span<const std::size_t> rows,
                      const BivariateFn& h) {
  const std::size_t n = space.size();
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t y = 0; y < n; ++y)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(y)) = h(space[rows[r]], space[y]);
  return out;
}

// K(r, y) = sum_z P(y, z) h(s_{rows[r]}, s_y - s_z).
Matrix difference_table(const OrderedStateSpace& space, const Matrix& step,
                        std::span<const std::size_t> rows, const BivariateFn& h) {
  const std::size_t n = space.size();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double x = space[rows[r]];
    for (std::size_t y = 0; y < n; ++y) {
      double acc = 0.0;
      for (std::size_t z = 0; z < n; ++z) {
        const double p = step(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(z));
        if (p != 0.0) acc += p * h(x, space[y] - space[z]);
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(y)) = acc;
    }
  }
  return out;
}

Matrix matrix_power(const Matrix& p, std::size_t k) {
  Matrix out = Matrix::Identity(p.rows(), p.cols());
  for (std::size_t i = 0; i < k; ++i) out = out * p;
  return out;
}

std::size_t require_transient_start(const FiniteKernel& kernel, double x0) {
  const std::size_t i0 = kernel.space().index_of(x0);
  double below = 0.0;
  for (std::size_t j = 0; j < i0; ++j) below += kernel(i0, j);
  if (below > 0.0)
    throw PreconditionError("row at x0 = " + std::to_string(x0) + " puts mass " +
                            std::to_string(below) + " below x0, so X_0 <= X_t is not guaranteed");
  const auto report = check_stoch_monotone(kernel);
  if (!report.passed)
    throw PreconditionError("kernel is not stochastically monotone (gap " +
                            std::to_string(report.witness->gap) + ")");
  return i0;
}

}  // namespace

std::vector<std::vector<std::size_t>> closed_classes(const FiniteKernel& kernel) {
  const std::size_t n = kernel.size();
  const auto& p = kernel.matrix();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  // Iterative Tarjan.
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next neighbor)
  std::size_t counter = 0, ncomp = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      bool descended = false;
      while (next < n) {
        const std::size_t w = next++;
        if (p(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) <= 0.0) continue;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const std::size_t v_done = v;
      if (low[v_done] == index[v_done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
        } while (w != v_done);
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[v_done]);
      }
    }
  }

  std::vector<bool> leaks(ncomp, false);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w)
      if (p(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) > 0.0 && comp[v] != comp[w])
        leaks[comp[v]] = true;

  std::vector<std::vector<std::size_t>> classes(ncomp);
  for (std::size_t v = 0; v < n; ++v)
    if (!leaks[comp[v]]) classes[comp[v]].push_back(v);
  std::erase_if(classes, [](const auto& c) { return c.empty(); });
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return classes;
}

Distribution stationary(const FiniteKernel& kernel, double tol) {
  const std::size_t n = kernel.size();
  const auto classes = closed_classes(kernel);
  std::vector<double> mass(n, 0.0);
  const double weight = 1.0 / static_cast<double>(classes.size());

  for (const auto& cls : classes) {
    const auto m = static_cast<Eigen::Index>(cls.size());
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        a(i, j) = kernel(cls[static_cast<std::size_t>(j)], cls[static_cast<std::size_t>(i)]) -
                  (i == j ? 1.0 : 0.0);
    a.row(m - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;
    Eigen::VectorXd pi = a.partialPivLu().solve(b);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (pi(i) < 0.0) {
        if (pi(i) < -tol)
          throw NumericalError("stationary solve produced negative mass " +
                                   std::to_string(pi(i)),
                               -pi(i));
        pi(i) = 0.0;
      }
      sum += pi(i);
    }
    for (Eigen::Index i = 0; i < m; ++i)
      mass[cls[static_cast<std::size_t>(i)]] = weight * pi(i) / sum;
  }

  Distribution result(kernel.shared_space(), std::move(mass), 1e-12);
  const double residual = result.invariance_residual(kernel);
  if (!(residual <= tol))
    throw NumericalError("stationary residual " + std::to_string(residual) +
                             " exceeds tolerance",
                         residual);
  if (classes.size() > 1) {
    result.unique_ = false;
    result.note_ = std::to_string(classes.size()) +
                   " closed classes; equal-weight mixture of their invariant laws";
  }
  return result;
}

Curve covariance_curve(const FiniteKernel& kernel, const Distribution& init,
                       const ScalarFn& f1, const ScalarFn& f2, std::size_t t_max) {
  require_same_space(kernel, init);
  const Vector a = tabulate(kernel.space(), f1);
  Vector g = tabulate(kernel.space(), f2);
  Eigen::Map<const Vector> mu(init.mass().data(), static_cast<Eigen::Index>(init.mass().size()));
  const double mean_f1 = mu.dot(a);
  const Vector weighted = mu.cwiseProduct(a);

  std::vector<double> values(t_max + 1);
  for (std::size_t t = 0; t <= t_max; ++t) {
    // g = P^t f2, so E f2(X_t) = mu . g and E f1(X_0) f2(X_t) = (mu * f1) . g.
    values[t] = weighted.dot(g) - mean_f1 * mu.dot(g);
    if (t < t_max) g = kernel.matrix() * g;
  }
  return Curve(times_for(kernel, t_max), std::move(values), "exact covariance");
}

std::vector<Curve> supermod_curves(const FiniteKernel& kernel, const Distribution& init,
                                   std::span<const BivariateFn> hs, std::size_t t_max) {
  require_same_space(kernel, init);
  const auto rows = support(init);
  std::vector<Matrix> tables;
  tables.reserve(hs.size());
  for (const auto& h : hs) tables.push_back(tabulate_pairs(kernel.space(), rows, h));

  std::vector<std::vector<double>> values(hs.size(), std::vector<double>(t_max + 1));
  Matrix joint = weighted_start(init, rows);
  for (std::size_t t = 0; t <= t_max; ++t) {
    for (std::size_t k = 0; k < hs.size(); ++k)
      values[k][t] = joint.cwiseProduct(tables[k]).sum();
    if (t < t_max) joint = joint * kernel.matrix();
  }

  std::vector<Curve> out;
  out.reserve(hs.size());
  for (auto& v : values)
    out.emplace_back(times_for(kernel, t_max), std::move(v), "exact E h(X_0, X_t)");
  return out;
}

Curve supermod_curve(const FiniteKernel& kernel, const Distribution& init,
                     const BivariateFn& h, std::size_t t_max) {
  return std::move(supermod_curves(kernel, init, std::span(&h, 1), t_max).front());
}

std::vector<Curve> difference_curves(const FiniteKernel& kernel, const Distribution& init,
                                     std::span<const BivariateFn> hs,
                                     std::span<const std::size_t> lags, std::size_t t_max) {
  require_same_space(kernel, init);
  for (std::size_t s : lags)
    if (s == 0) throw DomainError("difference lag s must be positive");
  const auto rows = support(init);

  std::vector<Matrix> tables;
  tables.reserve(lags.size() * hs.size());
  for (std::size_t s : lags) {
    const Matrix step = matrix_power(kernel.matrix(), s);
    for (const auto& h : hs) tables.push_back(difference_table(kernel.space(), step, rows, h));
  }

  std::vector<std::vector<double>> values(tables.size(), std::vector<double>(t_max + 1));
  Matrix joint = weighted_start(init, rows);
  for (std::size_t t = 0; t <= t_max; ++t) {
    for (std::size_t k = 0; k < tables.size(); ++k)
      values[k][t] = joint.cwiseProduct(tables[k]).sum();
    if (t < t_max) joint = joint * kernel.matrix();
  }

  std::vector<Curve> out;
  out.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    out.emplace_back(times_for(kernel, t_max), std::move(values[k]),
                     "exact E h(X_0, X_t - X_{t+s}), s=" +
                         std::to_string(lags[k / std::max<std::size_t>(hs.size(), 1)]));
  return out;
}

Curve difference_curve(const FiniteKernel& kernel, const Distribution& init,
                       const BivariateFn& h, std::size_t s, std::size_t t_max) {
  return std::move(difference_curves(kernel, init, std::span(&h, 1), std::span(&s, 1), t_max)
                       .front());
}

InequalityResult three_point_check(const FiniteKernel& p1, const FiniteKernel& p2,
                                   const BivariateFn& h) {
  if (!p1.same_space(p2)) throw ShapeError("three_point_check: kernels on different spaces");
  const Distribution pi = stationary(p1);
  const auto& space = p1.space();
  const std::size_t n = space.size();
  const Matrix two_step = p1.matrix() * p2.matrix();
  InequalityResult r;
  for (std::size_t x = 0; x < n; ++x) {
    if (pi[x] == 0.0) continue;
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t z = 0; z < n; ++z) {
      const double hz = h(space[x], space[z]);
      lhs += two_step(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(z)) * hz;
      rhs += p2(x, z) * hz;
    }
    r.lhs += pi[x] * lhs;
    r.rhs += pi[x] * rhs;
  }
  return r;
}

InequalityResult four_point_check(const FiniteKernel& p1, const FiniteKernel& p2,
                                  const FiniteKernel& p3, const BivariateFn& h) {
  if (!p1.same_space(p2) || !p1.same_space(p3))
    throw ShapeError("four_point_check: kernels on different spaces");
  const Distribution pi = stationary(p1);
  const auto rows = support(pi);
  const Matrix k = difference_table(p1.space(), p3.matrix(), rows, h);
  const Matrix two_step = p1.matrix() * p2.matrix();
  InequalityResult r;
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const auto x = static_cast<Eigen::Index>(rows[ri]);
    const auto row = static_cast<Eigen::Index>(ri);
    r.lhs += pi[rows[ri]] * two_step.row(x).dot(k.row(row));
    r.rhs += pi[rows[ri]] * p2.matrix().row(x).dot(k.row(row));
  }
  return r;
}

Curve transient_mean_curve(const FiniteKernel& kernel, double x0, std::size_t t_max) {
  const std::size_t i0 = require_transient_start(kernel, x0);
  const Vector s = tabulate(kernel.space(), [](double x) { return x; });
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(kernel.size()));
  mu(static_cast<Eigen::Index>(i0)) = 1.0;
  std::vector<double> values(t_max + 1);
  for (std::size_t t = 0; t <= t_max; ++t) {
    values[t] = mu.dot(s.transpose());
    if (t < t_max) mu = mu * kernel.matrix();
  }
  return Curve(times_for(kernel, t_max), std::move(values), "exact E_x0 X_t");
}

Curve transient_variance_curve(const FiniteKernel& kernel, double x0, std::size_t t_max) {
  const std::size_t i0 = require_transient_start(kernel, x0);
  const Vector s = tabulate(kernel.space(), [](double x) { return x; });
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(kernel.size()));
  mu(static_cast<Eigen::Index>(i0)) = 1.0;
  std::vector<double> values(t_max + 1);
  for (std::size_t t = 0; t <= t_max; ++t) {
    const double m = mu.dot(s.transpose());
    double var = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) var += mu(i) * (s(i) - m) * (s(i) - m);
    values[t] = var;
    if (t < t_max) mu = mu * kernel.matrix();
  }
  return Curve(times_for(kernel, t_max), std::move(values), "exact Var_x0 X_t");
}

Curve transient_supermod_profile(const FiniteKernel& kernel, double x0,
                                 const BivariateFn& h, std::size_t t) {
  const std::size_t i0 = require_transient_start(kernel, x0);
  const std::size_t n = kernel.size();
  const auto& space = kernel.space();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  const Matrix table = tabulate_pairs(space, all, h);

  // powers[k] = P^k for k = 0..t.
  std::vector<Matrix> powers{Matrix::Identity(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n))};
  for (std::size_t k = 1; k <= t; ++k) powers.push_back(powers.back() * kernel.matrix());

  std::vector<double> values(t + 1);
  const auto start = static_cast<Eigen::Index>(i0);
  for (std::size_t s = 0; s <= t; ++s) {
    // Law of X_s from x0, then pair (X_s, X_t) via P^{t-s}.
    const Eigen::RowVectorXd mu = powers[s].row(start);
    double acc = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const double w = mu(static_cast<Eigen::Index>(a));
      if (w == 0.0) continue;
      acc += w * powers[t - s].row(static_cast<Eigen::Index>(a))
                     .dot(table.row(static_cast<Eigen::Index>(a)));
    }
    values[s] = acc;
  }
  return Curve(times_for(kernel, t), std::move(values), "exact E_x0 h(X_s, X_t) over s");
}

}  // namespace monotone
