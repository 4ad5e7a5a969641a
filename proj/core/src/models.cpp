#include "monotone/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "monotone/errors.hpp"
#include "monotone/exact.hpp"
#include "monotone/rng.hpp"
#include "monotone/uniformize.hpp"

namespace monotone {
namespace {

void validate_law(const IntegerLaw& law) {
  if (law.empty()) throw InvariantError("increment law is empty");
  double total = 0.0;
  for (const auto& [v, w] : law) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InvariantError("increment probability must be finite and >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvariantError("increment law sums to " + std::to_string(total));
}

ModelKernel clamped_walk(const IntegerLaw& increments, long top, bool report_top,
                         std::string name) {
  validate_law(increments);
  if (top < 0) throw DomainError("max_state must be >= 0");
  const auto n = static_cast<std::size_t>(top + 1);
  Matrix rows = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  double worst = 0.0;
  for (long x = 0; x <= top; ++x) {
    double over = 0.0;
    for (const auto& [y, w] : increments) {
      const long target = x + y;
      if (target > top) over += w;
      rows(x, std::clamp(target, 0L, top)) += w;
    }
    worst = std::max(worst, over);
  }
  ModelKernel m{std::move(name), FiniteKernel(OrderedStateSpace::integers(0, top), std::move(rows))};
  if (report_top) {
    m.truncation_mass = worst;
    if (worst > 0.0)
      m.note = "mass beyond max_state is clamped onto it (largest row mass " +
               std::to_string(worst) + ")";
  }
  return m;
}

bool is_nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

bool is_nondecreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) return false;
  return true;
}

void validate_bd(const BirthDeathSpec& spec) {
  if (spec.lambdas.empty() || spec.lambdas.size() != spec.mus.size())
    throw InvariantError("birth and death rate vectors must be nonempty and equally long");
  for (std::size_t i = 0; i < spec.lambdas.size(); ++i)
    if (!(spec.lambdas[i] >= 0.0) || !(spec.mus[i] >= 0.0) || !std::isfinite(spec.lambdas[i]) ||
        !std::isfinite(spec.mus[i]))
      throw InvariantError("rates at state " + std::to_string(i) + " must be finite and >= 0");
  if (spec.mus[0] != 0.0) throw InvariantError("death rate at state 0 must be 0");
}

Matrix bd_generator(const std::vector<double>& lambdas, const std::vector<double>& mus) {
  const auto n = static_cast<Eigen::Index>(lambdas.size());
  Matrix q = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (i + 1 < n) q(i, i + 1) = lambdas[k];
    if (i > 0) q(i, i - 1) = mus[k];
    q(i, i) = -(q.row(i).sum());
  }
  return q;
}

std::vector<double> poisson_weights(double mean, double tail_tol, double* dropped) {
  std::vector<double> w{std::exp(-mean)};
  double covered = w.front();
  for (std::size_t k = 1; 1.0 - covered > tail_tol || static_cast<double>(k) <= mean; ++k) {
    w.push_back(w.back() * mean / static_cast<double>(k));
    covered += w.back();
    if (w.back() < tail_tol * 1e-3 && static_cast<double>(k) > mean) break;
  }
  if (dropped) *dropped = std::max(0.0, 1.0 - covered);
  return w;
}

// Law of J(dt) for a compound Poisson process; mass of the dropped Poisson
// tail is returned separately.
std::map<double, double> compound_poisson(const JumpLaw& jumps, double mean_count,
                                          double* dropped) {
  std::map<double, double> out;
  if (mean_count == 0.0) {
    out[0.0] = 1.0;
    *dropped = 0.0;
    return out;
  }
  const auto weights = poisson_weights(mean_count, 1e-15, dropped);
  std::map<double, double> sum{{0.0, 1.0}};
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (const auto& [v, p] : sum) out[v] += weights[k] * p;
    std::map<double, double> next;
    for (const auto& [v, p] : sum)
      for (const auto& [j, q] : jumps) next[v + j] += p * q;
    sum = std::move(next);
  }
  return out;
}

double uniform_spacing(const OrderedStateSpace& grid) {
  if (grid.size() < 2) throw DomainError("grid needs at least two states");
  const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double expected = grid.front() + static_cast<double>(i) * h;
    if (std::abs(grid[i] - expected) > 1e-9 * std::max(1.0, std::abs(grid[i])))
      throw DomainError("grid must be uniformly spaced");
  }
  return h;
}

void validate_jumps(const JumpLaw& jumps, double jump_rate, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(jump_rate >= 0.0) || !std::isfinite(jump_rate))
    throw DomainError("jump_rate must be finite and >= 0");
  if (jump_rate > 0.0 && jumps.empty()) throw InvariantError("jump law is empty");
  double total = 0.0;
  for (const auto& [v, w] : jumps) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvariantError("jump sizes must be >= 0");
    if (!(w >= 0.0)) throw InvariantError("jump probabilities must be >= 0");
    total += w;
  }
  if (jump_rate > 0.0 && std::abs(total - 1.0) > 1e-12)
    throw InvariantError("jump law sums to " + std::to_string(total));
}

// Row i: law of round(drift[i] + J) on the uniform grid, clamped to its ends.
// Clamping at the bottom counts as truncation unless `floor_is_boundary`.
ModelKernel rounded_jump_kernel(std::string name, const std::vector<double>& drift,
                                const JumpLaw& jumps, double jump_rate, double dt,
                                const OrderedStateSpace& grid, bool floor_is_boundary = false) {
  const double h = uniform_spacing(grid);
  double dropped = 0.0;
  const auto law = compound_poisson(jumps, jump_rate * dt, &dropped);
  const std::size_t n = grid.size();
  const long top = static_cast<long>(n) - 1;
  Matrix rows = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> over(n, dropped);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [v, w] : law) {
      const long idx = static_cast<long>(std::floor((drift[i] + v - grid.front()) / h + 0.5));
      if (idx > top || (idx < 0 && !floor_is_boundary)) over[i] += w;
      rows(static_cast<Eigen::Index>(i), std::clamp(idx, 0L, top)) += w;
    }
    rows(static_cast<Eigen::Index>(i), top) += dropped;
  }
  FiniteKernel kernel(grid, std::move(rows), 1e-12, dt);
  const Distribution pi = stationary(kernel);
  double weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) weighted += pi[i] * over[i];
  if (weighted > 1e-6)
    throw TruncationError("stationary mass clamped at the grid ends is " +
                          std::to_string(weighted) + " (> 1e-6); extend the grid");
  ModelKernel m{std::move(name), std::move(kernel)};
  m.truncation_mass = *std::max_element(over.begin(), over.end());
  m.note = "stationary-weighted grid overflow " + std::to_string(weighted);
  return m;
}

}  // namespace

ModelKernel reflected_walk(const IntegerLaw& increments, long max_state) {
  return clamped_walk(increments, max_state, true, "reflected_walk");
}

ModelKernel two_sided_reflected_walk(const IntegerLaw& increments, long b) {
  if (b < 1) throw DomainError("two-sided reflection needs b >= 1");
  return clamped_walk(increments, b, false, "two_sided_reflected_walk");
}

ModelKernel state_dependent_walk(const WalkSpec& spec) {
  const std::size_t n = spec.p.size();
  if (n == 0 || spec.q.size() != n || spec.r.size() != n)
    throw InvariantError("p, q, r must be nonempty and equally long");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(spec.p[i] >= 0.0) || !(spec.q[i] >= 0.0) || !(spec.r[i] >= 0.0))
      throw InvariantError("walk probabilities at state " + std::to_string(i) +
                           " must be >= 0");
    if (std::abs(spec.p[i] + spec.q[i] + spec.r[i] - 1.0) > 1e-12)
      throw InvariantError("p + q + r != 1 at state " + std::to_string(i));
  }
  if (spec.q[0] != 0.0) throw InvariantError("q at state 0 must be 0");

  std::vector<double> p = spec.p;
  const double folded = p.back();
  p.back() = 0.0;
  const auto last = static_cast<Eigen::Index>(n - 1);
  Matrix rows = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i <= last; ++i) {
    const auto k = static_cast<std::size_t>(i);
    rows(i, i) = spec.r[k] + (i == last ? folded : 0.0);
    if (i < last) rows(i, i + 1) = p[k];
    if (i > 0) rows(i, i - 1) = spec.q[k];
  }

  ModelKernel m{"state_dependent_walk",
                FiniteKernel(OrderedStateSpace::integers(0, static_cast<long>(n) - 1),
                             std::move(rows))};
  for (std::size_t i = 1; i < n; ++i)
    if (p[i - 1] > 1.0 - spec.q[i] + kDefaultRowTol) m.predicted_monotone = false;
  m.predicted_condition1 = is_nondecreasing(spec.q) && is_nonincreasing(p);
  m.truncation_mass = folded;
  if (folded > 0.0) m.note = "up-probability at the top state folded into staying";
  return m;
}

ModelKernel birth_death_skeleton(const BirthDeathSpec& spec, double t, double trunc_tol) {
  validate_bd(spec);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("skeleton time must be positive");
  if (!(trunc_tol > 0.0)) throw DomainError("trunc_tol must be positive");
  const std::size_t n = spec.lambdas.size();
  std::vector<double> lambdas = spec.lambdas;
  const double dropped = lambdas.back();
  lambdas.back() = 0.0;

  const Matrix q = bd_generator(lambdas, spec.mus);
  // Rate large enough that I + Q/rate is itself monotone with Condition 1
  // whenever the rates allow it.
  double rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rate = std::max(rate, lambdas[i] + spec.mus[i]);
    if (i > 0) rate = std::max(rate, lambdas[i - 1] + spec.mus[i]);
  }

  ModelKernel m{"birth_death_skeleton",
                FiniteKernel(OrderedStateSpace::integers(0, static_cast<long>(n) - 1),
                             uniformize(q, t, trunc_tol, rate), kDefaultRowTol, t)};
  m.predicted_monotone = true;
  m.predicted_condition1 = is_nonincreasing(lambdas) && is_nondecreasing(spec.mus);
  std::string note = spec.truncation_note;
  if (rate == 0.0) note += (note.empty() ? "" : "; ") + std::string("zero generator: identity kernel");
  if (dropped > 0.0)
    note += (note.empty() ? "" : "; ") + std::string("birth rate at the top state dropped (") +
            std::to_string(dropped) + ")";
  m.note = note;
  return m;
}

JointBDGenerator::JointBDGenerator(const BirthDeathSpec& spec1, const BirthDeathSpec& spec2) {
  validate_bd(spec1);
  validate_bd(spec2);
  if (spec1.lambdas.size() != spec2.lambdas.size())
    throw ShapeError("coupled birth-death specs must have the same number of states");
  const std::size_t n = spec1.lambdas.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (spec1.lambdas[i] > spec2.lambdas[i])
      throw OrderingError("lambda1 > lambda2 at index " + std::to_string(i));
    if (spec1.mus[i] < spec2.mus[i])
      throw OrderingError("mu1 < mu2 at index " + std::to_string(i));
  }
  top_ = n - 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs_.emplace_back(i, j);

  const auto& l1 = spec1.lambdas;
  const auto& l2 = spec2.lambdas;
  const auto& m1 = spec1.mus;
  const auto& m2 = spec2.mus;
  moves_.resize(pairs_.size());
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    const auto [i, j] = pairs_[k];
    auto& mv = moves_[k];
    if (i < j) {
      mv.push_back({+1, 0, l1[i]});
      if (i > 0) mv.push_back({-1, 0, m1[i]});
      if (j < top_) mv.push_back({0, +1, l2[j]});
      mv.push_back({0, -1, m2[j]});
    } else {
      if (i < top_) {
        mv.push_back({+1, +1, l1[i]});
        mv.push_back({0, +1, l2[i] - l1[i]});
      }
      if (i > 0) {
        mv.push_back({-1, -1, m2[i]});
        mv.push_back({-1, 0, m1[i] - m2[i]});
      }
    }
    std::erase_if(mv, [](const Move& m) { return m.rate == 0.0; });
  }

  const auto size = static_cast<Eigen::Index>(pairs_.size());
  q_ = Matrix::Zero(size, size);
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    const auto [i, j] = pairs_[k];
    double out = 0.0;
    for (const auto& m : moves_[k]) {
      const auto target = index(static_cast<std::size_t>(static_cast<long>(i) + m.di),
                                static_cast<std::size_t>(static_cast<long>(j) + m.dj));
      q_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(target)) += m.rate;
      out += m.rate;
    }
    q_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = -out;
  }
}

std::size_t JointBDGenerator::index(std::size_t i, std::size_t j) const {
  if (i > j || j > top_)
    throw DomainError("(" + std::to_string(i) + ", " + std::to_string(j) +
                      ") is not an ordered pair of the grid");
  // Rows i' < i contribute (top - i' + 1) pairs each.
  const std::size_t n = top_ + 1;
  return i * n - i * (i - 1) / 2 + (j - i);
}

Matrix JointBDGenerator::skeleton(double t, double trunc_tol) const {
  return uniformize(q_, t, trunc_tol);
}

Matrix JointBDGenerator::project(const Matrix& joint, int coordinate) const {
  if (coordinate != 1 && coordinate != 2) throw DomainError("coordinate must be 1 or 2");
  if (joint.cols() != static_cast<Eigen::Index>(pairs_.size()))
    throw ShapeError("joint matrix does not match the pair space");
  Matrix out = Matrix::Zero(joint.rows(), static_cast<Eigen::Index>(top_ + 1));
  for (std::size_t l = 0; l < pairs_.size(); ++l) {
    const std::size_t c = coordinate == 1 ? pairs_[l].first : pairs_[l].second;
    out.col(static_cast<Eigen::Index>(c)) += joint.col(static_cast<Eigen::Index>(l));
  }
  return out;
}

JointBDGenerator::MoveRun JointBDGenerator::simulate_moves(std::size_t i, std::size_t j,
                                                           std::size_t steps,
                                                           std::uint64_t seed) const {
  MoveRun run;
  long a = static_cast<long>(i);
  long b = static_cast<long>(j);
  const Stream stream(seed, streams::kCoupling);
  for (std::size_t n = 0; n < steps; ++n) {
    const auto& mv = moves_[index(static_cast<std::size_t>(a), static_cast<std::size_t>(b))];
    double total = 0.0;
    for (const auto& m : mv) total += m.rate;
    if (total == 0.0) break;
    double u = stream.uniform(n) * total;
    std::size_t pick = 0;
    while (pick + 1 < mv.size() && u > mv[pick].rate) u -= mv[pick++].rate;
    a += mv[pick].di;
    b += mv[pick].dj;
    ++run.steps;
    if (a > b || a < 0 || b > static_cast<long>(top_)) {
      ++run.exits;
      break;
    }
  }
  run.final_state = {a, b};
  return run;
}

JointBDGenerator bd_coupled_generator(const BirthDeathSpec& spec1, const BirthDeathSpec& spec2) {
  return JointBDGenerator(spec1, spec2);
}

ModelKernel shot_noise_skeleton(double r, const JumpLaw& jumps, double jump_rate, double dt,
                                const OrderedStateSpace& grid) {
  if (!(r > 0.0)) throw DomainError("decay rate r must be positive");
  validate_jumps(jumps, jump_rate, dt);
  const double decay = std::exp(-r * dt);
  if (decay < 0.5) throw DomainError("dt too large: exp(-r dt) < 0.5");
  std::vector<double> drift(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) drift[i] = grid[i] * decay;
  return rounded_jump_kernel("shot_noise_skeleton", drift, jumps, jump_rate, dt, grid);
}

ModelKernel dam_skeleton(const std::function<double(double)>& release, const JumpLaw& jumps,
                         double jump_rate, double dt, const OrderedStateSpace& grid) {
  validate_jumps(jumps, jump_rate, dt);
  // A grid starting at 0 is the empty dam: release cannot take the level
  // below it, so the drift is floored there rather than truncated.
  const bool empty_floor = grid.front() == 0.0;
  std::vector<double> drift(grid.size()), outflow(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rel = release(grid[i]);
    if (!std::isfinite(rel)) throw DomainError("release rate is not finite on the grid");
    outflow[i] = empty_floor ? std::min(rel * dt, grid[i]) : rel * dt;
    drift[i] = grid[i] - outflow[i];
  }
  auto m = rounded_jump_kernel("dam_skeleton", drift, jumps, jump_rate, dt, grid, empty_floor);
  m.predicted_monotone = is_nondecreasing(drift);
  m.predicted_condition1 = is_nondecreasing(outflow);
  return m;
}

ModelKernel absorbed_poisson(long k, long m, double lambda, double dt, double t_max) {
  if (k < 0 || k > m) throw DomainError("absorbed_poisson needs 0 <= k <= m");
  if (!(lambda > 0.0) || !(dt > 0.0)) throw DomainError("lambda and dt must be positive");
  if (!(t_max >= 0.0)) throw DomainError("t_max must be >= 0");
  const double mean = lambda * dt;
  const auto n = static_cast<Eigen::Index>(m - k + 1);
  Matrix rows = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index gap = n - 1 - i;
    double pmf = std::exp(-mean);
    for (Eigen::Index j = 0; j < gap; ++j) {
      rows(i, i + j) = pmf;
      pmf *= mean / static_cast<double>(j + 1);
    }
    // Tail summed directly to avoid 1 - cdf cancellation.
    double tail = 0.0;
    for (Eigen::Index j = gap; pmf > 1e-300; ++j) {
      tail += pmf;
      pmf *= mean / static_cast<double>(j + 1);
      if (static_cast<double>(j) > mean && pmf < 1e-18 * tail) break;
    }
    rows(i, n - 1) += tail;
  }
  ModelKernel out{"absorbed_poisson", FiniteKernel(OrderedStateSpace::integers(k, m),
                                                   std::move(rows), kDefaultRowTol, dt)};
  out.horizon_steps = static_cast<std::size_t>(std::llround(t_max / dt));
  return out;
}

ModelKernel constant_model(const OrderedStateSpace& space) {
  ModelKernel m{"constant", FiniteKernel::identity(space)};
  m.note = "every state is absorbing; stationary laws are not unique";
  return m;
}

}  // namespace monotone
