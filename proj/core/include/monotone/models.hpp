#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monotone/kernel.hpp"

namespace monotone {

/// A constructed kernel together with the verdicts the theory predicts for it.
struct ModelKernel {
  ModelKernel(std::string n, FiniteKernel k) : name(std::move(n)), kernel(std::move(k)) {}

  std::string name;
  FiniteKernel kernel;
  bool predicted_monotone = true;
  bool predicted_condition1 = true;
  /// Largest per-row probability moved by truncating to the finite grid.
  double truncation_mass = 0.0;
  /// Number of steps corresponding to a requested physical horizon, if any.
  std::optional<std::size_t> horizon_steps;
  std::string note;
};

/// Finite law of an integer increment: (value, probability) pairs.
using IntegerLaw = std::vector<std::pair<long, double>>;
/// Finite law of a nonnegative real jump size.
using JumpLaw = std::vector<std::pair<double, double>>;

struct WalkSpec {
  std::vector<double> p;  ///< up
  std::vector<double> q;  ///< down, q[0] = 0
  std::vector<double> r;  ///< stay
};

struct BirthDeathSpec {
  std::vector<double> lambdas;  ///< birth rates on states 0..N
  std::vector<double> mus;      ///< death rates, mus[0] = 0
  std::string truncation_note;
};

/// Row x is the law of min(max(x + Y, 0), max_state) on {0..max_state}.
/// Mass pushed past max_state is reported as truncation.
ModelKernel reflected_walk(const IntegerLaw& increments, long max_state);

/// Row x is the law of min(max(x + Y, 0), b) on {0..b}. Throws DomainError if b < 1.
ModelKernel two_sided_reflected_walk(const IntegerLaw& increments, long b);

/// Tridiagonal walk on {0..N}, N = p.size() - 1. An up-probability at the
/// top state is folded into staying put (reported as truncation), so the
/// predicted verdicts refer to the folded walk:
///   monotone     iff p[i-1] <= 1 - q[i] for i >= 1
///   Condition 1  iff q nondecreasing and p nonincreasing.
ModelKernel state_dependent_walk(const WalkSpec& spec);

/// P(t) = exp(Qt) for the birth-death generator on {0..N}. The birth rate at
/// N is dropped (noted). Predicted: always monotone; Condition 1 iff the
/// effective birth rates are nonincreasing and death rates nondecreasing.
/// A zero generator gives the identity kernel with a note.
ModelKernel birth_death_skeleton(const BirthDeathSpec& spec, double t,
                                 double trunc_tol = 1e-12);

/// Ordered coupling of two birth-death chains on {(i, j) : 0 <= i <= j <= N}.
class JointBDGenerator {
 public:
  struct Move {
    int di;
    int dj;
    double rate;
  };

  /// Throws OrderingError naming the first index with lambda1 > lambda2 or
  /// mu1 < mu2, and InvariantError on malformed specs.
  JointBDGenerator(const BirthDeathSpec& spec1, const BirthDeathSpec& spec2);

  std::size_t top() const noexcept { return top_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const noexcept {
    return pairs_;
  }
  std::size_t index(std::size_t i, std::size_t j) const;
  const std::vector<std::vector<Move>>& moves() const noexcept { return moves_; }
  const Matrix& generator() const noexcept { return q_; }

  /// exp(Qt) over the pair states, indexed like pairs().
  Matrix skeleton(double t, double trunc_tol = 1e-12) const;

  /// Law of coordinate 1 or 2 for every joint start: row k is the marginal
  /// of the given coordinate under joint row k.
  Matrix project(const Matrix& joint, int coordinate) const;

  struct MoveRun {
    std::size_t steps = 0;
    std::size_t exits = 0;  ///< moves that produced i > j or left the grid
    std::pair<long, long> final_state{0, 0};
  };
  /// Jump-chain simulation applying the diagram's moves to (i, j) directly.
  MoveRun simulate_moves(std::size_t i, std::size_t j, std::size_t steps,
                         std::uint64_t seed) const;

 private:
  std::size_t top_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::vector<Move>> moves_;
  Matrix q_;
};

JointBDGenerator bd_coupled_generator(const BirthDeathSpec& spec1, const BirthDeathSpec& spec2);

/// One-step law x -> round(x e^{-r dt} + J(dt)) on a uniform grid, J(dt) a
/// compound-Poisson increment with the given jump law and rate. Rounding is
/// to the nearest grid point with ties up; values beyond the grid clamp to
/// its ends. Throws DomainError if e^{-r dt} < 0.5 or the grid is not
/// uniform, and TruncationError if the stationary-weighted mass clamped at
/// the grid ends exceeds 1e-6.
ModelKernel shot_noise_skeleton(double r, const JumpLaw& jumps, double jump_rate, double dt,
                                const OrderedStateSpace& grid);

/// Euler step x -> round(x - release(x) dt + J(dt)) of a dam with
/// state-dependent release. When the grid starts at 0 the outflow is capped
/// at the content, min(release(x) dt, x), since the dam cannot go negative.
/// Predicted monotone iff x - outflow is nondecreasing on the grid,
/// Condition 1 iff the outflow is nondecreasing there.
ModelKernel dam_skeleton(const std::function<double(double)>& release, const JumpLaw& jumps,
                         double jump_rate, double dt, const OrderedStateSpace& grid);

/// (k + N_t) ^ m sampled every dt on {k..m}, N a rate-lambda Poisson process.
/// horizon_steps is round(t_max / dt).
ModelKernel absorbed_poisson(long k, long m, double lambda, double dt, double t_max);

/// X_t = X_0 for all t: the identity kernel on `space`.
ModelKernel constant_model(const OrderedStateSpace& space);

}  // namespace monotone
