#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "monotone/checks.hpp"
#include "monotone/distribution.hpp"
#include "monotone/kernel.hpp"

namespace monotone {

/// Paths from several initial states driven by one shared uniform stream.
struct CoupledPaths {
  std::vector<double> initial_states;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  /// trajectories[i][t] is the state at time t of the path started at
  /// initial_states[i], t = 0..steps.
  std::vector<std::vector<double>> trajectories;

  /// Pairs (i < j, t) with initial_states[i] <= initial_states[j] but
  /// X_t(x_i) > X_t(x_j).
  std::size_t ordering_violations() const;
  /// Pairs with X_t(x_i) - x_i < X_t(x_j) - x_j beyond the grid's difference slack.
  std::size_t increment_violations(double slack = 0.0) const;
};

/// X_{n+1}(x) = G(X_n(x), U_{n+1}) for every x, with U drawn from the
/// coupling stream of `seed`. Throws DomainError if an initial state is not
/// on the kernel's grid.
CoupledPaths simulate_coupled(const FiniteKernel& kernel,
                              std::span<const double> initial_states, std::size_t steps,
                              std::uint64_t seed);

/// Time-inhomogeneous version: step n uses seq[(n - 1) mod seq.size()].
CoupledPaths simulate_coupled(const KernelSequence& seq,
                              std::span<const double> initial_states, std::size_t steps,
                              std::uint64_t seed);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

struct FunctionPair {
  ScalarFn f1;
  ScalarFn f2;
};

/// Monte Carlo E h(X_0, X_t), t = 0..t_max, from n_paths independent paths.
/// Path k draws X_0 from `init` on its own sub-stream and its steps on
/// another, so results are a deterministic function of the arguments.
/// Throws DomainError if n_paths < 2.
std::vector<Estimate> mc_supermod_curve(const FiniteKernel& kernel, const Distribution& init,
                                        const BivariateFn& h, std::size_t t_max,
                                        std::size_t n_paths, std::uint64_t seed);

std::vector<std::vector<Estimate>> mc_supermod_curves(const FiniteKernel& kernel,
                                                      const Distribution& init,
                                                      std::span<const BivariateFn> hs,
                                                      std::size_t t_max, std::size_t n_paths,
                                                      std::uint64_t seed);

/// Cov(f1(X_0), f2(X_t)) with plug-in means. The standard error is that of
/// the mean of (f1(X_0) - m_0)(f2(X_t) - m_t).
std::vector<Estimate> mc_covariance_curve(const FiniteKernel& kernel, const Distribution& init,
                                          const ScalarFn& f1, const ScalarFn& f2,
                                          std::size_t t_max, std::size_t n_paths,
                                          std::uint64_t seed);

std::vector<std::vector<Estimate>> mc_covariance_curves(const FiniteKernel& kernel,
                                                        const Distribution& init,
                                                        std::span<const FunctionPair> fs,
                                                        std::size_t t_max, std::size_t n_paths,
                                                        std::uint64_t seed);

/// R(t) = Cov(X_0, X_t).
std::vector<Estimate> mc_autocovariance(const FiniteKernel& kernel, const Distribution& init,
                                        std::size_t t_max, std::size_t n_paths,
                                        std::uint64_t seed);

/// Monte Carlo E h(X_0, X_t - X_{t+s}); result index is [si * hs.size() + hi].
std::vector<std::vector<Estimate>> mc_difference_curves(
    const FiniteKernel& kernel, const Distribution& init, std::span<const BivariateFn> hs,
    std::span<const std::size_t> lags, std::size_t t_max, std::size_t n_paths,
    std::uint64_t seed);

}  // namespace monotone
