#include "monotone/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "monotone/errors.hpp"
#include "monotone/ginv.hpp"
#include "monotone/rng.hpp"

namespace monotone {
namespace {

std::vector<std::size_t> initial_indices(const OrderedStateSpace& space,
                                         std::span<const double> initial_states) {
  std::vector<std::size_t> idx;
  idx.reserve(initial_states.size());
  for (double x : initial_states) idx.push_back(space.index_of(x));
  return idx;
}

CoupledPaths run_coupled(const std::vector<GeneralizedInverseTable>& tables,
                         std::span<const double> initial_states, std::size_t steps,
                         std::uint64_t seed) {
  const auto& space = tables.front().space();
  std::vector<std::size_t> cur = initial_indices(space, initial_states);
  CoupledPaths out;
  out.initial_states.assign(initial_states.begin(), initial_states.end());
  out.steps = steps;
  out.seed = seed;
  out.trajectories.assign(cur.size(), std::vector<double>(steps + 1));
  for (std::size_t i = 0; i < cur.size(); ++i) out.trajectories[i][0] = space[cur[i]];

  const Stream stream(seed, streams::kCoupling);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double u = stream.uniform(n - 1);
    const auto& table = tables[(n - 1) % tables.size()];
    for (std::size_t i = 0; i < cur.size(); ++i) {
      cur[i] = table.query_index(cur[i], u);
      out.trajectories[i][n] = space[cur[i]];
    }
  }
  return out;
}

class Welford {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  double mean() const { return mean_; }
  Estimate estimate() const {
    const double var = n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    return {mean_, std::sqrt(var / static_cast<double>(n_)), n_};
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Simulates n_paths independent index paths of length horizon+1 and hands
// each to `visit`.
class Ensemble {
 public:
  Ensemble(const FiniteKernel& kernel, const Distribution& init, std::size_t n_paths,
           std::uint64_t seed)
      : table_(kernel), n_paths_(n_paths), seed_(seed) {
    if (!(kernel.space() == init.space()))
      throw ShapeError("initial distribution and kernel live on different state spaces");
    if (n_paths < 2) throw DomainError("n_paths must be at least 2");
    double acc = 0.0;
    for (double m : init.mass()) {
      acc += m;
      init_cdf_.push_back(acc);
    }
    // Pin the top of the CDF at the last state carrying mass.
    for (std::size_t i = init_cdf_.size(); i-- > 0;) {
      init_cdf_[i] = 1.0;
      if (init[i] > 0.0) break;
    }
  }

  void run(std::size_t horizon, const std::function<void(std::span<const std::size_t>)>& visit) const {
    std::vector<std::size_t> path(horizon + 1);
    for (std::size_t p = 0; p < n_paths_; ++p) {
      const double u0 = Stream(seed_, streams::path_initial(p)).uniform(0);
      path[0] = static_cast<std::size_t>(
          std::lower_bound(init_cdf_.begin(), init_cdf_.end(), u0) - init_cdf_.begin());
      const Stream steps(seed_, streams::path_steps(p));
      for (std::size_t t = 1; t <= horizon; ++t)
        path[t] = table_.query_index(path[t - 1], steps.uniform(t - 1));
      visit(path);
    }
  }

  const OrderedStateSpace& space() const { return table_.space(); }

 private:
  GeneralizedInverseTable table_;
  std::vector<double> init_cdf_;
  std::size_t n_paths_;
  std::uint64_t seed_;
};

std::vector<double> tabulate(const OrderedStateSpace& space, const ScalarFn& f) {
  std::vector<double> v(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) v[i] = f(space[i]);
  return v;
}

std::vector<std::vector<Estimate>> collect(const std::vector<std::vector<Welford>>& acc) {
  std::vector<std::vector<Estimate>> out(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k)
    for (const auto& w : acc[k]) out[k].push_back(w.estimate());
  return out;
}

}  // namespace

std::size_t CoupledPaths::ordering_violations() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < trajectories.size(); ++i)
    for (std::size_t j = 0; j < trajectories.size(); ++j) {
      if (i == j || !(initial_states[i] <= initial_states[j]) ||
          (initial_states[i] == initial_states[j] && i > j))
        continue;
      for (std::size_t t = 0; t <= steps; ++t)
        if (trajectories[i][t] > trajectories[j][t]) ++count;
    }
  return count;
}

std::size_t CoupledPaths::increment_violations(double slack) const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < trajectories.size(); ++i)
    for (std::size_t j = 0; j < trajectories.size(); ++j) {
      if (i == j || !(initial_states[i] <= initial_states[j]) ||
          (initial_states[i] == initial_states[j] && i > j))
        continue;
      for (std::size_t t = 0; t <= steps; ++t)
        if (trajectories[i][t] - initial_states[i] <
            trajectories[j][t] - initial_states[j] - slack)
          ++count;
    }
  return count;
}

CoupledPaths simulate_coupled(const FiniteKernel& kernel,
                              std::span<const double> initial_states, std::size_t steps,
                              std::uint64_t seed) {
  return run_coupled({GeneralizedInverseTable(kernel)}, initial_states, steps, seed);
}

CoupledPaths simulate_coupled(const KernelSequence& seq,
                              std::span<const double> initial_states, std::size_t steps,
                              std::uint64_t seed) {
  std::vector<GeneralizedInverseTable> tables;
  tables.reserve(seq.size());
  for (const auto& k : seq.kernels()) tables.emplace_back(k);
  return run_coupled(tables, initial_states, steps, seed);
}

std::vector<std::vector<Estimate>> mc_supermod_curves(const FiniteKernel& kernel,
                                                      const Distribution& init,
                                                      std::span<const BivariateFn> hs,
                                                      std::size_t t_max, std::size_t n_paths,
                                                      std::uint64_t seed) {
  const Ensemble ensemble(kernel, init, n_paths, seed);
  const auto& space = ensemble.space();
  const std::size_t n = space.size();
  std::vector<std::vector<double>> tables(hs.size(), std::vector<double>(n * n));
  for (std::size_t k = 0; k < hs.size(); ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) tables[k][a * n + b] = hs[k](space[a], space[b]);

  std::vector<std::vector<Welford>> acc(hs.size(), std::vector<Welford>(t_max + 1));
  ensemble.run(t_max, [&](std::span<const std::size_t> path) {
    for (std::size_t k = 0; k < hs.size(); ++k)
      for (std::size_t t = 0; t <= t_max; ++t)
        acc[k][t].add(tables[k][path[0] * n + path[t]]);
  });
  return collect(acc);
}

std::vector<Estimate> mc_supermod_curve(const FiniteKernel& kernel, const Distribution& init,
                                        const BivariateFn& h, std::size_t t_max,
                                        std::size_t n_paths, std::uint64_t seed) {
  return std::move(mc_supermod_curves(kernel, init, std::span(&h, 1), t_max, n_paths, seed)
                       .front());
}

std::vector<std::vector<Estimate>> mc_covariance_curves(const FiniteKernel& kernel,
                                                        const Distribution& init,
                                                        std::span<const FunctionPair> fs,
                                                        std::size_t t_max, std::size_t n_paths,
                                                        std::uint64_t seed) {
  const Ensemble ensemble(kernel, init, n_paths, seed);
  std::vector<std::vector<double>> a, b;
  for (const auto& f : fs) {
    a.push_back(tabulate(ensemble.space(), f.f1));
    b.push_back(tabulate(ensemble.space(), f.f2));
  }

  // First pass: means of f1(X_0) and f2(X_t). The paths are regenerated
  // from the same streams in the second pass.
  std::vector<Welford> m0(fs.size());
  std::vector<std::vector<Welford>> mt(fs.size(), std::vector<Welford>(t_max + 1));
  ensemble.run(t_max, [&](std::span<const std::size_t> path) {
    for (std::size_t k = 0; k < fs.size(); ++k) {
      m0[k].add(a[k][path[0]]);
      for (std::size_t t = 0; t <= t_max; ++t) mt[k][t].add(b[k][path[t]]);
    }
  });

  std::vector<std::vector<Welford>> acc(fs.size(), std::vector<Welford>(t_max + 1));
  ensemble.run(t_max, [&](std::span<const std::size_t> path) {
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const double c0 = a[k][path[0]] - m0[k].mean();
      for (std::size_t t = 0; t <= t_max; ++t)
        acc[k][t].add(c0 * (b[k][path[t]] - mt[k][t].mean()));
    }
  });
  return collect(acc);
}

std::vector<Estimate> mc_covariance_curve(const FiniteKernel& kernel, const Distribution& init,
                                          const ScalarFn& f1, const ScalarFn& f2,
                                          std::size_t t_max, std::size_t n_paths,
                                          std::uint64_t seed) {
  const FunctionPair fp{f1, f2};
  return std::move(
      mc_covariance_curves(kernel, init, std::span(&fp, 1), t_max, n_paths, seed).front());
}

std::vector<Estimate> mc_autocovariance(const FiniteKernel& kernel, const Distribution& init,
                                        std::size_t t_max, std::size_t n_paths,
                                        std::uint64_t seed) {
  const auto id = [](double x) { return x; };
  return mc_covariance_curve(kernel, init, id, id, t_max, n_paths, seed);
}

std::vector<std::vector<Estimate>> mc_difference_curves(
    const FiniteKernel& kernel, const Distribution& init, std::span<const BivariateFn> hs,
    std::span<const std::size_t> lags, std::size_t t_max, std::size_t n_paths,
    std::uint64_t seed) {
  std::size_t max_lag = 0;
  for (std::size_t s : lags) {
    if (s == 0) throw DomainError("difference lag s must be positive");
    max_lag = std::max(max_lag, s);
  }
  const Ensemble ensemble(kernel, init, n_paths, seed);
  const auto& space = ensemble.space();
  std::vector<std::vector<Welford>> acc(lags.size() * hs.size(),
                                        std::vector<Welford>(t_max + 1));
  ensemble.run(t_max + max_lag, [&](std::span<const std::size_t> path) {
    const double x0 = space[path[0]];
    for (std::size_t si = 0; si < lags.size(); ++si)
      for (std::size_t t = 0; t <= t_max; ++t) {
        const double d = space[path[t]] - space[path[t + lags[si]]];
        for (std::size_t hi = 0; hi < hs.size(); ++hi)
          acc[si * hs.size() + hi][t].add(hs[hi](x0, d));
      }
  });
  return collect(acc);
}

}  // namespace monotone
