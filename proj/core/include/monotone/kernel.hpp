#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "monotone/state_space.hpp"

namespace monotone {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultRowTol = 1e-12;

/// Row-stochastic transition matrix over an OrderedStateSpace.
///
/// Rows are indexed by source state, columns by target state. Entries must
/// lie in [0,1]; each row must sum to one within `row_tol` and is renormalized
/// at construction. `time_step` records the physical time one application of
/// the kernel represents (1 for genuine discrete-time chains, Δt for skeletons
/// of continuous-time processes).
///
/// Immutable after construction; copies share the state space.
class FiniteKernel {
 public:
  FiniteKernel(OrderedStateSpace space, Matrix rows,
               double row_tol = kDefaultRowTol, double time_step = 1.0);
  FiniteKernel(std::shared_ptr<const OrderedStateSpace> space, Matrix rows,
               double row_tol = kDefaultRowTol, double time_step = 1.0);

  static FiniteKernel identity(OrderedStateSpace space);
  static FiniteKernel identity(std::shared_ptr<const OrderedStateSpace> space);

  const OrderedStateSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const OrderedStateSpace>& shared_space() const noexcept {
    return space_;
  }
  std::size_t size() const noexcept { return space_->size(); }
  const Matrix& matrix() const noexcept { return rows_; }
  double operator()(std::size_t from, std::size_t to) const { return rows_(from, to); }
  std::span<const double> row(std::size_t i) const {
    return {rows_.data() + i * size(), size()};
  }
  double row_tol() const noexcept { return row_tol_; }
  double time_step() const noexcept { return time_step_; }

  bool same_space(const FiniteKernel& other) const noexcept {
    return space_ == other.space_ || *space_ == *other.space_;
  }

 private:
  std::shared_ptr<const OrderedStateSpace> space_;
  Matrix rows_;
  double row_tol_;
  double time_step_;
};

/// Two-step kernel: first `first`, then `second`. Tolerances and time steps add.
FiniteKernel compose(const FiniteKernel& first, const FiniteKernel& second);

/// n-fold composition; n = 0 gives the identity kernel.
FiniteKernel n_step(const FiniteKernel& kernel, std::size_t n);

/// Ordered list of (possibly different) kernels over one shared state space.
class KernelSequence {
 public:
  explicit KernelSequence(std::vector<FiniteKernel> kernels);

  std::size_t size() const noexcept { return kernels_.size(); }
  const FiniteKernel& operator[](std::size_t i) const { return kernels_[i]; }
  const std::vector<FiniteKernel>& kernels() const noexcept { return kernels_; }
  const OrderedStateSpace& space() const noexcept { return kernels_.front().space(); }

  /// Composition p_1 then p_2 ... then p_n.
  FiniteKernel product() const;

 private:
  std::vector<FiniteKernel> kernels_;
};

}  // namespace monotone
