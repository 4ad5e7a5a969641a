#include "monotone/kernel.hpp"

#include <cmath>
#include <string>

#include "monotone/errors.hpp"

namespace monotone {

FiniteKernel::FiniteKernel(OrderedStateSpace space, Matrix rows, double row_tol,
                           double time_step)
    : FiniteKernel(std::make_shared<const OrderedStateSpace>(std::move(space)),
                   std::move(rows), row_tol, time_step) {}

FiniteKernel::FiniteKernel(std::shared_ptr<const OrderedStateSpace> space,
                           Matrix rows, double row_tol, double time_step)
    : space_(std::move(space)),
      rows_(std::move(rows)),
      row_tol_(row_tol),
      time_step_(time_step) {
  if (!space_) throw InvariantError("kernel needs a state space");
  const auto n = static_cast<Eigen::Index>(space_->size());
  if (rows_.rows() != n || rows_.cols() != n)
    throw ShapeError("kernel matrix is " + std::to_string(rows_.rows()) + "x" +
                     std::to_string(rows_.cols()) + ", state space has " +
                     std::to_string(n) + " states");
  if (!(row_tol_ >= 0.0)) throw InvariantError("row_tol must be nonnegative");
  if (!(time_step_ > 0.0) || !std::isfinite(time_step_))
    throw InvariantError("time_step must be positive and finite");

  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      double& p = rows_(i, j);
      if (!std::isfinite(p) || p < -row_tol_ || p > 1.0 + row_tol_)
        throw InvariantError("entry (" + std::to_string(i) + "," +
                             std::to_string(j) + ") = " + std::to_string(p) +
                             " is not a probability");
      if (p < 0.0) p = 0.0;
      sum += p;
    }
    if (std::abs(sum - 1.0) > row_tol_)
      throw InvariantError("row " + std::to_string(i) + " sums to " +
                           std::to_string(sum) + ", off by more than row_tol");
    if (sum != 1.0) rows_.row(i) /= sum;
  }
}

FiniteKernel FiniteKernel::identity(OrderedStateSpace space) {
  return identity(std::make_shared<const OrderedStateSpace>(std::move(space)));
}

FiniteKernel FiniteKernel::identity(std::shared_ptr<const OrderedStateSpace> space) {
  const auto n = static_cast<Eigen::Index>(space->size());
  return FiniteKernel(std::move(space), Matrix::Identity(n, n));
}

FiniteKernel compose(const FiniteKernel& first, const FiniteKernel& second) {
  if (!first.same_space(second))
    throw ShapeError("compose: kernels live on different state spaces");
  Matrix product = first.matrix() * second.matrix();
  // Accumulated rounding in a length-n dot product can exceed the summed
  // input tolerances when those are zero.
  const double tol = first.row_tol() + second.row_tol() +
                     4.0 * static_cast<double>(first.size()) * 1e-16;
  return FiniteKernel(first.shared_space(), std::move(product), tol,
                      first.time_step() + second.time_step());
}

FiniteKernel n_step(const FiniteKernel& kernel, std::size_t n) {
  if (n == 0) {
    const auto m = static_cast<Eigen::Index>(kernel.size());
    return FiniteKernel(kernel.shared_space(), Matrix::Identity(m, m),
                        kernel.row_tol(), kernel.time_step());
  }
  FiniteKernel result = kernel;
  for (std::size_t k = 1; k < n; ++k) result = compose(result, kernel);
  return result;
}

KernelSequence::KernelSequence(std::vector<FiniteKernel> kernels)
    : kernels_(std::move(kernels)) {
  if (kernels_.empty()) throw InvariantError("kernel sequence is empty");
  for (std::size_t i = 1; i < kernels_.size(); ++i)
    if (!kernels_[i].same_space(kernels_[0]))
      throw ShapeError("kernel " + std::to_string(i) +
                       " does not share the sequence's state space");
}

FiniteKernel KernelSequence::product() const {
  FiniteKernel result = kernels_.front();
  for (std::size_t i = 1; i < kernels_.size(); ++i)
    result = compose(result, kernels_[i]);
  return result;
}

}  // namespace monotone
