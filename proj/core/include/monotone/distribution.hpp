#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "monotone/kernel.hpp"

namespace monotone {

/// Probability vector over an OrderedStateSpace.
class Distribution {
 public:
  Distribution(std::shared_ptr<const OrderedStateSpace> space, std::vector<double> mass,
               double tol = 1e-12);
  Distribution(OrderedStateSpace space, std::vector<double> mass, double tol = 1e-12);

  static Distribution point_mass(std::shared_ptr<const OrderedStateSpace> space,
                                 std::size_t index);

  const OrderedStateSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const OrderedStateSpace>& shared_space() const noexcept {
    return space_;
  }
  std::span<const double> mass() const noexcept { return mass_; }
  double operator[](std::size_t i) const { return mass_[i]; }
  double tol() const noexcept { return tol_; }

  /// False when produced by `stationary` for a kernel with several closed classes.
  bool unique() const noexcept { return unique_; }
  const std::string& note() const noexcept { return note_; }

  double expectation(const std::function<double(double)>& f) const;
  double mean() const;
  double variance() const;

  /// ||mu P - mu||_inf.
  double invariance_residual(const FiniteKernel& kernel) const;

 private:
  friend Distribution stationary(const FiniteKernel&, double);

  std::shared_ptr<const OrderedStateSpace> space_;
  std::vector<double> mass_;
  double tol_;
  bool unique_ = true;
  std::string note_;
};

}  // namespace monotone
