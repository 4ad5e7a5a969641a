#include "monotone/distribution.hpp"

#include <cmath>
#include <functional>

#include "monotone/errors.hpp"

namespace monotone {

Distribution::Distribution(std::shared_ptr<const OrderedStateSpace> space,
                           std::vector<double> mass, double tol)
    : space_(std::move(space)), mass_(std::move(mass)), tol_(tol) {
  if (!space_) throw InvariantError("distribution needs a state space");
  if (mass_.size() != space_->size())
    throw ShapeError("distribution has " + std::to_string(mass_.size()) +
                     " entries for " + std::to_string(space_->size()) + " states");
  double sum = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if (!std::isfinite(mass_[i]) || mass_[i] < -tol_)
      throw InvariantError("mass at index " + std::to_string(i) + " is negative");
    if (mass_[i] < 0.0) mass_[i] = 0.0;
    sum += mass_[i];
  }
  if (std::abs(sum - 1.0) > tol_)
    throw InvariantError("distribution sums to " + std::to_string(sum));
}

Distribution::Distribution(OrderedStateSpace space, std::vector<double> mass, double tol)
    : Distribution(std::make_shared<const OrderedStateSpace>(std::move(space)),
                   std::move(mass), tol) {}

Distribution Distribution::point_mass(std::shared_ptr<const OrderedStateSpace> space,
                                      std::size_t index) {
  std::vector<double> m(space->size(), 0.0);
  m.at(index) = 1.0;
  return Distribution(std::move(space), std::move(m));
}

double Distribution::expectation(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i)
    if (mass_[i] != 0.0) acc += mass_[i] * f((*space_)[i]);
  return acc;
}

double Distribution::mean() const {
  return expectation([](double x) { return x; });
}

double Distribution::variance() const {
  const double m = mean();
  return expectation([m](double x) { return (x - m) * (x - m); });
}

double Distribution::invariance_residual(const FiniteKernel& kernel) const {
  if (!(kernel.space() == *space_))
    throw ShapeError("distribution and kernel live on different state spaces");
  Eigen::Map<const Eigen::RowVectorXd> mu(mass_.data(),
                                          static_cast<Eigen::Index>(mass_.size()));
  return (mu * kernel.matrix() - mu).cwiseAbs().maxCoeff();
}

}  // namespace monotone
