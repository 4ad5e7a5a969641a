#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "monotone/kernel.hpp"

namespace monotone {

/// Per-state CDF rows F_x(y) = p(x, (-inf, y]) with generalized-inverse
/// queries G(x, u) = min{ y : F_x(y) >= u }.
///
/// The last entry of each row is pinned to exactly 1 so that u = 1 always
/// resolves. Queries satisfy the Galois property
///   G(x, u) <= y  <=>  u <= F_x(y)
/// exactly, because both sides read the same stored table.
class GeneralizedInverseTable {
 public:
  explicit GeneralizedInverseTable(const FiniteKernel& kernel);

  const OrderedStateSpace& space() const noexcept { return *space_; }
  std::size_t size() const noexcept { return space_->size(); }

  /// F_x over the grid for source index x.
  std::span<const double> cdf_row(std::size_t x) const {
    return {cdf_.data() + x * size(), size()};
  }
  double cdf(std::size_t x, std::size_t y) const { return cdf_[x * size() + y]; }

  /// Index form of G: smallest target index y with F_x(y) >= u. No domain check.
  std::size_t query_index(std::size_t x, double u) const noexcept;

  /// G(x, u) by state value. Throws DomainError unless x is a grid state and
  /// 0 < u <= 1.
  double query(double x, double u) const;

 private:
  std::shared_ptr<const OrderedStateSpace> space_;
  std::vector<double> cdf_;
};

inline GeneralizedInverseTable build_ginv(const FiniteKernel& kernel) {
  return GeneralizedInverseTable(kernel);
}

/// G(x, u) by state value; see GeneralizedInverseTable::query.
inline double ginv_query(const GeneralizedInverseTable& table, double x, double u) {
  return table.query(x, u);
}

/// ginv_query with index-level domain checking.
std::size_t ginv_query_index(const GeneralizedInverseTable& table, std::size_t x,
                             double u);

}  // namespace monotone
