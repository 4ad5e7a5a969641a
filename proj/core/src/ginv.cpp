#include "monotone/ginv.hpp"

#include <algorithm>
#include <string>

#include "monotone/errors.hpp"

namespace monotone {

GeneralizedInverseTable::GeneralizedInverseTable(const FiniteKernel& kernel)
    : space_(kernel.shared_space()), cdf_(kernel.size() * kernel.size()) {
  const std::size_t n = kernel.size();
  for (std::size_t x = 0; x < n; ++x) {
    auto row = kernel.row(x);
    std::size_t last = n - 1;
    while (last > 0 && row[last] == 0.0) --last;
    double acc = 0.0;
    for (std::size_t y = 0; y < last; ++y) {
      acc += row[y];
      cdf_[x * n + y] = std::min(acc, 1.0);
    }
    // Rounding must not leave the top of the support short of 1.
    std::fill(cdf_.begin() + static_cast<std::ptrdiff_t>(x * n + last),
              cdf_.begin() + static_cast<std::ptrdiff_t>((x + 1) * n), 1.0);
  }
}

std::size_t GeneralizedInverseTable::query_index(std::size_t x, double u) const noexcept {
  auto row = cdf_row(x);
  return static_cast<std::size_t>(std::lower_bound(row.begin(), row.end(), u) -
                                  row.begin());
}

std::size_t ginv_query_index(const GeneralizedInverseTable& table, std::size_t x,
                             double u) {
  if (!(u > 0.0 && u <= 1.0))
    throw DomainError("generalized inverse needs u in (0,1], got " + std::to_string(u));
  if (x >= table.size()) throw DomainError("source index out of range");
  return table.query_index(x, u);
}

double GeneralizedInverseTable::query(double x, double u) const {
  return (*space_)[ginv_query_index(*this, space_->index_of(x), u)];
}

}  // namespace monotone
