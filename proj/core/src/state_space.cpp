#include "monotone/state_space.hpp"

#include <algorithm>
#include <cmath>

#include "monotone/errors.hpp"

namespace monotone {

OrderedStateSpace::OrderedStateSpace(std::vector<double> states,
                                     std::vector<std::string> labels)
    : states_(std::move(states)), labels_(std::move(labels)) {
  if (states_.empty()) throw InvariantError("state space must be nonempty");
  double scale = 1.0;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!std::isfinite(states_[i]))
      throw InvariantError("state " + std::to_string(i) + " is not finite");
    if (i > 0 && !(states_[i - 1] < states_[i]))
      throw InvariantError("states must be strictly increasing (index " +
                           std::to_string(i) + ")");
    scale = std::max(scale, std::abs(states_[i]));
  }
  if (!labels_.empty() && labels_.size() != states_.size())
    throw InvariantError("label count does not match state count");
  slack_ = 1e-9 * scale;
}

OrderedStateSpace OrderedStateSpace::integers(long first, long last) {
  if (last < first) throw InvariantError("empty integer range");
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(last - first + 1));
  for (long i = first; i <= last; ++i) s.push_back(static_cast<double>(i));
  return OrderedStateSpace(std::move(s));
}

OrderedStateSpace OrderedStateSpace::uniform(double lo, double hi,
                                             std::size_t count) {
  if (count == 0) throw InvariantError("uniform grid needs at least one state");
  if (count == 1) return OrderedStateSpace({lo});
  std::vector<double> s(count);
  const double h = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) s[i] = lo + h * static_cast<double>(i);
  s.back() = hi;
  return OrderedStateSpace(std::move(s));
}

std::optional<std::size_t> OrderedStateSpace::find(double x) const noexcept {
  auto it = std::lower_bound(states_.begin(), states_.end(), x);
  if (it == states_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t OrderedStateSpace::index_of(double x) const {
  if (auto i = find(x)) return *i;
  throw DomainError("value " + std::to_string(x) + " is not a grid state");
}

}  // namespace monotone
