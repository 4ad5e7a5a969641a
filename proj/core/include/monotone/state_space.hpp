#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace monotone {

/// Finite, strictly increasing grid of real states.
///
/// Every finite kernel in the library is indexed by one of these. Continuous
/// state spaces enter only through a grid chosen by the model constructors.
class OrderedStateSpace {
 public:
  explicit OrderedStateSpace(std::vector<double> states,
                             std::vector<std::string> labels = {});

  /// States {first, first+1, ..., last}.
  static OrderedStateSpace integers(long first, long last);
  /// `count` equally spaced states from `lo` to `hi` inclusive.
  static OrderedStateSpace uniform(double lo, double hi, std::size_t count);

  std::size_t size() const noexcept { return states_.size(); }
  std::span<const double> states() const noexcept { return states_; }
  double operator[](std::size_t i) const { return states_[i]; }
  double front() const noexcept { return states_.front(); }
  double back() const noexcept { return states_.back(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Index of an exact grid value, or nullopt.
  std::optional<std::size_t> find(double x) const noexcept;
  /// Index of an exact grid value; throws DomainError otherwise.
  std::size_t index_of(double x) const;

  /// Scale used to decide when two state differences coincide.
  double difference_slack() const noexcept { return slack_; }

  bool operator==(const OrderedStateSpace& other) const noexcept {
    return states_ == other.states_;
  }

 private:
  std::vector<double> states_;
  std::vector<std::string> labels_;
  double slack_ = 0.0;
};

}  // namespace monotone
