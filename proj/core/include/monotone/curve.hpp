#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace monotone {

/// Finite sampled function t -> value with a provenance string.
struct Curve {
  std::vector<double> times;
  std::vector<double> values;
  std::string meta;

  Curve() = default;
  Curve(std::vector<double> t, std::vector<double> v, std::string m = {});

  std::size_t size() const noexcept { return values.size(); }
};

/// Mechanized shape verdict for a Curve.
///
/// Each false flag carries the index at which the worst violation occurs
/// (for difference-based flags, the left end of the offending stencil).
struct ShapeCertificate {
  bool nonnegative = true;
  bool nonincreasing = true;
  bool nondecreasing = true;
  bool convex = true;
  bool concave = true;
  double tol = 0.0;

  std::optional<std::size_t> nonnegative_witness;
  std::optional<std::size_t> nonincreasing_witness;
  std::optional<std::size_t> nondecreasing_witness;
  std::optional<std::size_t> convex_witness;
  std::optional<std::size_t> concave_witness;

  std::string note;
};

/// First differences against +/-tol for monotonicity; second differences for
/// convexity. On uniform grids these are plain differences; on non-uniform
/// grids slopes are compared and scaled by the mean local spacing, which
/// reduces to the plain second difference when spacing is constant.
/// Convexity on the sampled grid says nothing about values between samples.
ShapeCertificate certify_shape(const Curve& curve, double tol = 1e-10);

}  // namespace monotone
