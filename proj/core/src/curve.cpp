#include "monotone/curve.hpp"

#include <cmath>

#include "monotone/errors.hpp"

namespace monotone {

Curve::Curve(std::vector<double> t, std::vector<double> v, std::string m)
    : times(std::move(t)), values(std::move(v)), meta(std::move(m)) {
  if (times.size() != values.size()) throw ShapeError("curve times/values length mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw InvariantError("curve value " + std::to_string(i) + " is not finite");
    if (i > 0 && !(times[i - 1] < times[i]))
      throw InvariantError("curve times must be strictly increasing");
  }
}

namespace {

// Tracks the most negative margin for one flag.
struct Flag {
  bool ok = true;
  double worst = 0.0;
  std::optional<std::size_t> at;
  void test(double margin, double tol, std::size_t i) {
    if (margin < -tol && (ok || margin < worst)) {
      ok = false;
      worst = margin;
      at = i;
    }
  }
};

}  // namespace

ShapeCertificate certify_shape(const Curve& curve, double tol) {
  const auto& t = curve.times;
  const auto& v = curve.values;
  const std::size_t n = v.size();
  Flag nonneg, nonincr, nondecr, convex, concave;

  for (std::size_t i = 0; i < n; ++i) nonneg.test(v[i], tol, i);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = v[i + 1] - v[i];
    nonincr.test(-d, tol, i);
    nondecr.test(d, tol, i);
  }
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const double h0 = t[i + 1] - t[i];
    const double h1 = t[i + 2] - t[i + 1];
    const double slope_change = (v[i + 2] - v[i + 1]) / h1 - (v[i + 1] - v[i]) / h0;
    const double second = slope_change * 0.5 * (h0 + h1);
    convex.test(second, tol, i);
    concave.test(-second, tol, i);
  }

  ShapeCertificate c;
  c.tol = tol;
  c.nonnegative = nonneg.ok;
  c.nonnegative_witness = nonneg.at;
  c.nonincreasing = nonincr.ok;
  c.nonincreasing_witness = nonincr.at;
  c.nondecreasing = nondecr.ok;
  c.nondecreasing_witness = nondecr.at;
  c.convex = convex.ok;
  c.convex_witness = convex.at;
  c.concave = concave.ok;
  c.concave_witness = concave.at;
  c.note = n < 3 ? "fewer than 3 points: convexity flags vacuous"
                 : "convexity certified on the sampled grid only";
  return c;
}

}  // namespace monotone
