#include "monotone/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "monotone/errors.hpp"

namespace monotone {
namespace {

Json optional_index(const std::optional<std::size_t>& i) {
  return i ? Json(*i) : Json(nullptr);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

Json kernel_to_json(const FiniteKernel& kernel) {
  Json j;
  j["states"] = std::vector<double>(kernel.space().states().begin(), kernel.space().states().end());
  Json rows = Json::array();
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const auto r = kernel.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  j["rows"] = std::move(rows);
  j["time_step"] = kernel.time_step();
  return j;
}

FiniteKernel kernel_from_json(const Json& j, double row_tol) {
  if (!j.is_object() || !j.contains("states") || !j.contains("rows"))
    throw ShapeError("kernel JSON needs 'states' and 'rows'");
  const auto& states = j.at("states");
  const auto& rows = j.at("rows");
  if (!states.is_array() || !rows.is_array())
    throw ShapeError("'states' and 'rows' must be arrays");
  std::vector<double> s;
  for (const auto& v : states) {
    if (!v.is_number()) throw ShapeError("states must be numbers");
    s.push_back(v.get<double>());
  }
  const auto n = static_cast<Eigen::Index>(s.size());
  if (static_cast<Eigen::Index>(rows.size()) != n) throw ShapeError("rows must be square");
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ShapeError("row " + std::to_string(i) + " has the wrong length");
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw ShapeError("kernel entries must be numbers");
      m(i, k) = v.get<double>();
    }
  }
  const double dt = j.contains("time_step") ? j.at("time_step").get<double>() : 1.0;
  return FiniteKernel(OrderedStateSpace(std::move(s)), std::move(m), row_tol, dt);
}

Json to_json(const Witness& w) {
  Json j;
  j["x1"] = w.x1;
  j["x2"] = w.x2;
  j["threshold"] = w.threshold;
  if (w.threshold_hi) j["threshold_hi"] = *w.threshold_hi;
  if (w.level) j["level"] = *w.level;
  j["gap"] = w.gap;
  return j;
}

Json to_json(const CheckReport& report) {
  Json j;
  j["property"] = to_string(report.property);
  j["passed"] = report.passed;
  j["tolerance"] = report.tolerance;
  j["witness"] = report.witness ? to_json(*report.witness) : Json(nullptr);
  return j;
}

Json to_json(const ShapeCertificate& c) {
  Json j;
  j["nonnegative"] = c.nonnegative;
  j["nonincreasing"] = c.nonincreasing;
  j["nondecreasing"] = c.nondecreasing;
  j["convex"] = c.convex;
  j["concave"] = c.concave;
  j["tol"] = c.tol;
  j["witnesses"] = {{"nonnegative", optional_index(c.nonnegative_witness)},
                    {"nonincreasing", optional_index(c.nonincreasing_witness)},
                    {"nondecreasing", optional_index(c.nondecreasing_witness)},
                    {"convex", optional_index(c.convex_witness)},
                    {"concave", optional_index(c.concave_witness)}};
  j["note"] = c.note;
  return j;
}

Json curve_to_json(const Curve& curve, const ShapeCertificate& cert) {
  Json j;
  j["meta"] = curve.meta;
  j["t"] = curve.times;
  j["value"] = curve.values;
  j["certificate"] = to_json(cert);
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string curve_to_csv(const Curve& curve) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    out += format_number(curve.times[i]) + "," + format_number(curve.values[i]) + "\n";
  return out;
}

std::string estimates_to_csv(std::span<const double> times, std::span<const Estimate> estimates) {
  if (times.size() != estimates.size()) throw ShapeError("times/estimates length mismatch");
  std::string out = "t,value,std_error,n\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    out += format_number(times[i]) + "," + format_number(estimates[i].value) + "," +
           format_number(estimates[i].std_error) + "," + std::to_string(estimates[i].n_samples) +
           "\n";
  return out;
}

std::string render_report(const CheckReport& report) {
  std::ostringstream os;
  os << to_string(report.property) << ": " << (report.passed ? "PASS" : "FAIL")
     << " (tol " << format_number(report.tolerance) << ")\n";
  if (report.witness) {
    const auto& w = *report.witness;
    os << "  " << pad("x1", 14) << pad("x2", 14) << pad("y", 14);
    if (w.threshold_hi) os << pad("y2", 14);
    if (w.level) os << pad("u", 14);
    os << "gap\n";
    os << "  " << pad(format_number(w.x1), 14) << pad(format_number(w.x2), 14)
       << pad(format_number(w.threshold), 14);
    if (w.threshold_hi) os << pad(format_number(*w.threshold_hi), 14);
    if (w.level) os << pad(format_number(*w.level), 14);
    os << format_number(w.gap) << "\n";
  }
  return os.str();
}

std::string render_certificate(const ShapeCertificate& c) {
  std::ostringstream os;
  const auto row = [&](const char* name, bool ok, const std::optional<std::size_t>& at) {
    os << "  " << pad(name, 15) << (ok ? "yes" : "no ");
    if (at) os << "  (worst at index " << *at << ")";
    os << "\n";
  };
  os << "shape certificate (tol " << format_number(c.tol) << ")\n";
  row("nonnegative", c.nonnegative, c.nonnegative_witness);
  row("nonincreasing", c.nonincreasing, c.nonincreasing_witness);
  row("nondecreasing", c.nondecreasing, c.nondecreasing_witness);
  row("convex", c.convex, c.convex_witness);
  row("concave", c.concave, c.concave_witness);
  os << "  " << c.note << "\n";
  return os.str();
}

}  // namespace monotone
