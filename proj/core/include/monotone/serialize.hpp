#pragma once

#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "monotone/checks.hpp"
#include "monotone/coupling.hpp"
#include "monotone/curve.hpp"
#include "monotone/kernel.hpp"

namespace monotone {

using Json = nlohmann::ordered_json;

/// {"states": [...], "rows": [[...], ...], "time_step": dt}.
Json kernel_to_json(const FiniteKernel& kernel);
/// Inverse of kernel_to_json; the constructor revalidates every invariant.
/// Throws ShapeError if the object is malformed.
FiniteKernel kernel_from_json(const Json& j, double row_tol = kDefaultRowTol);

Json to_json(const Witness& w);
Json to_json(const CheckReport& report);
Json to_json(const ShapeCertificate& cert);
Json curve_to_json(const Curve& curve, const ShapeCertificate& cert);

/// Shortest decimal that round-trips, so output is byte-stable.
std::string format_number(double x);

/// "t,value" rows after a header line.
std::string curve_to_csv(const Curve& curve);
/// "t,value,std_error,n" rows; times[i] pairs with estimates[i].
std::string estimates_to_csv(std::span<const double> times, std::span<const Estimate> estimates);

/// One verdict line followed by a witness table when the check failed.
std::string render_report(const CheckReport& report);
/// Flag table for a shape certificate.
std::string render_certificate(const ShapeCertificate& cert);

}  // namespace monotone
