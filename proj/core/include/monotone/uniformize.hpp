#pragma once

#include "monotone/kernel.hpp"

namespace monotone {

/// exp(tQ) for a finite generator Q (rows sum to zero, nonnegative off the
/// diagonal) by uniformization. The horizon is split so each piece has
/// Lambda * t / m <= 20, the Poisson series for one piece is summed until its
/// remaining weight is below trunc_tol, and the piece is raised to the m-th power.
/// The uniformization rate is the largest exit rate, raised to `min_rate` if
/// that is larger (a larger rate can make I + Q/Lambda inherit structure).
Matrix uniformize(const Matrix& generator, double t, double trunc_tol = 1e-16,
                  double min_rate = 0.0);

}  // namespace monotone
