#include "monotone/uniformize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monotone/errors.hpp"

namespace monotone {

Matrix uniformize(const Matrix& generator, double t, double trunc_tol, double min_rate) {
  const Eigen::Index n = generator.rows();
  if (generator.cols() != n) throw ShapeError("generator must be square");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
  if (!(trunc_tol > 0.0)) throw DomainError("truncation tolerance must be positive");

  double rate = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (generator(i, j) < 0.0)
        throw InvariantError("negative off-diagonal rate at (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")");
      off += generator(i, j);
    }
    if (std::abs(off + generator(i, i)) > 1e-9 * (1.0 + off))
      throw InvariantError("generator row " + std::to_string(i) + " does not sum to zero");
    rate = std::max(rate, off);
  }
  if (rate == 0.0 || t == 0.0) return Matrix::Identity(n, n);
  rate = std::max(rate, min_rate);

  const auto pieces = static_cast<long>(std::ceil(rate * t / 20.0));
  const double lt = rate * t / static_cast<double>(pieces);
  const Matrix pu = Matrix::Identity(n, n) + generator / rate;

  Matrix term = Matrix::Identity(n, n);
  double weight = std::exp(-lt);
  double covered = weight;
  Matrix piece = weight * term;
  for (long k = 1; 1.0 - covered > trunc_tol || static_cast<double>(k) <= lt; ++k) {
    term = term * pu;
    weight *= lt / static_cast<double>(k);
    covered += weight;
    piece += weight * term;
    if (weight < trunc_tol * 1e-3 && static_cast<double>(k) > lt) break;
  }
  for (Eigen::Index i = 0; i < n; ++i) piece.row(i) /= piece.row(i).sum();

  Matrix result = Matrix::Identity(n, n);
  Matrix base = piece;
  for (long e = pieces; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      if (result(i, j) < 0.0) result(i, j) = 0.0;
    result.row(i) /= result.row(i).sum();
  }
  return result;
}

}  // namespace monotone
