// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "cpmv/matrix.hpp"

namespace cpmv {

/// Real-valued Reed-Solomon (polynomial evaluation) scheme: A is cut into
/// `delta` block-rows, and the job at evaluation point z is
/// sum_j z^j A_j. Each of the n workers evaluates `jobs_per_worker` points.
struct RSConfig {
  int n = 0;
  int delta = 0;
  int jobs_per_worker = 0;
  /// n * jobs_per_worker distinct reals, sorted ascending.
  std::vector<double> points;

  /// Points equally spaced in [-1, 1].
  static RSConfig equally_spaced(int n, int delta, int jobs_per_worker);

  /// Largest s with (n - s) * jobs_per_worker >= delta.
  int resilience() const;
  /// Throws InvalidParams for inconsistent sizes, DuplicatePoints for
  /// repeated evaluation points.
  void validate() const;
  /// Worker w evaluates the points with indices w, w + n, w + 2n, ...
  std::vector<double> worker_points(int worker) const;
};

/// Coded blocks per worker, one per assigned evaluation point.
std::vector<std::vector<MatrixBlock>> rs_encode(const BlockMatrix& a, const RSConfig& cfg);

struct RSResponse {
  double point = 0.0;
  std::vector<double> value;
};

/// Interpolates u_0 ... u_{delta-1} from the first `delta` responses by a
/// dense solve of the Vandermonde system. Throws SingularSystem when fewer
/// than delta responses are given or two of the used points coincide.
std::vector<std::vector<double>> rs_decode(std::span<const RSResponse> responses, const RSConfig& cfg);

/// Square Vandermonde matrix V(a, j) = points[a]^j, row-major.
std::vector<double> vandermonde(std::span<const double> points);

/// sigma_max / sigma_min of the square Vandermonde matrix of `points`.
double condition_number(std::span<const double> points);

}  // namespace cpmv
