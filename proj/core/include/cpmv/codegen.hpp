// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "cpmv/laurent_poly.hpp"

namespace cpmv {

/// Parameters of a CP(n, k) code: n workers, k message streams, resilience
/// to s = n - k stragglers.
struct CodeParams {
  int n = 0;
  int k = 0;

  int s() const noexcept { return n - k; }
  /// Throws InvalidParams unless 1 <= k < n.
  void validate() const;

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

/// Dense rows x cols grid of Laurent polynomials.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  LaurentPoly& at(int r, int c);
  const LaurentPoly& at(int r, int c) const;

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<LaurentPoly> entries_;
};

PolyMatrix transpose(const PolyMatrix& m);

/// s x n matrix with entry (m, j) = D^(m*j).
PolyMatrix build_parity_check(const CodeParams& params);

/// k x s block Z of the systematic generator, formed entrywise as
///   Z_ij = -prod_{l != j} (D^(s+i) - D^l) / (D^j - D^l)
/// with exact division. Every entry is checked to be an integral polynomial;
/// a failure there throws std::logic_error.
PolyMatrix compute_z(const CodeParams& params);

/// Geometric-series product forms of Z_ij for s = 2 and s = 3. Throws
/// Unsupported for any other s, InvalidParams for out-of-range (i, j).
LaurentPoly closed_form_z(const CodeParams& params, int i, int j);

/// Systematic feed-forward generator [Z | I_k], k x n.
PolyMatrix build_generator(const CodeParams& params);

/// True iff G * H^T is identically zero. Throws DimensionMismatch when
/// G and H do not have the same number of columns.
bool verify_orthogonality(const PolyMatrix& g, const PolyMatrix& h);

/// Per-column span d_j (max exponent minus min exponent over the nonzero
/// entries of column j). Throws ZeroColumn for an all-zero column.
std::vector<int> column_spans(const PolyMatrix& g);
int lambda_of(const PolyMatrix& g);

struct CoefficientReport {
  struct Entry {
    int row = 0;
    int col = 0;
    Rational max_abs;
    bool integral = true;
  };
  CodeParams params;
  std::vector<Entry> entries;  // row-major over Z
  std::vector<Rational> column_max;
  Rational overall_max;
  bool all_integral = true;
  /// False when s > 3; there is no published bound to check against.
  bool bound_applies = false;
  /// 1 for s == 2, k for s == 3.
  Rational bound;
  bool within_bound = true;
};

CoefficientReport coefficient_report(const PolyMatrix& z,
                                     const CodeParams& params);

}  // namespace cpmv
