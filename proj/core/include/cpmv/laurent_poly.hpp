// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cpmv {

using Rational = mpq_class;

/// Finite Laurent polynomial in the indeterminate D with exact rational
/// coefficients.
///
/// Stored canonically: coeffs()[t] is the coefficient of D^(min_exp() + t),
/// the first and last stored coefficients are nonzero, and the zero
/// polynomial has no coefficients and min_exp() == 0. Two polynomials are
/// equal iff their representations are equal.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  /// c * D^exp
  static LaurentPoly monomial(const Rational& c, int exp = 0);
  static LaurentPoly constant(const Rational& c) { return monomial(c, 0); }
  /// Builds sum_t coeffs[t] * D^(min_exp + t) and canonicalizes.
  static LaurentPoly from_coeffs(int min_exp, std::vector<Rational> coeffs);
  static LaurentPoly from_ints(int min_exp, std::initializer_list<long> coeffs);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  int min_exp() const noexcept { return min_exp_; }
  /// Highest exponent present; equals min_exp() for the zero polynomial.
  int max_exp() const noexcept {
    return coeffs_.empty() ? min_exp_
                           : min_exp_ + static_cast<int>(coeffs_.size()) - 1;
  }
  std::span<const Rational> coeffs() const noexcept { return coeffs_; }
  /// Coefficient of D^exp (zero outside the support).
  Rational coeff(int exp) const;

  LaurentPoly& operator+=(const LaurentPoly& rhs);
  LaurentPoly& operator-=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(const LaurentPoly& rhs);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
    return a += b;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) {
    return a -= b;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a);

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.min_exp_ == b.min_exp_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void canonicalize();

  int min_exp_ = 0;
  std::vector<Rational> coeffs_;
};

LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b);

/// Returns q with q * den == num. Throws NotDivisible when the polynomial
/// long division leaves a remainder, DomainError when den is zero.
LaurentPoly exact_div(const LaurentPoly& num, const LaurentPoly& den);

/// Numeric value at x. Throws DomainError for x == 0 when min_exp() < 0.
double eval_at(const LaurentPoly& p, double x);

/// max_exp - min_exp. Throws DomainError on the zero polynomial.
int span(const LaurentPoly& p);

Rational max_abs_coeff(const LaurentPoly& p);
bool is_integral(const LaurentPoly& p);

/// Descending-exponent rendering, e.g. "-D^2 - D - 1", "3*D^4 + 1/2*D^-1".
std::string to_string(const LaurentPoly& p);

}  // namespace cpmv
