// SPDX-License-Identifier: Apache-2.0

#include "cpmv/laurent_poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpmv/errors.hpp"

namespace cpmv {

LaurentPoly LaurentPoly::monomial(const Rational& c, int exp) {
  LaurentPoly p;
  if (c != 0) {
    p.min_exp_ = exp;
    p.coeffs_.push_back(c);
  }
  return p;
}

LaurentPoly LaurentPoly::from_coeffs(int min_exp, std::vector<Rational> coeffs) {
  LaurentPoly p;
  p.min_exp_ = min_exp;
  p.coeffs_ = std::move(coeffs);
  p.canonicalize();
  return p;
}

LaurentPoly LaurentPoly::from_ints(int min_exp,
                                   std::initializer_list<long> coeffs) {
  std::vector<Rational> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.emplace_back(v);
  return from_coeffs(min_exp, std::move(c));
}

Rational LaurentPoly::coeff(int exp) const {
  if (is_zero() || exp < min_exp_ || exp > max_exp()) return 0;
  return coeffs_[static_cast<std::size_t>(exp - min_exp_)];
}

void LaurentPoly::canonicalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(),
                            [](const Rational& c) { return c != 0; });
  min_exp_ += static_cast<int>(first - coeffs_.begin());
  coeffs_.erase(coeffs_.begin(), first);
  if (coeffs_.empty()) min_exp_ = 0;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  const int lo = std::min(min_exp_, rhs.min_exp_);
  const int hi = std::max(max_exp(), rhs.max_exp());
  std::vector<Rational> out(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t t = 0; t < coeffs_.size(); ++t)
    out[t + static_cast<std::size_t>(min_exp_ - lo)] = coeffs_[t];
  for (std::size_t t = 0; t < rhs.coeffs_.size(); ++t)
    out[t + static_cast<std::size_t>(rhs.min_exp_ - lo)] += rhs.coeffs_[t];
  min_exp_ = lo;
  coeffs_ = std::move(out);
  canonicalize();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
  return *this += -rhs;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) {
  return *this = *this * rhs;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  // Over a field the leading coefficients cannot cancel, but canonicalize
  // anyway so the invariant is established in one place.
  return LaurentPoly::from_coeffs(a.min_exp_ + b.min_exp_, std::move(out));
}

LaurentPoly operator-(const LaurentPoly& a) {
  LaurentPoly out = a;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b) { return a + b; }
LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }

LaurentPoly exact_div(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.is_zero()) throw DomainError("exact_div: division by zero polynomial");
  if (num.is_zero()) return {};

  // Monomials are units, so divisibility reduces to the ordinary polynomial
  // parts, both of which have a nonzero constant term in canonical form.
  std::span<const Rational> d = den.coeffs();
  std::vector<Rational> rem(num.coeffs().begin(), num.coeffs().end());
  if (rem.size() < d.size())
    throw NotDivisible("exact_div: " + to_string(num) + " / " + to_string(den));

  const std::size_t qlen = rem.size() - d.size() + 1;
  std::vector<Rational> quot(qlen);
  const Rational& lead = d.back();
  for (std::size_t step = qlen; step-- > 0;) {
    const Rational factor = rem[step + d.size() - 1] / lead;
    quot[step] = factor;
    if (factor == 0) continue;
    for (std::size_t t = 0; t < d.size(); ++t) rem[step + t] -= factor * d[t];
  }
  for (const auto& r : rem)
    if (r != 0)
      throw NotDivisible("exact_div: " + to_string(num) + " / " +
                         to_string(den));
  return LaurentPoly::from_coeffs(num.min_exp() - den.min_exp(),
                                  std::move(quot));
}

double eval_at(const LaurentPoly& p, double x) {
  if (p.is_zero()) return 0.0;
  if (x == 0.0) {
    if (p.min_exp() < 0)
      throw DomainError("eval_at: negative exponent evaluated at zero");
    return p.min_exp() == 0 ? p.coeffs().front().get_d() : 0.0;
  }
  // Horner on the ordinary part, then the monomial shift.
  double acc = 0.0;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
    acc = acc * x + it->get_d();
  return acc * std::pow(x, p.min_exp());
}

int span(const LaurentPoly& p) {
  if (p.is_zero()) throw DomainError("span: zero polynomial");
  return p.max_exp() - p.min_exp();
}

Rational max_abs_coeff(const LaurentPoly& p) {
  Rational best = 0;
  for (const auto& c : p.coeffs()) best = std::max<Rational>(best, abs(c));
  return best;
}

bool is_integral(const LaurentPoly& p) {
  return std::all_of(p.coeffs().begin(), p.coeffs().end(),
                     [](const Rational& c) { return c.get_den() == 1; });
}

std::string to_string(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int e = p.max_exp(); e >= p.min_exp(); --e) {
    const Rational c = p.coeff(e);
    if (c == 0) continue;
    const bool negative = c < 0;
    const Rational mag = abs(c);
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    if (e == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << '*';
    os << 'D';
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

}  // namespace cpmv
