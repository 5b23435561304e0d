// SPDX-License-Identifier: Apache-2.0

#include "cpmv/codegen.hpp"

#include <algorithm>
#include <stdexcept>

#include "cpmv/errors.hpp"

namespace cpmv {

namespace {

LaurentPoly d_pow(int e) { return LaurentPoly::monomial(1, e); }

// sum_{t=0}^{count-1} D^(first + step*t)
LaurentPoly stride_sum(int first, int count, int step) {
  LaurentPoly out;
  for (int t = 0; t < count; ++t) out += d_pow(first + step * t);
  return out;
}

}  // namespace

void CodeParams::validate() const {
  if (k < 1 || k >= n)
    throw InvalidParams("CP(n,k) requires 1 <= k < n, got n=" +
                        std::to_string(n) + " k=" + std::to_string(k));
}

PolyMatrix::PolyMatrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix size");
}

LaurentPoly& PolyMatrix::at(int r, int c) {
  return entries_.at(static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                     static_cast<std::size_t>(c));
}

const LaurentPoly& PolyMatrix::at(int r, int c) const {
  return entries_.at(static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                     static_cast<std::size_t>(c));
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("PolyMatrix product: inner dimensions differ");
  PolyMatrix out(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < b.cols(); ++c) {
      LaurentPoly acc;
      for (int t = 0; t < a.cols(); ++t) acc += a.at(r, t) * b.at(t, c);
      out.at(r, c) = std::move(acc);
    }
  return out;
}

PolyMatrix transpose(const PolyMatrix& m) {
  PolyMatrix out(m.cols(), m.rows());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out.at(c, r) = m.at(r, c);
  return out;
}

PolyMatrix build_parity_check(const CodeParams& params) {
  params.validate();
  const int s = params.s();
  PolyMatrix h(s, params.n);
  for (int m = 0; m < s; ++m)
    for (int j = 0; j < params.n; ++j) h.at(m, j) = d_pow(m * j);
  return h;
}

PolyMatrix compute_z(const CodeParams& params) {
  params.validate();
  const int s = params.s();
  PolyMatrix z(params.k, s);
  for (int i = 0; i < params.k; ++i) {
    for (int j = 0; j < s; ++j) {
      LaurentPoly num = LaurentPoly::constant(-1);
      LaurentPoly den = LaurentPoly::constant(1);
      for (int l = 0; l < s; ++l) {
        if (l == j) continue;
        num *= d_pow(s + i) - d_pow(l);
        den *= d_pow(j) - d_pow(l);
      }
      LaurentPoly entry;
      try {
        entry = exact_div(num, den);
      } catch (const NotDivisible& e) {
        throw std::logic_error(std::string("Z entry is not a polynomial: ") +
                               e.what());
      }
      if (!is_integral(entry))
        throw std::logic_error("Z entry has non-integer coefficients: " +
                               to_string(entry));
      z.at(i, j) = std::move(entry);
    }
  }
  return z;
}

LaurentPoly closed_form_z(const CodeParams& params, int i, int j) {
  params.validate();
  const int s = params.s();
  if (s != 2 && s != 3)
    throw Unsupported("closed_form_z is defined only for s = 2 and s = 3");
  if (i < 0 || i >= params.k || j < 0 || j >= s)
    throw InvalidParams("closed_form_z: index out of range");

  if (s == 2) {
    if (j == 0) return stride_sum(1, i + 1, 1);  // D + ... + D^(i+1)
    return -stride_sum(0, i + 2, 1);             // -(1 + ... + D^(i+1))
  }

  const bool even = i % 2 == 0;
  switch (j) {
    case 0:
      if (even)
        return -(d_pow(3) * stride_sum(0, i / 2 + 1, 2) * stride_sum(0, i + 1, 1));
      return -(d_pow(3) * stride_sum(0, i + 2, 1) * stride_sum(0, (i - 1) / 2 + 1, 2));
    case 1:
      return stride_sum(0, i + 3, 1) * stride_sum(1, i + 1, 1);
    default:
      if (even) return -(stride_sum(0, i + 3, 1) * stride_sum(0, i / 2 + 1, 2));
      return -(stride_sum(0, (i + 1) / 2 + 1, 2) * stride_sum(0, i + 2, 1));
  }
}

PolyMatrix build_generator(const CodeParams& params) {
  const PolyMatrix z = compute_z(params);
  const int s = params.s();
  PolyMatrix g(params.k, params.n);
  for (int i = 0; i < params.k; ++i) {
    for (int j = 0; j < s; ++j) g.at(i, j) = z.at(i, j);
    g.at(i, s + i) = LaurentPoly::constant(1);
  }
  return g;
}

bool verify_orthogonality(const PolyMatrix& g, const PolyMatrix& h) {
  if (g.cols() != h.cols())
    throw DimensionMismatch("verify_orthogonality: G has " +
                            std::to_string(g.cols()) + " columns, H has " +
                            std::to_string(h.cols()));
  const PolyMatrix product = g * transpose(h);
  for (int r = 0; r < product.rows(); ++r)
    for (int c = 0; c < product.cols(); ++c)
      if (!product.at(r, c).is_zero()) return false;
  return true;
}

std::vector<int> column_spans(const PolyMatrix& g) {
  std::vector<int> spans;
  spans.reserve(static_cast<std::size_t>(g.cols()));
  for (int c = 0; c < g.cols(); ++c) {
    bool any = false;
    int lo = 0;
    int hi = 0;
    for (int r = 0; r < g.rows(); ++r) {
      const LaurentPoly& p = g.at(r, c);
      if (p.is_zero()) continue;
      lo = any ? std::min(lo, p.min_exp()) : p.min_exp();
      hi = any ? std::max(hi, p.max_exp()) : p.max_exp();
      any = true;
    }
    if (!any) throw ZeroColumn("generator column " + std::to_string(c) + " is zero");
    spans.push_back(hi - lo);
  }
  return spans;
}

int lambda_of(const PolyMatrix& g) {
  const auto spans = column_spans(g);
  return spans.empty() ? 0 : *std::max_element(spans.begin(), spans.end());
}

CoefficientReport coefficient_report(const PolyMatrix& z,
                                     const CodeParams& params) {
  CoefficientReport rep;
  rep.params = params;
  rep.column_max.assign(static_cast<std::size_t>(z.cols()), Rational(0));
  rep.overall_max = 0;
  for (int i = 0; i < z.rows(); ++i) {
    for (int j = 0; j < z.cols(); ++j) {
      const LaurentPoly& p = z.at(i, j);
      CoefficientReport::Entry e{i, j, max_abs_coeff(p), is_integral(p)};
      rep.all_integral = rep.all_integral && e.integral;
      auto& col = rep.column_max[static_cast<std::size_t>(j)];
      if (e.max_abs > col) col = e.max_abs;
      if (e.max_abs > rep.overall_max) rep.overall_max = e.max_abs;
      rep.entries.push_back(std::move(e));
    }
  }
  const int s = params.s();
  if (s == 2 || s == 3) {
    rep.bound_applies = true;
    rep.bound = s == 2 ? Rational(1) : Rational(params.k);
    rep.within_bound = rep.overall_max <= rep.bound;
  }
  return rep;
}

}  // namespace cpmv
