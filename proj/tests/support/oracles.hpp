// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations used only by tests. Each one takes a different
// route from the library code it checks.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "cpmv/codegen.hpp"
#include "cpmv/matrix.hpp"
#include "cpmv/peeling.hpp"
#include "cpmv/planner.hpp"

namespace cpmv::oracle {

/// sum_e c_e d^e with every power formed by repeated multiplication.
inline Rational eval_exact(const LaurentPoly& p, const Rational& d) {
  Rational total = 0;
  for (std::size_t t = 0; t < p.coeffs().size(); ++t) {
    const int e = p.min_exp() + static_cast<int>(t);
    Rational power = 1;
    for (int r = 0; r < std::abs(e); ++r) power *= d;
    if (e < 0) power = 1 / power;
    total += p.coeffs()[t] * power;
  }
  return total;
}

inline Rational pow_exact(const Rational& d, int e) {
  Rational power = 1;
  for (int r = 0; r < e; ++r) power *= d;
  return power;
}

/// Z_ij evaluated at D = d straight from the Lagrange-style product.
inline Rational z_at(int s, int i, int j, const Rational& d) {
  Rational num = 1;
  Rational den = 1;
  for (int l = 0; l < s; ++l) {
    if (l == j) continue;
    num *= pow_exact(d, s + i) - pow_exact(d, l);
    den *= pow_exact(d, j) - pow_exact(d, l);
  }
  return -num / den;
}

inline Rational h_at(int m, int j, const Rational& d) { return pow_exact(d, m * j); }

/// Row-by-row triple loop on the dense form.
inline std::vector<double> matvec(const MatrixBlock& m, std::span<const double> x) {
  const DenseMatrix d = to_dense(m);
  std::vector<double> y(d.rows(), 0.0);
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (std::size_t c = 0; c < d.cols(); ++c) y[r] += d.at(r, c) * x[c];
  return y;
}

inline double rel_error(std::span<const double> want, std::span<const double> got) {
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    diff += (want[i] - got[i]) * (want[i] - got[i]);
    ref += want[i] * want[i];
  }
  return ref == 0.0 ? std::sqrt(diff) : std::sqrt(diff / ref);
}

/// Codeword symbols c_j at every exponent, from the polynomial products
/// u~_i(D) * G_ij(D) with u~_i(D) = sum_t u[i*q + t] D^t. Keyed by (row, col).
template <class T>
std::map<std::pair<int, int>, std::vector<T>> codeword(const CodeParams& params, const PolyMatrix& g, int q,
                                                     const std::vector<std::vector<T>>& u) {
  std::map<std::pair<int, int>, std::vector<T>> out;
  const std::size_t len = u.front().size();
  for (int j = 0; j < params.n; ++j)
    for (int i = 0; i < params.k; ++i) {
      const auto& entry = g.at(i, j);
      for (std::size_t a = 0; a < entry.coeffs().size(); ++a) {
        const int exp = entry.min_exp() + static_cast<int>(a);
        const double c = entry.coeffs()[a].get_d();
        if (c == 0.0) continue;
        for (int t = 0; t < q; ++t) {
          auto& sym = out[{t + exp, j}];
          if (sym.empty()) sym.assign(len, T(0));
          const auto& src = u[static_cast<std::size_t>(i * q + t)];
          for (std::size_t e = 0; e < len; ++e) sym[e] += T(c) * src[e];
        }
      }
    }
  return out;
}

/// Least-squares recovery of the erased columns: every constraint line of
/// slope 0..s-1 touching an erased symbol becomes one equation, and the
/// stacked system is solved with a column-pivoting QR.
inline std::map<std::pair<int, int>, std::vector<double>> least_squares(
    const GridShape& shape, const std::map<std::pair<int, int>, std::vector<double>>& known,
    std::span<const int> erased, std::size_t block_len) {
  std::map<std::pair<int, int>, int> index;
  for (int c : erased)
    for (int r = shape.row_begin(c); r < shape.row_end(c); ++r) index[{r, c}] = static_cast<int>(index.size());

  int lo = 0, hi = 0;
  for (int j = 0; j < shape.n(); ++j) {
    lo = std::min(lo, shape.row_begin(j));
    hi = std::max(hi, shape.row_end(j));
  }
  const int s = shape.params.s();
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<std::vector<double>> rhs;
  for (int m = 0; m < s; ++m)
    for (int line = lo; line < hi + m * shape.n(); ++line) {
      std::vector<std::pair<int, double>> row;
      std::vector<double> b(block_len, 0.0);
      for (int j = 0; j < shape.n(); ++j) {
        const int r = line - m * j;
        if (!shape.in_support(r, j)) continue;
        if (auto it = index.find({r, j}); it != index.end()) {
          row.emplace_back(it->second, 1.0);
        } else {
          const auto& v = known.at({r, j});
          for (std::size_t e = 0; e < block_len; ++e) b[e] -= v[e];
        }
      }
      if (row.empty()) continue;
      rows.push_back(std::move(row));
      rhs.push_back(std::move(b));
    }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(index.size()));
  Eigen::MatrixXd b(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(block_len));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [col, v] : rows[r]) a(static_cast<Eigen::Index>(r), col) = v;
    for (std::size_t e = 0; e < block_len; ++e) b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) = rhs[r][e];
  }
  const Eigen::MatrixXd sol = a.colPivHouseholderQr().solve(b);

  std::map<std::pair<int, int>, std::vector<double>> out;
  for (const auto& [pos, idx] : index) {
    std::vector<double> v(block_len);
    for (std::size_t e = 0; e < block_len; ++e) v[e] = sol(idx, static_cast<Eigen::Index>(e));
    out[pos] = std::move(v);
  }
  return out;
}

/// Every subset of {0, ..., n-1} with at most max_size elements.
inline void for_each_subset(int n, int max_size, const std::function<void(const std::vector<int>&)>& fn) {
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> set;
    for (int b = 0; b < n; ++b)
      if (mask & (1u << b)) set.push_back(b);
    if (static_cast<int>(set.size()) <= max_size) fn(set);
  }
}

/// Every subset of exactly `size` elements.
inline void for_each_subset_of_size(int n, int size, const std::function<void(const std::vector<int>&)>& fn) {
  for_each_subset(n, size, [&](const std::vector<int>& s) {
    if (static_cast<int>(s.size()) == size) fn(s);
  });
}

}  // namespace cpmv::oracle
