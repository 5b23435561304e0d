// SPDX-License-Identifier: Apache-2.0

#include "cpmv/matrix.hpp"

#include <algorithm>
#include <limits>

#include "cpmv/errors.hpp"

namespace cpmv {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

DenseMatrix slice_rows(const DenseMatrix& m, std::size_t begin, std::size_t count) {
  DenseMatrix out(count, m.cols());
  for (std::size_t r = 0; r < count && begin + r < m.rows(); ++r)
    std::copy_n(m.row(begin + r).begin(), m.cols(), &out.at(r, 0));
  return out;
}

CsrMatrix slice_rows(const CsrMatrix& m, std::size_t begin, std::size_t count) {
  const auto rp = m.row_ptr();
  const std::size_t end = std::min(begin + count, m.rows());
  const std::size_t lo = begin < m.rows() ? rp[begin] : m.nnz();
  const std::size_t hi = begin < m.rows() ? rp[end] : m.nnz();
  std::vector<std::size_t> row_ptr(count + 1, hi - lo);
  for (std::size_t r = begin; r < end; ++r) row_ptr[r - begin] = rp[r] - lo;
  std::vector<std::uint32_t> idx(m.col_idx().begin() + static_cast<std::ptrdiff_t>(lo),
                                 m.col_idx().begin() + static_cast<std::ptrdiff_t>(hi));
  std::vector<double> val(m.values().begin() + static_cast<std::ptrdiff_t>(lo),
                          m.values().begin() + static_cast<std::ptrdiff_t>(hi));
  return CsrMatrix(count, m.cols(), std::move(row_ptr), std::move(idx), std::move(val));
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw ShapeMismatch("DenseMatrix: data size does not match shape");
}

std::size_t DenseMatrix::nnz() const {
  return static_cast<std::size_t>(
      std::count_if(data_.begin(), data_.end(), [](double v) { return v != 0.0; }));
}

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::uint32_t> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.front() != 0 || row_ptr_.back() != values_.size())
    throw ShapeMismatch("CsrMatrix: inconsistent row pointers");
  if (cols_ > std::numeric_limits<std::uint32_t>::max())
    throw ShapeMismatch("CsrMatrix: too many columns");
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r] > row_ptr_[r + 1])
      throw ShapeMismatch("CsrMatrix: row pointers must be nondecreasing");
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      if (col_idx_[p] >= cols_) throw ShapeMismatch("CsrMatrix: column out of range");
      if (p > row_ptr_[r] && col_idx_[p] <= col_idx_[p - 1])
        throw ShapeMismatch("CsrMatrix: columns must be strictly increasing");
    }
  }
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& m) {
  std::vector<std::size_t> row_ptr(m.rows() + 1, 0);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (row[c] != 0.0) {
        idx.push_back(static_cast<std::uint32_t>(c));
        val.push_back(row[c]);
      }
    row_ptr[r + 1] = val.size();
  }
  return CsrMatrix(m.rows(), m.cols(), std::move(row_ptr), std::move(idx), std::move(val));
}

CsrMatrix CsrMatrix::from_triplets(
    std::size_t rows, std::size_t cols,
    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t t = 0; t < triplets.size();) {
    const auto [r, c, v0] = triplets[t];
    if (r >= rows || c >= cols) throw ShapeMismatch("triplet outside matrix shape");
    double v = v0;
    std::size_t u = t + 1;
    while (u < triplets.size() && std::get<0>(triplets[u]) == r && std::get<1>(triplets[u]) == c)
      v += std::get<2>(triplets[u++]);
    if (v != 0.0) {
      idx.push_back(static_cast<std::uint32_t>(c));
      val.push_back(v);
      ++row_ptr[r + 1];
    }
    t = u;
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(idx), std::move(val));
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) out.at(r, col_idx_[p]) = values_[p];
  return out;
}

std::size_t rows(const MatrixBlock& m) {
  return std::visit([](const auto& b) { return b.rows(); }, m);
}
std::size_t cols(const MatrixBlock& m) {
  return std::visit([](const auto& b) { return b.cols(); }, m);
}
std::size_t nnz(const MatrixBlock& m) {
  return std::visit([](const auto& b) { return b.nnz(); }, m);
}
double sparsity(const MatrixBlock& m) {
  const double total = static_cast<double>(rows(m)) * static_cast<double>(cols(m));
  return total == 0.0 ? 1.0 : 1.0 - static_cast<double>(nnz(m)) / total;
}
bool is_sparse(const MatrixBlock& m) { return std::holds_alternative<CsrMatrix>(m); }

DenseMatrix to_dense(const MatrixBlock& m) {
  return std::visit(overloaded{[](const DenseMatrix& d) { return d; },
                               [](const CsrMatrix& s) { return s.to_dense(); }},
                    m);
}

std::vector<double> dense_matvec(const DenseMatrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) throw ShapeMismatch("dense_matvec: length mismatch");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

std::vector<double> sparse_matvec(const CsrMatrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) throw ShapeMismatch("sparse_matvec: length mismatch");
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto v = m.values();
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) acc += v[p] * x[ci[p]];
    y[r] = acc;
  }
  return y;
}

std::vector<double> multiply(const MatrixBlock& m, std::span<const double> x) {
  return std::visit(overloaded{[&](const DenseMatrix& d) { return dense_matvec(d, x); },
                               [&](const CsrMatrix& s) { return sparse_matvec(s, x); }},
                    m);
}

MatrixBlock linear_combination(std::span<const std::pair<const MatrixBlock*, double>> terms,
                               std::size_t nrows, std::size_t ncols, bool sparse) {
  for (const auto& [blk, coeff] : terms) {
    if (rows(*blk) != nrows || cols(*blk) != ncols)
      throw ShapeMismatch("linear_combination: block shape mismatch");
    if (is_sparse(*blk) != sparse)
      throw ShapeMismatch("linear_combination: mixed storage kinds");
  }

  if (!sparse) {
    std::vector<double> acc(nrows * ncols, 0.0);
    for (const auto& [blk, coeff] : terms) {
      const auto src = std::get<DenseMatrix>(*blk).data();
      for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += coeff * src[t];
    }
    return DenseMatrix(nrows, ncols, std::move(acc));
  }

  // Sparse accumulator: one dense scratch row plus the list of touched columns.
  std::vector<double> scratch(ncols, 0.0);
  std::vector<char> touched(ncols, 0);
  std::vector<std::uint32_t> cols_in_row;
  std::vector<std::size_t> row_ptr(nrows + 1, 0);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t r = 0; r < nrows; ++r) {
    cols_in_row.clear();
    for (const auto& [blk, coeff] : terms) {
      const auto& m = std::get<CsrMatrix>(*blk);
      const auto rp = m.row_ptr();
      for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) {
        const std::uint32_t c = m.col_idx()[p];
        if (!touched[c]) {
          touched[c] = 1;
          cols_in_row.push_back(c);
        }
        scratch[c] += coeff * m.values()[p];
      }
    }
    std::sort(cols_in_row.begin(), cols_in_row.end());
    for (std::uint32_t c : cols_in_row) {
      if (scratch[c] != 0.0) {
        idx.push_back(c);
        val.push_back(scratch[c]);
      }
      scratch[c] = 0.0;
      touched[c] = 0;
    }
    row_ptr[r + 1] = val.size();
  }
  return CsrMatrix(nrows, ncols, std::move(row_ptr), std::move(idx), std::move(val));
}

BlockMatrix::BlockMatrix(const MatrixBlock& full, int delta)
    : rows_(cpmv::rows(full)), cols_(cpmv::cols(full)), sparse_(is_sparse(full)) {
  if (delta < 1) throw ShapeMismatch("BlockMatrix: delta must be positive");
  const auto d = static_cast<std::size_t>(delta);
  block_rows_ = (rows_ + d - 1) / d;
  if (block_rows_ == 0) block_rows_ = 1;
  blocks_.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t begin = j * block_rows_;
    blocks_.push_back(std::visit(
        [&](const auto& m) -> MatrixBlock { return slice_rows(m, begin, block_rows_); }, full));
  }
}

}  // namespace cpmv
