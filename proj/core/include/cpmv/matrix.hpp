// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace cpmv {

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }
  std::size_t nnz() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Compressed sparse row storage: row_ptr has rows+1 entries, and row r owns
/// col_idx/values in [row_ptr[r], row_ptr[r+1]) with strictly increasing
/// column indices. Explicit zeros are never stored.
class CsrMatrix {
 public:
  CsrMatrix() : row_ptr_(1, 0) {}
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::uint32_t> col_idx, std::vector<double> values);

  static CsrMatrix from_dense(const DenseMatrix& m);
  /// Builds from unsorted (row, col, value) triplets; duplicates are summed.
  static CsrMatrix from_triplets(
      std::size_t rows, std::size_t cols,
      std::vector<std::tuple<std::size_t, std::size_t, double>> triplets);
  DenseMatrix to_dense() const;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::uint32_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;
};

/// A block-row of A or a coded combination of block-rows.
using MatrixBlock = std::variant<DenseMatrix, CsrMatrix>;

std::size_t rows(const MatrixBlock& m);
std::size_t cols(const MatrixBlock& m);
std::size_t nnz(const MatrixBlock& m);
/// Fraction of entries that are zero.
double sparsity(const MatrixBlock& m);
bool is_sparse(const MatrixBlock& m);
DenseMatrix to_dense(const MatrixBlock& m);

std::vector<double> dense_matvec(const DenseMatrix& m, std::span<const double> x);
/// y = M x touching only stored entries.
std::vector<double> sparse_matvec(const CsrMatrix& m, std::span<const double> x);
std::vector<double> multiply(const MatrixBlock& m, std::span<const double> x);

/// sum_t coeff_t * block_t. All blocks must share a shape and storage kind;
/// an empty term list yields a zero block of the given shape and kind.
MatrixBlock linear_combination(
    std::span<const std::pair<const MatrixBlock*, double>> terms,
    std::size_t rows, std::size_t cols, bool sparse);

/// A partitioned into `delta` equal block-rows. When the row count does not
/// divide evenly the tail is padded with zero rows.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  BlockMatrix(const MatrixBlock& full, int delta);

  int delta() const noexcept { return static_cast<int>(blocks_.size()); }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t block_rows() const noexcept { return block_rows_; }
  std::size_t padded_rows() const noexcept { return block_rows_ * blocks_.size(); }
  bool sparse() const noexcept { return sparse_; }
  const MatrixBlock& block(int j) const { return blocks_.at(static_cast<std::size_t>(j)); }
  std::span<const MatrixBlock> blocks() const noexcept { return blocks_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t block_rows_ = 0;
  bool sparse_ = false;
  std::vector<MatrixBlock> blocks_;
};

}  // namespace cpmv
