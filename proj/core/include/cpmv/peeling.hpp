// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cpmv/codegen.hpp"
#include "cpmv/errors.hpp"
#include "cpmv/planner.hpp"

namespace cpmv {

/// Where the symbols of each column live. Rows are global exponents of D;
/// column j holds rows [offsets[j], offsets[j] + lengths[j]) and is a
/// structural zero everywhere else.
struct GridShape {
  CodeParams params;
  std::vector<int> offsets;
  std::vector<int> lengths;

  static GridShape for_plan(const JobPlan& plan);

  int n() const noexcept { return params.n; }
  int row_begin(int col) const { return offsets.at(static_cast<std::size_t>(col)); }
  int row_end(int col) const { return row_begin(col) + lengths.at(static_cast<std::size_t>(col)); }
  bool in_support(int row, int col) const { return row >= row_begin(col) && row < row_end(col); }
  /// First row of the causal frame every column is measured from: min(0, offsets).
  int origin() const;
};

struct LinePoint {
  int row = 0;
  int col = 0;
  bool structural = false;  // outside the column's support, hence zero
  friend bool operator==(const LinePoint&, const LinePoint&) = default;
};

/// The n grid positions (line - slope*j, j) of one constraint line.
std::vector<LinePoint> line_symbols(const GridShape& shape, int slope, int line);

/// Sorted, distinct worker indices in [0, n).
class StragglerSet {
 public:
  StragglerSet() = default;
  /// Sorts and validates; throws InvalidParams on duplicates or range errors.
  StragglerSet(std::vector<int> indices, int n);

  std::span<const int> indices() const noexcept { return indices_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  int operator[](int rank) const { return indices_.at(static_cast<std::size_t>(rank)); }
  bool contains(int worker) const {
    return std::binary_search(indices_.begin(), indices_.end(), worker);
  }

 private:
  std::vector<int> indices_;
};

struct DecodeStep {
  int row = 0;
  int col = 0;
  int slope = 0;
  int line = 0;
  int phase = 0;
};

struct DecodeTrace {
  std::vector<DecodeStep> steps;
  /// phase_counts[p][y]: positions of straggler rank y covered (peeled or
  /// found already known) once phase p has finished, for p < |S| - 1.
  std::vector<std::vector<int>> phase_counts;
};

struct DecodeOptions {
  /// Recover every straggler symbol instead of stopping once all systematic
  /// symbols are known.
  bool full_grid = false;
};

/// Closed-form count of symbols recovered from straggler rank y once phase p
/// has finished: sum_{i=y}^{p} (s-1-i)(t_{i+1} - t_i), or 0 when y > p.
int eta(int p, int y, const StragglerSet& stragglers, int s);

/// Row shift between the slope-(s-1-w) and slope-(s-1-u) lines through one
/// symbol of straggler t_u, measured where they meet straggler t_v.
int intersection_offset(int t_u, int t_v, int u, int w);

/// Per-symbol values with known/unknown flags over a GridShape. T is double
/// for simulation or Rational for exact checks.
template <class T>
class SymbolGrid {
 public:
  using Symbol = std::vector<T>;

  SymbolGrid(GridShape shape, std::size_t block_len)
      : shape_(std::move(shape)), block_len_(block_len), zero_(block_len, T(0)) {
    for (int j = 0; j < shape_.n(); ++j) {
      const auto len = static_cast<std::size_t>(shape_.lengths.at(static_cast<std::size_t>(j)));
      values_.emplace_back(len, Symbol(block_len, T(0)));
      known_.emplace_back(len, 0);
    }
  }

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t block_len() const noexcept { return block_len_; }

  bool is_known(int row, int col) const {
    return !shape_.in_support(row, col) || known_[static_cast<std::size_t>(col)][slot(row, col)];
  }
  bool column_known(int col) const {
    const auto& k = known_.at(static_cast<std::size_t>(col));
    return std::all_of(k.begin(), k.end(), [](char v) { return v != 0; });
  }
  /// Value at (row, col); the zero symbol outside the support.
  const Symbol& value(int row, int col) const {
    if (!shape_.in_support(row, col)) return zero_;
    return values_[static_cast<std::size_t>(col)][slot(row, col)];
  }
  /// Stores a symbol. Throws std::logic_error when the position is outside
  /// the support or already known.
  void set_known(int row, int col, Symbol v) {
    if (!shape_.in_support(row, col))
      throw std::logic_error("set_known: (" + std::to_string(row) + "," + std::to_string(col) +
                             ") is a structural zero");
    auto& flag = known_[static_cast<std::size_t>(col)][slot(row, col)];
    if (flag) throw std::logic_error("set_known: symbol already known");
    if (v.size() != block_len_) throw ShapeMismatch("set_known: symbol length mismatch");
    values_[static_cast<std::size_t>(col)][slot(row, col)] = std::move(v);
    flag = 1;
  }
  /// Fills column col from its task outputs in slot order.
  void set_column(int col, std::vector<Symbol> symbols) {
    if (static_cast<int>(symbols.size()) != shape_.lengths.at(static_cast<std::size_t>(col)))
      throw ShapeMismatch("set_column: wrong number of symbols for column " + std::to_string(col));
    const int base = shape_.row_begin(col);
    for (std::size_t t = 0; t < symbols.size(); ++t)
      set_known(base + static_cast<int>(t), col, std::move(symbols[t]));
  }

 private:
  std::size_t slot(int row, int col) const {
    return static_cast<std::size_t>(row - shape_.row_begin(col));
  }

  GridShape shape_;
  std::size_t block_len_;
  Symbol zero_;
  std::vector<std::vector<Symbol>> values_;
  std::vector<std::vector<char>> known_;
};

/// Solves the slope-`slope` line through index `line` for its single unknown
/// and returns that position (row, col). Throws NotPeelable when the line
/// has zero or several unknowns.
template <class T>
std::pair<int, int> peel_step(SymbolGrid<T>& grid, int slope, int line) {
  const auto points = line_symbols(grid.shape(), slope, line);
  const LinePoint* target = nullptr;
  int unknown = 0;
  for (const auto& p : points)
    if (!p.structural && !grid.is_known(p.row, p.col)) {
      ++unknown;
      target = &p;
    }
  if (unknown != 1)
    throw NotPeelable("line slope=" + std::to_string(slope) + " index=" + std::to_string(line) +
                      " has " + std::to_string(unknown) + " unknowns");

  typename SymbolGrid<T>::Symbol acc(grid.block_len(), T(0));
  for (const auto& p : points) {
    if (p.structural || &p == target) continue;
    const auto& v = grid.value(p.row, p.col);
    for (std::size_t e = 0; e < acc.size(); ++e) acc[e] -= v[e];
  }
  grid.set_known(target->row, target->col, std::move(acc));
  return {target->row, target->col};
}

/// Peeling decoder over the straggler columns.
///
/// Stragglers t_0 < ... < t_{r-1} are processed in phases. Phase p
/// (p < r-1) runs (r-1-p)(t_{p+1} - t_p) rounds; each round advances
/// stragglers q = p, p-1, ..., 0 by one row using slope r-1-q. The final
/// block repeats rounds over q = r-1, ..., 0 until every straggler column is
/// exhausted. Rows are walked from the causal origin so positions above a
/// column's first task count as already-known zeros. With r < s only the
/// first r slopes are used, which is the CP(n, n-r) code embedded in the
/// same grid.
///
/// Throws IncompleteDecode if a non-straggler column is not fully known and
/// UnrecoverablePattern if more than s columns are missing.
template <class T>
DecodeTrace decode(SymbolGrid<T>& grid, const StragglerSet& stragglers, DecodeOptions options = {}) {
  const GridShape& shape = grid.shape();
  const int n = shape.n();
  const int s = shape.params.s();
  const int r = stragglers.size();
  if (r > s)
    throw UnrecoverablePattern(std::to_string(r) + " stragglers exceed resilience " +
                               std::to_string(s));
  for (int j = 0; j < n; ++j)
    if (!stragglers.contains(j) && !grid.column_known(j))
      throw IncompleteDecode("non-straggler column " + std::to_string(j) + " is incomplete");

  DecodeTrace trace;
  if (r == 0) return trace;

  const int origin = shape.origin();
  std::vector<int> next(static_cast<std::size_t>(r), origin);
  std::vector<int> covered(static_cast<std::size_t>(r), 0);

  auto exhausted = [&](int q) { return next[static_cast<std::size_t>(q)] >= shape.row_end(stragglers[q]); };
  auto systematic_done = [&] {
    for (int q = 0; q < r; ++q)
      if (stragglers[q] >= s && !exhausted(q)) return false;
    return true;
  };
  auto advance = [&](int q, int phase) {
    if (exhausted(q)) return;
    const int col = stragglers[q];
    const int row = next[static_cast<std::size_t>(q)]++;
    ++covered[static_cast<std::size_t>(q)];
    if (grid.is_known(row, col)) return;
    const int slope = r - 1 - q;
    const int line = row + slope * col;
    peel_step(grid, slope, line);
    trace.steps.push_back({row, col, slope, line, phase});
  };
  auto done = [&] {
    if (!options.full_grid) return systematic_done();
    for (int q = 0; q < r; ++q)
      if (!exhausted(q)) return false;
    return true;
  };

  for (int p = 0; p + 1 < r; ++p) {
    const int rounds = (r - 1 - p) * (stragglers[p + 1] - stragglers[p]);
    for (int round = 0; round < rounds; ++round)
      for (int q = p; q >= 0; --q) advance(q, p);
    trace.phase_counts.push_back(covered);
    if (done()) return trace;
  }
  while (!done()) {
    for (int q = r - 1; q >= 0; --q) advance(q, r - 1);
  }
  return trace;
}

/// Concatenates the systematic columns s..n-1 (u_0 ... u_{delta-1}) and keeps
/// the first `rows` entries. Throws IncompleteDecode if any systematic
/// symbol is unknown.
template <class T>
std::vector<T> assemble_result(const SymbolGrid<T>& grid, const JobPlan& plan, std::size_t rows) {
  const int s = plan.params.s();
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(plan.delta) * grid.block_len());
  for (int i = 0; i < plan.params.k; ++i) {
    const int col = s + i;
    const int base = grid.shape().row_begin(col);
    for (int t = 0; t < plan.q; ++t) {
      if (!grid.is_known(base + t, col))
        throw IncompleteDecode("systematic symbol (" + std::to_string(base + t) + "," +
                               std::to_string(col) + ") is unknown");
      const auto& v = grid.value(base + t, col);
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  if (rows > out.size()) throw ShapeMismatch("assemble_result: requested more rows than decoded");
  out.resize(rows);
  return out;
}

}  // namespace cpmv
