// SPDX-License-Identifier: Apache-2.0

#include "cpmv/peeling.hpp"

#include <algorithm>

namespace cpmv {

GridShape GridShape::for_plan(const JobPlan& plan) {
  GridShape shape;
  shape.params = plan.params;
  for (const auto& w : plan.workers) {
    shape.offsets.push_back(w.offset);
    shape.lengths.push_back(w.length());
  }
  return shape;
}

int GridShape::origin() const {
  int lo = 0;
  for (int o : offsets) lo = std::min(lo, o);
  return lo;
}

std::vector<LinePoint> line_symbols(const GridShape& shape, int slope, int line) {
  std::vector<LinePoint> out;
  out.reserve(static_cast<std::size_t>(shape.n()));
  for (int j = 0; j < shape.n(); ++j) {
    const int row = line - slope * j;
    out.push_back({row, j, !shape.in_support(row, j)});
  }
  return out;
}

StragglerSet::StragglerSet(std::vector<int> indices, int n) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw InvalidParams("straggler set contains duplicates");
  for (int t : indices_)
    if (t < 0 || t >= n) throw InvalidParams("straggler index " + std::to_string(t) + " out of range");
}

int eta(int p, int y, const StragglerSet& stragglers, int s) {
  if (y > p) return 0;
  int total = 0;
  for (int i = y; i <= p; ++i) total += (s - 1 - i) * (stragglers[i + 1] - stragglers[i]);
  return total;
}

int intersection_offset(int t_u, int t_v, int u, int w) { return -(t_v - t_u) * (u - w); }

}  // namespace cpmv
