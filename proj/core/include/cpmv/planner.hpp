// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cpmv/codegen.hpp"
#include "cpmv/matrix.hpp"

namespace cpmv {

/// Fraction gamma of A's rows a single worker may store.
struct StorageBudget {
  Rational gamma;

  /// Accepts "3/10", "0.3" or "1".
  static StorageBudget parse(std::string_view text);
};

/// One coded job: sum of coefficient * A_block, block indices strictly
/// increasing, coefficients nonzero. An empty term list is the zero job.
struct Task {
  struct Term {
    int block = 0;
    std::int64_t coefficient = 0;
    friend bool operator==(const Term&, const Term&) = default;
  };
  std::vector<Term> terms;

  friend bool operator==(const Task&, const Task&) = default;
};

struct WorkerJobs {
  /// Exponent of D at which this worker's first task sits.
  int offset = 0;
  std::vector<Task> tasks;
  int length() const noexcept { return static_cast<int>(tasks.size()); }
};

/// Per-worker ordered job lists for computing A x through a CP(n, k) code.
struct JobPlan {
  CodeParams params;
  int delta = 0;
  int q = 0;  // delta / k block-rows per message stream
  int lambda = 0;
  std::vector<int> spans;  // d_j per generator column
  std::vector<WorkerJobs> workers;

  int max_length() const;
};

/// Smallest multiple of k (and at least k) with delta >= lambda/(gamma - 1/k).
/// Throws InfeasibleBudget when gamma <= 1/k.
int choose_delta(const CodeParams& params, const StorageBudget& budget, int lambda);

/// Expands U(D) = [u~_0 ... u~_{k-1}] G(D) with the block indices kept
/// symbolic. Throws BadDelta unless delta is a positive multiple of k.
JobPlan build_plan(const CodeParams& params, int delta);
JobPlan build_plan(const CodeParams& params, const PolyMatrix& generator, int delta);

/// Checks every slope-m constraint line (m < s) of the symbolic grid cancels.
bool verify_plan(const JobPlan& plan);

/// max_j l_j <= gamma * delta
bool validate_storage(const JobPlan& plan, const StorageBudget& budget);

/// Coded submatrices per worker: task t of worker j is sum coeff * A_block.
/// Throws ShapeMismatch if A is not partitioned into plan.delta blocks.
std::vector<std::vector<MatrixBlock>> materialize(const JobPlan& plan, const BlockMatrix& a);

struct SparsityReport {
  std::vector<double> worker_sparsity;  // zero fraction over all stored blocks
  double worst_parity = 1.0;            // min over workers 0..s-1
  double worst_systematic = 1.0;        // min over workers s..n-1
};

SparsityReport sparsity_report(const JobPlan& plan,
                               const std::vector<std::vector<MatrixBlock>>& coded);

/// Aggregate zero fraction over a set of blocks.
double aggregate_sparsity(const std::vector<MatrixBlock>& blocks);

/// "+A0 +A4", "-A1 -A2 +3*A5"
std::string render_task(const Task& task);

}  // namespace cpmv
