// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "cpmv/matrix.hpp"
#include "cpmv/peeling.hpp"
#include "cpmv/planner.hpp"
#include "cpmv/rs_baseline.hpp"

namespace cpmv {

struct StragglerPolicy {
  enum class Mode { ExplicitSet, RandomDelay, FailStopRandom };

  Mode mode = Mode::ExplicitSet;
  /// ExplicitSet: these workers never respond.
  std::vector<int> workers;
  /// FailStopRandom: this many workers, drawn uniformly, never respond.
  int count = 0;
  /// When positive, every worker starts after an Exp(mean_delay) virtual
  /// delay. RandomDelay relies on it to decide who straggles; the other
  /// modes use it to randomize arrival order.
  double mean_delay = 0.0;
};

struct NoiseModel {
  enum class Reference { PerTask, Global };

  /// No noise when empty.
  std::optional<double> snr_db;
  /// PerTask: noise variance is the mean square of each task's output times
  /// 10^(-snr/10). Global: reference_power replaces the per-task power.
  Reference reference = Reference::PerTask;
  double reference_power = 0.0;
};

enum class ClockMode { Virtual, Wall };

struct RunOptions {
  ClockMode clock = ClockMode::Virtual;
  /// Run each worker on its own thread; otherwise one after another.
  bool concurrent = true;
  /// Wall timing keeps the fastest of this many repetitions per task.
  int timing_repeats = 1;
  /// Virtual cost of one task: seconds_per_nnz * nnz + seconds_per_row * rows.
  double seconds_per_nnz = 1e-9;
  double seconds_per_row = 1e-9;
};

struct TaskRecord {
  int worker = 0;
  int task = 0;
  double start = 0.0;  // per the selected clock, seconds
  double end = 0.0;
  std::size_t nnz = 0;
  double wall_seconds = 0.0;  // always measured
};

struct WorkerOutput {
  int worker = 0;
  bool failed = false;
  std::vector<std::vector<double>> results;
  std::vector<double> finish_times;  // virtual completion time of each task
};

struct RunResult {
  std::vector<WorkerOutput> workers;  // indexed by worker
  std::vector<TaskRecord> trace;      // ordered by (worker, task)
  std::vector<int> failed;
  std::vector<double> start_delays;
  /// Sum of task durations per worker, per the selected clock.
  std::vector<double> busy_time;
};

/// Multiple-producer single-consumer queue between workers and the master.
template <class T>
class Channel {
 public:
  void send(T value) {
    {
      std::lock_guard lock(mu_);
      queue_.push_back(std::move(value));
    }
    cv_.notify_one();
  }
  T receive() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !queue_.empty(); });
    T v = std::move(queue_.front());
    queue_.pop_front();
    return v;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> queue_;
};

/// Executes every worker's jobs against x. Failed workers compute nothing.
/// Results and virtual times depend only on (jobs, x, policy, noise, seed).
RunResult run_workers(const std::vector<std::vector<MatrixBlock>>& jobs, std::span<const double> x,
                      const StragglerPolicy& policy, const NoiseModel& noise, std::uint64_t seed,
                      const RunOptions& options = {});

struct CpOutcome {
  std::vector<double> result;
  StragglerSet erased;
  std::vector<int> responders;
  DecodeTrace trace;
  RunResult run;
};

struct CpCollectOptions {
  /// Decode with every worker that finished instead of the fastest n - s.
  bool accept_all = false;
  DecodeOptions decode;
};

/// Runs the CP scheme end to end: workers, collection of the fastest n - s
/// complete columns, peeling decode, assembly of the first `rows` entries.
/// Throws UnrecoverablePattern when more than s workers fail.
CpOutcome simulate_cp(const JobPlan& plan, const std::vector<std::vector<MatrixBlock>>& coded,
                      std::span<const double> x, std::size_t rows, const StragglerPolicy& policy,
                      const NoiseModel& noise, std::uint64_t seed, const RunOptions& options = {},
                      const CpCollectOptions& collect = {});

/// Builds the symbol grid from the chosen responders' outputs.
SymbolGrid<double> collect_cp_grid(const JobPlan& plan, const RunResult& run,
                                   std::span<const int> responders, std::size_t block_len);

struct RsOutcome {
  std::vector<double> result;
  std::vector<double> used_points;
  RunResult run;
};

/// Runs the RS baseline: the first `delta` task responses by virtual arrival
/// time are interpolated.
RsOutcome simulate_rs(const RSConfig& cfg, const std::vector<std::vector<MatrixBlock>>& coded,
                      std::span<const double> x, std::size_t rows, const StragglerPolicy& policy,
                      const NoiseModel& noise, std::uint64_t seed, const RunOptions& options = {});

/// N x N matrix with i.i.d. standard normal entries on diagonals -b..b.
CsrMatrix gen_banded(std::size_t n, std::size_t b, std::uint64_t seed);
/// N(2b+1) - b(b+1)
std::size_t banded_nnz(std::size_t n, std::size_t b);
/// Bandwidth whose sparsity is closest to `target` (ties to the denser band).
std::size_t bandwidth_for_sparsity(std::size_t n, double target);

DenseMatrix gen_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed);
std::vector<double> gen_vector(std::size_t len, std::uint64_t seed);

/// 100 * ||y - y_hat|| / ||y||. Throws DomainError for a zero reference.
double error_percentage(std::span<const double> y, std::span<const double> y_hat);

/// Deterministic 64-bit seed for a named stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace cpmv
