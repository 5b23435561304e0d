// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpmv/config.hpp"
#include "cpmv/planner.hpp"
#include "cpmv/runtime.hpp"

namespace cpmv {

/// Output error of both schemes under additive noise on every task output.
/// Each trial draws a fresh Gaussian A and x and a random set of
/// `stragglers` failed workers shared by both schemes.
struct SnrSweepConfig {
  std::size_t rows = 800;
  std::size_t cols = 1000;
  int n = 7;
  int k = 4;
  std::string gamma = "3/10";
  int rs_delta = 10;
  int rs_jobs_per_worker = 3;
  /// +infinity disables noise for that level.
  std::vector<double> snr_db = {70, 75, 80, 85, 90, 95, 100, 105, 110, 115};
  int trials = 20;
  /// Failed workers per trial; negative means s = n - k.
  int stragglers = -1;
  NoiseModel::Reference reference = NoiseModel::Reference::PerTask;
  std::uint64_t seed = 1;

  static std::vector<std::string_view> keys();
  /// Defaults, then paper-scale dimensions if requested, then config keys.
  static SnrSweepConfig from_config(const Config& cfg, bool paper_scale);
};

struct SnrRow {
  double snr_db = 0.0;
  double err_pct_rs = 0.0;
  double err_pct_cp = 0.0;
  double cond_rs = 0.0;  // mean Vandermonde condition number over trials
};

struct SnrSweepReport {
  SnrSweepConfig config;
  int cp_delta = 0;
  std::vector<SnrRow> rows;
};

SnrSweepReport run_snr_sweep(const SnrSweepConfig& cfg);
void write_csv(std::ostream& os, const SnrSweepReport& report);

/// Worker load of both schemes on banded matrices of increasing sparsity.
/// No worker fails; every worker computes all of its jobs.
struct SparsityBenchConfig {
  std::size_t size = 2400;
  std::vector<double> levels = {0.70, 0.80, 0.90, 0.95};
  int n = 5;
  int k = 2;
  std::string gamma = "3/5";
  int rs_delta = 5;
  int rs_jobs_per_worker = 3;
  /// Virtual charges a fixed cost per nonzero and row, so reports are
  /// reproducible. Wall measures the kernels.
  ClockMode clock = ClockMode::Virtual;
  int timing_repeats = 5;
  std::uint64_t seed = 1;

  static std::vector<std::string_view> keys();
  static SparsityBenchConfig from_config(const Config& cfg, bool paper_scale);
};

struct SparsityRow {
  double level = 0.0;
  std::size_t bandwidth = 0;
  double matrix_sparsity = 0.0;
  double max_worker_time_rs = 0.0;
  double max_worker_time_cp = 0.0;
  double rs_worker_sparsity = 0.0;    // least sparse RS worker
  double cp_parity_sparsity = 0.0;    // least sparse parity worker
  double cp_systematic_sparsity = 0.0;
  std::size_t max_worker_nnz_rs = 0;
  std::size_t max_worker_nnz_cp = 0;
};

struct SparsityBenchReport {
  SparsityBenchConfig config;
  int cp_delta = 0;
  std::vector<SparsityRow> rows;
};

SparsityBenchReport run_sparsity_bench(const SparsityBenchConfig& cfg);
void write_csv(std::ostream& os, const SparsityBenchReport& report);

}  // namespace cpmv
