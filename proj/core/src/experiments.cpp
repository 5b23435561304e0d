// SPDX-License-Identifier: Apache-2.0

#include "cpmv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cpmv/errors.hpp"
#include "cpmv/io.hpp"
#include "cpmv/rs_baseline.hpp"

namespace cpmv {

namespace {

enum Stream : std::uint64_t { kTrial = 100, kLevel = 200, kBand = 300 };

NoiseModel::Reference parse_reference(const std::string& s) {
  if (s == "per-task") return NoiseModel::Reference::PerTask;
  if (s == "global") return NoiseModel::Reference::Global;
  throw InvalidParams("snr_reference must be 'per-task' or 'global', got '" + s + "'");
}

std::string reference_name(NoiseModel::Reference r) {
  return r == NoiseModel::Reference::PerTask ? "per-task" : "global";
}

ClockMode parse_clock(const std::string& s) {
  if (s == "virtual") return ClockMode::Virtual;
  if (s == "wall") return ClockMode::Wall;
  throw InvalidParams("clock must be 'virtual' or 'wall', got '" + s + "'");
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    if constexpr (std::is_floating_point_v<T>)
      out += io::format_double(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

double mean_square(std::span<const double> v) {
  double acc = 0.0;
  for (double e : v) acc += e * e;
  return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

std::size_t total_nnz(const std::vector<MatrixBlock>& blocks) {
  std::size_t total = 0;
  for (const auto& b : blocks) total += nnz(b);
  return total;
}

}  // namespace

std::vector<std::string_view> SnrSweepConfig::keys() {
  return {"rows", "cols", "n", "k", "gamma", "rs_delta", "rs_jobs_per_worker", "snr_db", "trials", "stragglers",
          "snr_reference", "seed"};
}

SnrSweepConfig SnrSweepConfig::from_config(const Config& cfg, bool paper_scale) {
  SnrSweepConfig out;
  if (paper_scale) {
    out.rows = 8000;
    out.cols = 10000;
  }
  out.rows = cfg.get_u64("rows", out.rows);
  out.cols = cfg.get_u64("cols", out.cols);
  out.n = cfg.get_int("n", out.n);
  out.k = cfg.get_int("k", out.k);
  out.gamma = cfg.get_string("gamma", out.gamma);
  out.rs_delta = cfg.get_int("rs_delta", out.rs_delta);
  out.rs_jobs_per_worker = cfg.get_int("rs_jobs_per_worker", out.rs_jobs_per_worker);
  out.snr_db = cfg.get_doubles("snr_db", out.snr_db);
  out.trials = cfg.get_int("trials", out.trials);
  out.stragglers = cfg.get_int("stragglers", out.stragglers);
  out.reference = parse_reference(cfg.get_string("snr_reference", reference_name(out.reference)));
  out.seed = cfg.get_u64("seed", out.seed);
  return out;
}

SnrSweepReport run_snr_sweep(const SnrSweepConfig& cfg) {
  const CodeParams params{cfg.n, cfg.k};
  params.validate();
  if (cfg.rows == 0 || cfg.cols == 0) throw InvalidParams("matrix dimensions must be positive");
  if (cfg.trials < 1) throw InvalidParams("trials must be positive");
  const auto generator = build_generator(params);
  const int delta = choose_delta(params, StorageBudget::parse(cfg.gamma), lambda_of(generator));
  const JobPlan plan = build_plan(params, generator, delta);
  const RSConfig rs = RSConfig::equally_spaced(cfg.n, cfg.rs_delta, cfg.rs_jobs_per_worker);

  const int failures = cfg.stragglers < 0 ? params.s() : cfg.stragglers;
  if (failures > params.s() || failures > rs.resilience())
    throw InvalidParams(std::to_string(failures) + " stragglers exceed the resilience of one of the schemes");

  SnrSweepReport report;
  report.config = cfg;
  report.cp_delta = delta;
  report.rows.resize(cfg.snr_db.size());
  for (std::size_t l = 0; l < cfg.snr_db.size(); ++l) report.rows[l].snr_db = cfg.snr_db[l];

  for (int trial = 0; trial < cfg.trials; ++trial) {
    const auto trial_seed = derive_seed(cfg.seed, kTrial, static_cast<std::uint64_t>(trial));
    const MatrixBlock a = gen_gaussian(cfg.rows, cfg.cols, trial_seed);
    const auto x = gen_vector(cfg.cols, trial_seed);
    const auto y = multiply(a, x);
    const auto coded_cp = materialize(plan, BlockMatrix(a, delta));
    const auto coded_rs = rs_encode(BlockMatrix(a, cfg.rs_delta), rs);

    StragglerPolicy policy;
    policy.mode = StragglerPolicy::Mode::FailStopRandom;
    policy.count = failures;
    policy.mean_delay = 1e-3;

    for (std::size_t l = 0; l < cfg.snr_db.size(); ++l) {
      NoiseModel noise;
      if (std::isfinite(cfg.snr_db[l])) noise.snr_db = cfg.snr_db[l];
      noise.reference = cfg.reference;
      noise.reference_power = mean_square(y);
      const auto run_seed = derive_seed(trial_seed, kLevel, l);

      const auto cp = simulate_cp(plan, coded_cp, x, cfg.rows, policy, noise, run_seed);
      const auto rsr = simulate_rs(rs, coded_rs, x, cfg.rows, policy, noise, run_seed);
      auto& row = report.rows[l];
      row.err_pct_cp += error_percentage(y, cp.result) / cfg.trials;
      row.err_pct_rs += error_percentage(y, rsr.result) / cfg.trials;
      row.cond_rs += condition_number(rsr.used_points) / cfg.trials;
    }
  }
  return report;
}

void write_csv(std::ostream& os, const SnrSweepReport& report) {
  const auto& c = report.config;
  os << "# experiment=snr-sweep rows=" << c.rows << " cols=" << c.cols << " n=" << c.n << " k=" << c.k
     << " gamma=" << c.gamma << " cp_delta=" << report.cp_delta << " rs_delta=" << c.rs_delta
     << " rs_jobs_per_worker=" << c.rs_jobs_per_worker << " trials=" << c.trials << " stragglers="
     << (c.stragglers < 0 ? c.n - c.k : c.stragglers) << " snr_reference=" << reference_name(c.reference)
     << " seed=" << c.seed << '\n';
  os << "snr_db,err_pct_rs,err_pct_cp,cond_rs\n";
  for (const auto& r : report.rows)
    os << io::format_double(r.snr_db) << ',' << io::format_double(r.err_pct_rs) << ','
       << io::format_double(r.err_pct_cp) << ',' << io::format_double(r.cond_rs) << '\n';
}

std::vector<std::string_view> SparsityBenchConfig::keys() {
  return {"size", "levels", "n", "k", "gamma", "rs_delta", "rs_jobs_per_worker", "clock", "timing_repeats", "seed"};
}

SparsityBenchConfig SparsityBenchConfig::from_config(const Config& cfg, bool paper_scale) {
  SparsityBenchConfig out;
  if (paper_scale) out.size = 12000;
  out.size = cfg.get_u64("size", out.size);
  out.levels = cfg.get_doubles("levels", out.levels);
  out.n = cfg.get_int("n", out.n);
  out.k = cfg.get_int("k", out.k);
  out.gamma = cfg.get_string("gamma", out.gamma);
  out.rs_delta = cfg.get_int("rs_delta", out.rs_delta);
  out.rs_jobs_per_worker = cfg.get_int("rs_jobs_per_worker", out.rs_jobs_per_worker);
  out.clock = parse_clock(cfg.get_string("clock", out.clock == ClockMode::Virtual ? "virtual" : "wall"));
  out.timing_repeats = cfg.get_int("timing_repeats", out.timing_repeats);
  out.seed = cfg.get_u64("seed", out.seed);
  return out;
}

SparsityBenchReport run_sparsity_bench(const SparsityBenchConfig& cfg) {
  const CodeParams params{cfg.n, cfg.k};
  params.validate();
  if (cfg.size == 0) throw InvalidParams("matrix size must be positive");
  const auto generator = build_generator(params);
  const int delta = choose_delta(params, StorageBudget::parse(cfg.gamma), lambda_of(generator));
  const JobPlan plan = build_plan(params, generator, delta);
  const RSConfig rs = RSConfig::equally_spaced(cfg.n, cfg.rs_delta, cfg.rs_jobs_per_worker);

  RunOptions options;
  options.clock = cfg.clock;
  options.concurrent = cfg.clock == ClockMode::Virtual;
  options.timing_repeats = cfg.clock == ClockMode::Wall ? std::max(1, cfg.timing_repeats) : 1;

  SparsityBenchReport report;
  report.config = cfg;
  report.cp_delta = delta;
  for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
    const double level = cfg.levels[l];
    if (!(level >= 0.0 && level < 1.0)) throw InvalidParams("sparsity levels must lie in [0, 1)");
    SparsityRow row;
    row.level = level;
    row.bandwidth = bandwidth_for_sparsity(cfg.size, level);
    const auto level_seed = derive_seed(cfg.seed, kBand, l);
    const MatrixBlock a = gen_banded(cfg.size, row.bandwidth, level_seed);
    row.matrix_sparsity = sparsity(a);
    const auto x = gen_vector(cfg.size, level_seed);

    const auto coded_cp = materialize(plan, BlockMatrix(a, delta));
    const auto coded_rs = rs_encode(BlockMatrix(a, cfg.rs_delta), rs);

    const auto cp_report = sparsity_report(plan, coded_cp);
    row.cp_parity_sparsity = cp_report.worst_parity;
    row.cp_systematic_sparsity = cp_report.worst_systematic;
    row.rs_worker_sparsity = 1.0;
    for (const auto& jobs : coded_rs) row.rs_worker_sparsity = std::min(row.rs_worker_sparsity, aggregate_sparsity(jobs));
    for (const auto& jobs : coded_cp) row.max_worker_nnz_cp = std::max(row.max_worker_nnz_cp, total_nnz(jobs));
    for (const auto& jobs : coded_rs) row.max_worker_nnz_rs = std::max(row.max_worker_nnz_rs, total_nnz(jobs));

    const auto cp_run = run_workers(coded_cp, x, {}, {}, level_seed, options);
    const auto rs_run = run_workers(coded_rs, x, {}, {}, level_seed, options);
    row.max_worker_time_cp = *std::max_element(cp_run.busy_time.begin(), cp_run.busy_time.end());
    row.max_worker_time_rs = *std::max_element(rs_run.busy_time.begin(), rs_run.busy_time.end());
    report.rows.push_back(row);
  }
  return report;
}

void write_csv(std::ostream& os, const SparsityBenchReport& report) {
  const auto& c = report.config;
  os << "# experiment=sparsity-bench size=" << c.size << " n=" << c.n << " k=" << c.k << " gamma=" << c.gamma
     << " cp_delta=" << report.cp_delta << " rs_delta=" << c.rs_delta << " rs_jobs_per_worker="
     << c.rs_jobs_per_worker << " levels=" << join(c.levels)
     << " clock=" << (c.clock == ClockMode::Virtual ? "virtual" : "wall") << " seed=" << c.seed << '\n';
  os << "sparsity_level,bandwidth,matrix_sparsity,max_worker_time_rs,max_worker_time_cp,rs_worker_sparsity,"
        "cp_parity_sparsity,cp_systematic_sparsity,max_worker_nnz_rs,max_worker_nnz_cp\n";
  for (const auto& r : report.rows)
    os << io::format_double(r.level) << ',' << r.bandwidth << ',' << io::format_double(r.matrix_sparsity) << ','
       << io::format_double(r.max_worker_time_rs) << ',' << io::format_double(r.max_worker_time_cp) << ','
       << io::format_double(r.rs_worker_sparsity) << ',' << io::format_double(r.cp_parity_sparsity) << ','
       << io::format_double(r.cp_systematic_sparsity) << ',' << r.max_worker_nnz_rs << ',' << r.max_worker_nnz_cp
       << '\n';
}

}  // namespace cpmv
