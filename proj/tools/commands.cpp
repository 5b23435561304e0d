// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "cpmv/codegen.hpp"
#include "cpmv/errors.hpp"
#include "cpmv/experiments.hpp"
#include "cpmv/io.hpp"
#include "cpmv/planner.hpp"
#include "cpmv/rs_baseline.hpp"
#include "cpmv/runtime.hpp"

namespace cpmv::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string_view> kCommandKeys = {
    "seed",      "scheme",   "n",          "k",         "gamma",     "delta",      "rs_delta",
    "rs_jobs_per_worker",    "rows",       "cols",      "stragglers", "random_stragglers",
    "mean_delay", "snr_db",  "snr_reference", "format", "matrix",    "vector",     "accept_all",
    "full_grid", "grid"};

int pick(const std::optional<int>& flag, const Config& cfg, const std::string& key, int fallback) {
  return flag ? *flag : cfg.get_int(key, fallback);
}
std::size_t pick(const std::optional<std::size_t>& flag, const Config& cfg, const std::string& key,
                 std::size_t fallback) {
  return flag ? *flag : static_cast<std::size_t>(cfg.get_u64(key, fallback));
}
std::string pick(const std::optional<std::string>& flag, const Config& cfg, const std::string& key,
                 std::string fallback) {
  return flag ? *flag : cfg.get_string(key, std::move(fallback));
}
std::optional<std::string> pick_opt(const std::optional<std::string>& flag, const Config& cfg,
                                    const std::string& key) {
  return flag ? flag : cfg.get(key);
}
std::optional<double> pick_opt(const std::optional<double>& flag, const Config& cfg, const std::string& key) {
  if (flag) return flag;
  if (cfg.has(key)) return cfg.get_double(key, 0.0);
  return std::nullopt;
}

CodeParams resolve_params(const GlobalOptions& g, const CodeOptions& o) {
  const CodeParams params{pick(o.n, g.config, "n", 4), pick(o.k, g.config, "k", 2)};
  params.validate();
  return params;
}

int resolve_delta(const GlobalOptions& g, const CodeOptions& o, const CodeParams& params, int lambda) {
  if (o.delta) return *o.delta;
  if (!o.gamma && g.config.has("delta")) return g.config.get_int("delta", 0);
  const auto gamma = pick_opt(o.gamma, g.config, "gamma");
  if (!gamma) throw InvalidParams("either --gamma or --delta is required");
  return choose_delta(params, StorageBudget::parse(*gamma), lambda);
}

JobPlan resolve_plan(const GlobalOptions& g, const CodeOptions& o) {
  const auto params = resolve_params(g, o);
  const auto generator = build_generator(params);
  return build_plan(params, generator, resolve_delta(g, o, params, lambda_of(generator)));
}

RSConfig resolve_rs(const GlobalOptions& g, const CodeOptions& code, const RsOptions& o) {
  const auto params = resolve_params(g, code);
  return RSConfig::equally_spaced(params.n, pick(o.delta, g.config, "rs_delta", params.k),
                                  pick(o.jobs_per_worker, g.config, "rs_jobs_per_worker", 1));
}

void check_scheme(const std::string& scheme) {
  if (scheme != "cp" && scheme != "rs") throw InvalidParams("--scheme must be 'cp' or 'rs', got '" + scheme + "'");
}

fs::path require_out_dir(const GlobalOptions& g) {
  if (g.out.empty()) throw InvalidParams("--out DIR is required for this command");
  std::error_code ec;
  fs::create_directories(g.out, ec);
  if (ec) throw IoError("cannot create " + g.out.string() + ": " + ec.message());
  return g.out;
}

std::string render_matrix(const PolyMatrix& m) {
  std::ostringstream os;
  for (int r = 0; r < m.rows(); ++r) {
    os << "  [";
    for (int c = 0; c < m.cols(); ++c) os << (c ? " | " : " ") << to_string(m.at(r, c));
    os << " ]\n";
  }
  return os.str();
}

std::string block_file(int worker, int task, const MatrixBlock& b) {
  return "worker" + std::to_string(worker) + "_task" + std::to_string(task) + (is_sparse(b) ? ".mtx" : ".bin");
}

void write_coded(const fs::path& dir, const std::vector<std::vector<MatrixBlock>>& coded) {
  for (std::size_t w = 0; w < coded.size(); ++w)
    for (std::size_t t = 0; t < coded[w].size(); ++t)
      io::write_matrix(dir / block_file(static_cast<int>(w), static_cast<int>(t), coded[w][t]), coded[w][t]);
}

StragglerPolicy resolve_policy(const GlobalOptions& g, const SimulateOptions& o) {
  StragglerPolicy policy;
  const auto explicit_set = pick_opt(o.stragglers, g.config, "stragglers");
  const int random = pick(o.random_stragglers, g.config, "random_stragglers", -1);
  if (explicit_set && random >= 0) throw InvalidParams("--stragglers and --random-stragglers are exclusive");
  if (explicit_set) {
    Config tmp;
    tmp.set("list", *explicit_set);
    policy.workers = tmp.get_ints("list", {});
  } else if (random >= 0) {
    policy.mode = StragglerPolicy::Mode::FailStopRandom;
    policy.count = random;
  }
  if (const auto delay = pick_opt(o.mean_delay, g.config, "mean_delay")) {
    if (*delay < 0) throw InvalidParams("--mean-delay must be non-negative");
    policy.mean_delay = *delay;
    if (!explicit_set && random < 0) policy.mode = StragglerPolicy::Mode::RandomDelay;
  }
  return policy;
}

NoiseModel resolve_noise(const GlobalOptions& g, const SimulateOptions& o, std::span<const double> y) {
  NoiseModel noise;
  if (const auto snr = pick_opt(o.snr_db, g.config, "snr_db"); snr && std::isfinite(*snr)) noise.snr_db = *snr;
  const auto ref = pick(o.snr_reference, g.config, "snr_reference", "per-task");
  if (ref == "global") {
    noise.reference = NoiseModel::Reference::Global;
  } else if (ref != "per-task") {
    throw InvalidParams("--snr-reference must be 'per-task' or 'global'");
  }
  double power = 0.0;
  for (double v : y) power += v * v;
  noise.reference_power = y.empty() ? 0.0 : power / static_cast<double>(y.size());
  return noise;
}

std::string join_ints(std::span<const int> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::to_string(v[i]);
  return out;
}

std::string to_csv(const auto& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

Config merged_experiment_config(const GlobalOptions& g, const ExperimentOptions& o,
                                const std::vector<std::string_view>& keys) {
  Config cfg = g.config;
  cfg.set("seed", std::to_string(g.resolved_seed()));
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidParams("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  auto known = keys;
  known.push_back("scheme");
  cfg.require_known(known);
  return cfg;
}

}  // namespace

int run_verify(const GlobalOptions& g, const VerifyOptions& o) {
  g.config.require_known(kCommandKeys);
  const auto params = resolve_params(g, o.code);
  const auto h = build_parity_check(params);
  const auto gen = build_generator(params);
  const bool orthogonal = verify_orthogonality(gen, h);
  const auto report = coefficient_report(compute_z(params), params);
  const auto spans = column_spans(gen);

  std::ostringstream os;
  os << "CP(" << params.n << "," << params.k << ") s=" << params.s() << "\n";
  os << "H:\n" << render_matrix(h) << "G:\n" << render_matrix(gen);
  os << "orthogonal: " << (orthogonal ? "yes" : "no") << "\n";
  os << "column spans:";
  for (int d : spans) os << ' ' << d;
  os << "\nlambda: " << lambda_of(gen) << "\n";
  os << "integral coefficients: " << (report.all_integral ? "yes" : "no") << "\n";
  os << "max |coefficient|: " << report.overall_max.get_str() << "\n";
  if (report.bound_applies)
    os << "coefficient bound " << report.bound.get_str() << ": " << (report.within_bound ? "holds" : "violated")
       << "\n";
  std::cout << os.str();

  if (!g.out.empty()) io::write_output(g.out, to_csv([&](std::ostream& s) { io::write_verify_csv(s, gen, h); }));
  return orthogonal && report.all_integral && report.within_bound ? kOk : kInternal;
}

int run_plan(const GlobalOptions& g, const PlanOptions& o) {
  g.config.require_known(kCommandKeys);
  const auto plan = resolve_plan(g, o.code);
  const auto format = g.config.has("format") && o.format == "text" ? g.config.get_string("format", "text") : o.format;
  std::ostringstream os;
  if (format == "text")
    io::write_plan_text(os, plan);
  else if (format == "csv")
    io::write_plan_csv(os, plan);
  else
    throw InvalidParams("--format must be 'text' or 'csv'");
  io::write_output(g.out, os.str());
  return kOk;
}

int run_encode(const GlobalOptions& g, const EncodeOptions& o) {
  g.config.require_known(kCommandKeys);
  const auto scheme = g.resolved_scheme();
  check_scheme(scheme);
  const fs::path matrix_path = o.matrix.empty() ? fs::path(g.config.get_string("matrix", "")) : o.matrix;
  if (matrix_path.empty()) throw InvalidParams("--matrix is required");
  const MatrixBlock a = io::read_matrix(matrix_path);
  const auto dir = require_out_dir(g);

  if (scheme == "cp") {
    const auto plan = resolve_plan(g, o.code);
    write_coded(dir, materialize(plan, BlockMatrix(a, plan.delta)));
    std::ostringstream os;
    io::write_plan_text(os, plan);
    io::write_output(dir / "plan.txt", os.str());
  } else {
    const auto rs = resolve_rs(g, o.code, o.rs);
    write_coded(dir, rs_encode(BlockMatrix(a, rs.delta), rs));
    std::ostringstream os;
    os << "worker,task,point\n";
    for (int w = 0; w < rs.n; ++w) {
      const auto pts = rs.worker_points(w);
      for (std::size_t t = 0; t < pts.size(); ++t) os << w << ',' << t << ',' << io::format_double(pts[t]) << '\n';
    }
    io::write_output(dir / "points.csv", os.str());
  }
  return kOk;
}

int run_simulate(const GlobalOptions& g, const SimulateOptions& o) {
  g.config.require_known(kCommandKeys);
  const auto scheme = g.resolved_scheme();
  check_scheme(scheme);
  const auto seed = g.resolved_seed();
  const auto matrix_path = o.matrix ? o.matrix : (g.config.has("matrix") ? std::optional<fs::path>(*g.config.get("matrix")) : std::nullopt);
  const auto vector_path = o.vector ? o.vector : (g.config.has("vector") ? std::optional<fs::path>(*g.config.get("vector")) : std::nullopt);

  const MatrixBlock a = matrix_path ? io::read_matrix(*matrix_path)
                                    : MatrixBlock(gen_gaussian(pick(o.rows, g.config, "rows", std::size_t{200}),
                                                               pick(o.cols, g.config, "cols", std::size_t{100}), seed));
  const auto x = vector_path ? io::read_vector(*vector_path) : gen_vector(cols(a), seed);
  if (x.size() != cols(a)) throw ShapeMismatch("vector length does not match matrix columns");
  const auto y = multiply(a, x);
  const auto policy = resolve_policy(g, o);
  const auto noise = resolve_noise(g, o, y);
  const auto dir = require_out_dir(g);

  std::vector<double> result;
  std::ostringstream summary;
  summary << "scheme,n,delta,rows,cols,failed,erased,error_pct\n";
  if (scheme == "cp") {
    const auto plan = resolve_plan(g, o.code);
    const auto coded = materialize(plan, BlockMatrix(a, plan.delta));
    CpCollectOptions collect;
    collect.accept_all = o.accept_all || g.config.get_bool("accept_all", false);
    collect.decode.full_grid = o.full_grid || g.config.get_bool("full_grid", false);
    const auto out = simulate_cp(plan, coded, x, rows(a), policy, noise, seed, {}, collect);
    result = out.result;

    RunResult dumped = out.run;
    for (auto& w : dumped.workers)
      if (out.erased.contains(w.worker)) w.failed = true;
    io::write_grid(dir / "grid", GridShape::for_plan(plan), dumped);
    io::write_output(dir / "decode_trace.csv", to_csv([&](std::ostream& s) { io::write_decode_trace(s, out.trace); }));
    io::write_output(dir / "run_trace.csv", to_csv([&](std::ostream& s) { io::write_run_trace(s, out.run); }));
    summary << "cp," << plan.params.n << ',' << plan.delta << ',' << rows(a) << ',' << cols(a) << ','
            << join_ints(out.run.failed) << ',' << join_ints(out.erased.indices()) << ','
            << io::format_double(error_percentage(y, result)) << '\n';
  } else {
    const auto rs = resolve_rs(g, o.code, o.rs);
    const auto coded = rs_encode(BlockMatrix(a, rs.delta), rs);
    const auto out = simulate_rs(rs, coded, x, rows(a), policy, noise, seed);
    result = out.result;
    io::write_output(dir / "run_trace.csv", to_csv([&](std::ostream& s) { io::write_run_trace(s, out.run); }));
    summary << "rs," << rs.n << ',' << rs.delta << ',' << rows(a) << ',' << cols(a) << ','
            << join_ints(out.run.failed) << ",," << io::format_double(error_percentage(y, result)) << '\n';
  }
  io::write_vector(dir / "result.bin", result);
  io::write_vector(dir / "expected.bin", y);
  io::write_output(dir / "summary.csv", summary.str());
  std::cout << summary.str();
  return kOk;
}

int run_decode(const GlobalOptions& g, const DecodeOptions& o) {
  g.config.require_known(kCommandKeys);
  if (g.resolved_scheme() != "cp") throw Unsupported("decode reads CP symbol grids only");
  const fs::path grid_dir = o.grid.empty() ? fs::path(g.config.get_string("grid", "")) : o.grid;
  if (grid_dir.empty()) throw InvalidParams("--grid DIR is required");
  const auto plan = resolve_plan(g, o.code);
  auto loaded = io::read_grid(grid_dir, GridShape::for_plan(plan));
  cpmv::DecodeOptions options;
  options.full_grid = o.full_grid;
  const auto trace = decode(loaded.grid, loaded.missing, options);
  const std::size_t full = static_cast<std::size_t>(plan.delta) * loaded.grid.block_len();
  const auto result = assemble_result(loaded.grid, plan, pick(o.rows, g.config, "rows", full));

  const auto dir = require_out_dir(g);
  io::write_vector(dir / "result.bin", result);
  io::write_output(dir / "decode_trace.csv", to_csv([&](std::ostream& s) { io::write_decode_trace(s, trace); }));
  std::cout << "decoded " << result.size() << " rows, erased columns " << join_ints(loaded.missing.indices())
            << ", " << trace.steps.size() << " peeling steps\n";
  return kOk;
}

int run_snr_sweep(const GlobalOptions& g, const ExperimentOptions& o) {
  const auto cfg = merged_experiment_config(g, o, SnrSweepConfig::keys());
  const auto report = cpmv::run_snr_sweep(SnrSweepConfig::from_config(cfg, g.paper_scale));
  io::write_output(g.out, to_csv([&](std::ostream& s) { write_csv(s, report); }));
  return kOk;
}

int run_sparsity_bench(const GlobalOptions& g, const ExperimentOptions& o) {
  const auto cfg = merged_experiment_config(g, o, SparsityBenchConfig::keys());
  const auto report = cpmv::run_sparsity_bench(SparsityBenchConfig::from_config(cfg, g.paper_scale));
  io::write_output(g.out, to_csv([&](std::ostream& s) { write_csv(s, report); }));
  return kOk;
}

}  // namespace cpmv::cli
