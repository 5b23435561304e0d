// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <iostream>
#include <stdexcept>

#include "commands.hpp"
#include "cpmv/errors.hpp"

namespace {

using namespace cpmv::cli;

void add_code_options(CLI::App* cmd, CodeOptions& o, bool with_delta) {
  cmd->add_option("-n,--n", o.n, "number of workers");
  cmd->add_option("-k,--k", o.k, "number of message streams");
  if (!with_delta) return;
  cmd->add_option("--gamma", o.gamma, "storage fraction per worker, e.g. 3/10");
  cmd->add_option("--delta", o.delta, "number of block-rows (overrides --gamma)");
}

void add_rs_options(CLI::App* cmd, RsOptions& o) {
  cmd->add_option("--rs-delta", o.delta, "RS block-rows (default k)");
  cmd->add_option("--jobs-per-worker", o.jobs_per_worker, "RS evaluation points per worker (default 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-parity-check coded matrix-vector multiplication"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "random seed (default 1)");
  app.add_option("--scheme", global.scheme, "cp or rs")->check(CLI::IsMember({"cp", "rs"}));
  app.add_option("--config", global.config_path, "flat key = value config file");
  app.add_option("--out", global.out, "output file or directory");
  app.add_flag("--paper-scale", global.paper_scale, "experiment dimensions of the original study");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "build G and H, check orthogonality and coefficients");
  add_code_options(verify_cmd, verify.code, false);

  PlanOptions plan;
  auto* plan_cmd = app.add_subcommand("plan", "print the per-worker task table");
  add_code_options(plan_cmd, plan.code, true);
  plan_cmd->add_option("--format", plan.format, "text or csv");

  EncodeOptions encode;
  auto* encode_cmd = app.add_subcommand("encode", "write every worker's coded submatrices");
  add_code_options(encode_cmd, encode.code, true);
  add_rs_options(encode_cmd, encode.rs);
  encode_cmd->add_option("--matrix", encode.matrix, "input matrix (.mtx or raw binary)");

  SimulateOptions simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "run workers with stragglers and noise, then decode");
  add_code_options(simulate_cmd, simulate.code, true);
  add_rs_options(simulate_cmd, simulate.rs);
  simulate_cmd->add_option("--matrix", simulate.matrix, "input matrix; random Gaussian when omitted");
  simulate_cmd->add_option("--vector", simulate.vector, "input vector; random Gaussian when omitted");
  simulate_cmd->add_option("--rows", simulate.rows, "rows of the generated matrix (default 200)");
  simulate_cmd->add_option("--cols", simulate.cols, "columns of the generated matrix (default 100)");
  simulate_cmd->add_option("--stragglers", simulate.stragglers, "comma-separated failed workers");
  simulate_cmd->add_option("--random-stragglers", simulate.random_stragglers, "number of random failed workers");
  simulate_cmd->add_option("--mean-delay", simulate.mean_delay, "mean exponential start delay (virtual seconds)");
  simulate_cmd->add_option("--snr", simulate.snr_db, "noise SNR in dB; none when omitted");
  simulate_cmd->add_option("--snr-reference", simulate.snr_reference, "per-task or global");
  simulate_cmd->add_flag("--accept-all", simulate.accept_all, "decode with every finished worker");
  simulate_cmd->add_flag("--full-grid", simulate.full_grid, "recover every straggler symbol");

  DecodeOptions decode;
  auto* decode_cmd = app.add_subcommand("decode", "peel a symbol grid written by simulate");
  add_code_options(decode_cmd, decode.code, true);
  decode_cmd->add_option("--grid", decode.grid, "directory holding grid.csv");
  decode_cmd->add_option("--rows", decode.rows, "rows of A to keep (default all)");
  decode_cmd->add_flag("--full-grid", decode.full_grid, "recover every straggler symbol");

  ExperimentOptions snr;
  auto* snr_cmd = app.add_subcommand("snr-sweep", "output error of both schemes versus SNR");
  snr_cmd->add_option("--set", snr.overrides, "override a config key, key=value");

  ExperimentOptions sparsity;
  auto* sparsity_cmd = app.add_subcommand("sparsity-bench", "worker load of both schemes on banded matrices");
  sparsity_cmd->add_option("--set", sparsity.overrides, "override a config key, key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  global.scheme_set = app.count("--scheme") > 0;

  try {
    if (!global.config_path.empty()) global.config = cpmv::Config::load(global.config_path);
    if (*verify_cmd) return run_verify(global, verify);
    if (*plan_cmd) return run_plan(global, plan);
    if (*encode_cmd) return run_encode(global, encode);
    if (*simulate_cmd) return run_simulate(global, simulate);
    if (*decode_cmd) return run_decode(global, decode);
    if (*snr_cmd) return run_snr_sweep(global, snr);
    if (*sparsity_cmd) return run_sparsity_bench(global, sparsity);
  } catch (const cpmv::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const cpmv::DecodeError& e) {
    std::cerr << "decode failed: " << e.what() << '\n';
    return kDecode;
  } catch (const cpmv::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
