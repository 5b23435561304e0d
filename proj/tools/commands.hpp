// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cpmv/config.hpp"

namespace cpmv::cli {

enum ExitCode : int { kOk = 0, kConfig = 1, kDecode = 2, kIo = 3, kInternal = 4 };

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string scheme = "cp";
  bool scheme_set = false;
  std::filesystem::path config_path;
  std::filesystem::path out;
  bool paper_scale = false;

  /// Loaded from config_path, or empty.
  Config config;
  std::uint64_t resolved_seed() const { return seed ? *seed : config.get_u64("seed", 1); }
  std::string resolved_scheme() const { return scheme_set ? scheme : config.get_string("scheme", scheme); }
};

struct CodeOptions {
  std::optional<int> n;
  std::optional<int> k;
  std::optional<std::string> gamma;
  std::optional<int> delta;
};

struct RsOptions {
  std::optional<int> delta;
  std::optional<int> jobs_per_worker;
};

struct VerifyOptions {
  CodeOptions code;
};

struct PlanOptions {
  CodeOptions code;
  std::string format = "text";
};

struct EncodeOptions {
  CodeOptions code;
  RsOptions rs;
  std::filesystem::path matrix;
};

struct SimulateOptions {
  CodeOptions code;
  RsOptions rs;
  std::optional<std::filesystem::path> matrix;
  std::optional<std::filesystem::path> vector;
  std::optional<std::size_t> rows;
  std::optional<std::size_t> cols;
  std::optional<std::string> stragglers;
  std::optional<int> random_stragglers;
  std::optional<double> mean_delay;
  std::optional<double> snr_db;
  std::optional<std::string> snr_reference;
  bool accept_all = false;
  bool full_grid = false;
};

struct DecodeOptions {
  CodeOptions code;
  std::filesystem::path grid;
  std::optional<std::size_t> rows;
  bool full_grid = false;
};

struct ExperimentOptions {
  std::vector<std::string> overrides;  // key=value
};

int run_verify(const GlobalOptions& g, const VerifyOptions& o);
int run_plan(const GlobalOptions& g, const PlanOptions& o);
int run_encode(const GlobalOptions& g, const EncodeOptions& o);
int run_simulate(const GlobalOptions& g, const SimulateOptions& o);
int run_decode(const GlobalOptions& g, const DecodeOptions& o);
int run_snr_sweep(const GlobalOptions& g, const ExperimentOptions& o);
int run_sparsity_bench(const GlobalOptions& g, const ExperimentOptions& o);

}  // namespace cpmv::cli
