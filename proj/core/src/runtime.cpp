// SPDX-License-Identifier: Apache-2.0

#include "cpmv/runtime.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <tuple>

#include "cpmv/errors.hpp"

namespace cpmv {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum Stream : std::uint64_t { kPolicy = 1, kNoise = 2, kMatrix = 3, kVector = 4 };

struct WorkerMessage {
  WorkerOutput output;
  std::vector<TaskRecord> records;
  double busy = 0.0;
};

WorkerMessage run_one_worker(int worker, const std::vector<MatrixBlock>& jobs, std::span<const double> x,
                             double start_delay, const NoiseModel& noise, std::uint64_t seed,
                             const RunOptions& options) {
  using clock = std::chrono::steady_clock;
  WorkerMessage msg;
  msg.output.worker = worker;
  std::mt19937_64 rng(derive_seed(seed, kNoise, static_cast<std::uint64_t>(worker)));
  std::normal_distribution<double> gauss(0.0, 1.0);

  double virtual_now = start_delay;
  double wall_now = 0.0;
  const auto origin = clock::now();
  for (std::size_t t = 0; t < jobs.size(); ++t) {
    const MatrixBlock& job = jobs[t];
    std::vector<double> y;
    double best = std::numeric_limits<double>::infinity();
    const auto wall_start = clock::now();
    for (int rep = 0; rep < std::max(1, options.timing_repeats); ++rep) {
      const auto t0 = clock::now();
      y = multiply(job, x);
      best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
    }
    if (noise.snr_db) {
      double power = noise.reference_power;
      if (noise.reference == NoiseModel::Reference::PerTask) {
        power = 0.0;
        for (double v : y) power += v * v;
        power = y.empty() ? 0.0 : power / static_cast<double>(y.size());
      }
      const double sigma = std::sqrt(power * std::pow(10.0, -*noise.snr_db / 10.0));
      for (double& v : y) v += sigma * gauss(rng);
    }

    const double cost = options.seconds_per_nnz * static_cast<double>(nnz(job)) +
                        options.seconds_per_row * static_cast<double>(rows(job));
    TaskRecord rec;
    rec.worker = worker;
    rec.task = static_cast<int>(t);
    rec.nnz = nnz(job);
    rec.wall_seconds = best;
    if (options.clock == ClockMode::Virtual) {
      rec.start = virtual_now;
      rec.end = virtual_now + cost;
      msg.busy += cost;
    } else {
      rec.start = std::chrono::duration<double>(wall_start - origin).count();
      rec.end = rec.start + best;
      wall_now += best;
      msg.busy = wall_now;
    }
    virtual_now += cost;
    msg.output.finish_times.push_back(virtual_now);
    msg.output.results.push_back(std::move(y));
    msg.records.push_back(rec);
  }
  return msg;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

RunResult run_workers(const std::vector<std::vector<MatrixBlock>>& jobs, std::span<const double> x,
                      const StragglerPolicy& policy, const NoiseModel& noise, std::uint64_t seed,
                      const RunOptions& options) {
  const int n = static_cast<int>(jobs.size());
  for (const auto& worker_jobs : jobs)
    for (const auto& job : worker_jobs)
      if (cols(job) != x.size()) throw ShapeMismatch("run_workers: job width does not match x");

  RunResult result;
  result.workers.resize(static_cast<std::size_t>(n));
  result.start_delays.assign(static_cast<std::size_t>(n), 0.0);
  result.busy_time.assign(static_cast<std::size_t>(n), 0.0);

  std::mt19937_64 rng(derive_seed(seed, kPolicy));
  std::vector<char> failed(static_cast<std::size_t>(n), 0);
  switch (policy.mode) {
    case StragglerPolicy::Mode::ExplicitSet:
      for (int w : policy.workers) {
        if (w < 0 || w >= n) throw InvalidParams("straggler index out of range");
        failed[static_cast<std::size_t>(w)] = 1;
      }
      break;
    case StragglerPolicy::Mode::FailStopRandom: {
      if (policy.count < 0 || policy.count > n) throw InvalidParams("bad straggler count");
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (int t = 0; t < policy.count; ++t) failed[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] = 1;
      break;
    }
    case StragglerPolicy::Mode::RandomDelay:
      break;
  }
  if (policy.mean_delay > 0.0) {
    std::exponential_distribution<double> delay(1.0 / policy.mean_delay);
    for (auto& d : result.start_delays) d = delay(rng);
  }

  Channel<WorkerMessage> channel;
  int expected = 0;
  {
    std::vector<std::jthread> threads;
    for (int w = 0; w < n; ++w) {
      result.workers[static_cast<std::size_t>(w)].worker = w;
      if (failed[static_cast<std::size_t>(w)]) {
        result.workers[static_cast<std::size_t>(w)].failed = true;
        result.failed.push_back(w);
        continue;
      }
      ++expected;
      auto body = [&, w] {
        channel.send(run_one_worker(w, jobs[static_cast<std::size_t>(w)], x,
                                    result.start_delays[static_cast<std::size_t>(w)], noise, seed, options));
      };
      if (options.concurrent)
        threads.emplace_back(body);
      else
        body();
    }
    for (int received = 0; received < expected; ++received) {
      WorkerMessage msg = channel.receive();
      const auto w = static_cast<std::size_t>(msg.output.worker);
      result.busy_time[w] = msg.busy;
      result.trace.insert(result.trace.end(), msg.records.begin(), msg.records.end());
      result.workers[w] = std::move(msg.output);
    }
  }
  std::sort(result.trace.begin(), result.trace.end(), [](const TaskRecord& a, const TaskRecord& b) {
    return std::tie(a.worker, a.task) < std::tie(b.worker, b.task);
  });
  return result;
}

SymbolGrid<double> collect_cp_grid(const JobPlan& plan, const RunResult& run, std::span<const int> responders,
                                   std::size_t block_len) {
  SymbolGrid<double> grid(GridShape::for_plan(plan), block_len);
  for (int w : responders) {
    const auto& out = run.workers.at(static_cast<std::size_t>(w));
    if (out.failed) throw std::logic_error("collect_cp_grid: failed worker chosen as responder");
    grid.set_column(w, out.results);
  }
  return grid;
}

CpOutcome simulate_cp(const JobPlan& plan, const std::vector<std::vector<MatrixBlock>>& coded,
                      std::span<const double> x, std::size_t rows, const StragglerPolicy& policy,
                      const NoiseModel& noise, std::uint64_t seed, const RunOptions& options,
                      const CpCollectOptions& collect) {
  const int n = plan.params.n;
  const int s = plan.params.s();
  if (static_cast<int>(coded.size()) != n) throw ShapeMismatch("simulate_cp: coded worker count mismatch");

  CpOutcome out;
  out.run = run_workers(coded, x, policy, noise, seed, options);

  std::vector<int> alive;
  for (const auto& w : out.run.workers)
    if (!w.failed) alive.push_back(w.worker);
  if (n - static_cast<int>(alive.size()) > s)
    throw UnrecoverablePattern(std::to_string(n - static_cast<int>(alive.size())) +
                               " workers failed, code tolerates " + std::to_string(s));

  auto finish = [&](int w) {
    const auto& ft = out.run.workers[static_cast<std::size_t>(w)].finish_times;
    return ft.empty() ? out.run.start_delays[static_cast<std::size_t>(w)] : ft.back();
  };
  std::stable_sort(alive.begin(), alive.end(), [&](int a, int b) { return finish(a) < finish(b); });
  if (!collect.accept_all) alive.resize(static_cast<std::size_t>(n - s));
  std::sort(alive.begin(), alive.end());
  out.responders = alive;

  std::vector<int> erased;
  for (int w = 0; w < n; ++w)
    if (!std::binary_search(alive.begin(), alive.end(), w)) erased.push_back(w);
  out.erased = StragglerSet(erased, n);

  const std::size_t block_len = coded.front().empty() ? 0 : cpmv::rows(coded.front().front());
  SymbolGrid<double> grid = collect_cp_grid(plan, out.run, out.responders, block_len);
  out.trace = decode(grid, out.erased, collect.decode);
  out.result = assemble_result(grid, plan, rows);
  return out;
}

RsOutcome simulate_rs(const RSConfig& cfg, const std::vector<std::vector<MatrixBlock>>& coded,
                      std::span<const double> x, std::size_t rows, const StragglerPolicy& policy,
                      const NoiseModel& noise, std::uint64_t seed, const RunOptions& options) {
  cfg.validate();
  if (static_cast<int>(coded.size()) != cfg.n) throw ShapeMismatch("simulate_rs: coded worker count mismatch");
  RsOutcome out;
  out.run = run_workers(coded, x, policy, noise, seed, options);

  struct Arrival {
    double time;
    int worker;
    int task;
  };
  std::vector<Arrival> arrivals;
  for (const auto& w : out.run.workers) {
    if (w.failed) continue;
    for (std::size_t t = 0; t < w.finish_times.size(); ++t)
      arrivals.push_back({w.finish_times[t], w.worker, static_cast<int>(t)});
  }
  if (static_cast<int>(arrivals.size()) < cfg.delta)
    throw UnrecoverablePattern("RS scheme received " + std::to_string(arrivals.size()) + " responses, needs " +
                               std::to_string(cfg.delta));
  std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
    return std::tie(a.time, a.worker, a.task) < std::tie(b.time, b.worker, b.task);
  });

  std::vector<RSResponse> responses;
  for (int a = 0; a < cfg.delta; ++a) {
    const Arrival& arr = arrivals[static_cast<std::size_t>(a)];
    const double z = cfg.worker_points(arr.worker).at(static_cast<std::size_t>(arr.task));
    responses.push_back({z, out.run.workers[static_cast<std::size_t>(arr.worker)].results[static_cast<std::size_t>(arr.task)]});
    out.used_points.push_back(z);
  }
  const auto blocks = rs_decode(responses, cfg);
  for (const auto& b : blocks) out.result.insert(out.result.end(), b.begin(), b.end());
  if (rows > out.result.size()) throw ShapeMismatch("simulate_rs: fewer decoded rows than requested");
  out.result.resize(rows);
  return out;
}

std::size_t banded_nnz(std::size_t n, std::size_t b) { return n * (2 * b + 1) - b * (b + 1); }

CsrMatrix gen_banded(std::size_t n, std::size_t b, std::uint64_t seed) {
  if (n == 0 || b >= n) throw InvalidParams("gen_banded requires 0 <= b < N");
  std::mt19937_64 rng(derive_seed(seed, kMatrix));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  idx.reserve(banded_nnz(n, b));
  val.reserve(banded_nnz(n, b));
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t lo = r >= b ? r - b : 0;
    const std::size_t hi = std::min(n - 1, r + b);
    for (std::size_t c = lo; c <= hi; ++c) {
      double v = gauss(rng);
      while (v == 0.0) v = gauss(rng);
      idx.push_back(static_cast<std::uint32_t>(c));
      val.push_back(v);
    }
    row_ptr[r + 1] = val.size();
  }
  return CsrMatrix(n, n, std::move(row_ptr), std::move(idx), std::move(val));
}

std::size_t bandwidth_for_sparsity(std::size_t n, double target) {
  const double total = static_cast<double>(n) * static_cast<double>(n);
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < n; ++b) {
    const double sp = 1.0 - static_cast<double>(banded_nnz(n, b)) / total;
    const double gap = std::abs(sp - target);
    if (gap <= best_gap) {
      best_gap = gap;
      best = b;
    }
    if (sp < target) break;
  }
  return best;
}

DenseMatrix gen_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, kMatrix));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> data(rows * cols);
  for (double& v : data) v = gauss(rng);
  return DenseMatrix(rows, cols, std::move(data));
}

std::vector<double> gen_vector(std::size_t len, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, kVector));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(len);
  for (double& e : v) e = gauss(rng);
  return v;
}

double error_percentage(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) throw ShapeMismatch("error_percentage: length mismatch");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    diff += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
    ref += y[i] * y[i];
  }
  if (ref == 0.0) throw DomainError("error_percentage: zero reference vector");
  return 100.0 * std::sqrt(diff) / std::sqrt(ref);
}

}  // namespace cpmv
