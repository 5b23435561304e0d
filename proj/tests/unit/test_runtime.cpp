// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "cpmv/errors.hpp"
#include "cpmv/runtime.hpp"
#include "oracles.hpp"

namespace cpmv {
namespace {

CsrMatrix random_sparse(std::size_t r, std::size_t c, double density, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> g;
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (coin(rng) < density) trip.emplace_back(i, j, g(rng));
  return CsrMatrix::from_triplets(r, c, std::move(trip));
}

TEST(SparseMatvec, IdentityAndZero) {
  DenseMatrix eye(4, 4);
  for (std::size_t i = 0; i < 4; ++i) eye.at(i, i) = 1.0;
  const std::vector<double> x = {1.5, -2.0, 0.0, 7.0};
  EXPECT_EQ(sparse_matvec(CsrMatrix::from_dense(eye), x), x);
  EXPECT_EQ(sparse_matvec(CsrMatrix::from_dense(DenseMatrix(3, 4)), x), std::vector<double>(3, 0.0));
}

TEST(SparseMatvec, MatchesDenseOracle) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const auto m = random_sparse(30, 20, 0.2, seed);
    std::vector<double> x(20);
    std::iota(x.begin(), x.end(), -3.0);
    EXPECT_LT(oracle::rel_error(oracle::matvec(MatrixBlock(m), x), sparse_matvec(m, x)), 1e-12);
  }
}

TEST(GenBanded, StructureAndCount) {
  for (std::size_t b : {0u, 1u, 5u, 19u}) {
    const auto m = gen_banded(20, b, 3);
    std::size_t count = 0;
    const auto d = m.to_dense();
    for (std::size_t r = 0; r < 20; ++r)
      for (std::size_t c = 0; c < 20; ++c) {
        const bool inside = (r > c ? r - c : c - r) <= b;
        if (d.at(r, c) != 0.0) {
          ++count;
          EXPECT_TRUE(inside);
        } else {
          EXPECT_FALSE(inside);
        }
      }
    EXPECT_EQ(count, banded_nnz(20, b));
    EXPECT_EQ(m.nnz(), banded_nnz(20, b));
  }
  EXPECT_DOUBLE_EQ(sparsity(MatrixBlock(gen_banded(50, 0, 1))), 1.0 - 1.0 / 50.0);
  EXPECT_EQ(gen_banded(9, 8, 1).nnz(), 81u);
  EXPECT_THROW(gen_banded(5, 5, 1), InvalidParams);
}

TEST(GenBanded, BandwidthForNinetyPercent) {
  // N(2b+1) - b(b+1) = 0.1 N^2 at N = 12000 has root b ~ 621.
  const std::size_t n = 12000;
  const double nd = static_cast<double>(n);
  const double root = ((2 * nd - 1) - std::sqrt((2 * nd - 1) * (2 * nd - 1) - 4 * (0.1 * nd * nd - nd))) / 2;
  const auto b = bandwidth_for_sparsity(n, 0.9);
  EXPECT_NEAR(static_cast<double>(b), root, 1.0);
  EXPECT_NEAR(static_cast<double>(b), 600.0, 30.0);
}

TEST(ErrorPercentage, Examples) {
  const std::vector<double> y = {3.0, -4.0};
  EXPECT_DOUBLE_EQ(error_percentage(y, y), 0.0);
  const std::vector<double> scaled = {3.03, -4.04};
  EXPECT_NEAR(error_percentage(y, scaled), 1.0, 1e-12);
  const std::vector<double> zero = {0.0, 0.0};
  EXPECT_THROW(error_percentage(zero, y), DomainError);
  EXPECT_THROW(error_percentage(y, std::vector<double>{1.0}), ShapeMismatch);
}

TEST(Channel, DeliversEveryMessage) {
  Channel<int> ch;
  std::vector<std::jthread> producers;
  for (int p = 0; p < 4; ++p)
    producers.emplace_back([&ch, p] {
      for (int i = 0; i < 100; ++i) ch.send(p * 100 + i);
    });
  std::vector<int> got;
  for (int i = 0; i < 400; ++i) got.push_back(ch.receive());
  std::sort(got.begin(), got.end());
  for (int i = 0; i < 400; ++i) EXPECT_EQ(got[static_cast<std::size_t>(i)], i);
}

struct CpSetup {
  JobPlan plan = build_plan({4, 2}, 8);
  DenseMatrix a = gen_gaussian(50, 12, 5);
  std::vector<double> x = gen_vector(12, 5);
  std::vector<std::vector<MatrixBlock>> coded = materialize(plan, BlockMatrix(MatrixBlock(a), 8));
};

TEST(Runtime, ExplicitStragglersRespondersAndExactness) {
  const CpSetup s;
  StragglerPolicy policy;
  policy.workers = {2, 3};
  const auto out = simulate_cp(s.plan, s.coded, s.x, 50, policy, {}, 1);
  EXPECT_EQ(out.responders, (std::vector<int>{0, 1}));
  EXPECT_EQ(out.run.failed, (std::vector<int>{2, 3}));
  EXPECT_TRUE(out.run.workers[2].results.empty());
  EXPECT_LT(oracle::rel_error(oracle::matvec(MatrixBlock(s.a), s.x), out.result), 1e-12);
}

TEST(Runtime, NoStragglersNoNoiseIsExact) {
  const CpSetup s;
  const auto y = oracle::matvec(MatrixBlock(s.a), s.x);
  const auto cp = simulate_cp(s.plan, s.coded, s.x, 50, {}, {}, 2);
  EXPECT_LT(oracle::rel_error(y, cp.result), 1e-12);

  const auto cfg = RSConfig::equally_spaced(4, 4, 2);
  const auto rs_coded = rs_encode(BlockMatrix(MatrixBlock(s.a), 4), cfg);
  const auto rs = simulate_rs(cfg, rs_coded, s.x, 50, {}, {}, 2);
  EXPECT_LT(oracle::rel_error(y, rs.result), 1e-12);
  EXPECT_EQ(rs.used_points.size(), 4u);
}

TEST(Runtime, TooManyFailures) {
  const CpSetup s;
  StragglerPolicy policy;
  policy.workers = {0, 1, 2};
  EXPECT_THROW(simulate_cp(s.plan, s.coded, s.x, 50, policy, {}, 1), UnrecoverablePattern);
  const auto cfg = RSConfig::equally_spaced(4, 4, 1);
  const auto rs_coded = rs_encode(BlockMatrix(MatrixBlock(s.a), 4), cfg);
  policy.workers = {0};
  EXPECT_THROW(simulate_rs(cfg, rs_coded, s.x, 50, policy, {}, 1), UnrecoverablePattern);
}

TEST(Runtime, FastestColumnsAreCollected) {
  const CpSetup s;
  StragglerPolicy policy;
  policy.mode = StragglerPolicy::Mode::RandomDelay;
  policy.mean_delay = 1.0;
  const auto out = simulate_cp(s.plan, s.coded, s.x, 50, policy, {}, 9);
  ASSERT_EQ(out.responders.size(), 2u);
  std::vector<double> finish;
  for (const auto& w : out.run.workers) finish.push_back(w.finish_times.back());
  for (int r : out.responders)
    for (int e : out.erased.indices()) EXPECT_LE(finish[static_cast<std::size_t>(r)], finish[static_cast<std::size_t>(e)]);

  CpCollectOptions all;
  all.accept_all = true;
  const auto everyone = simulate_cp(s.plan, s.coded, s.x, 50, policy, {}, 9, {}, all);
  EXPECT_EQ(everyone.responders.size(), 4u);
  EXPECT_EQ(everyone.erased.size(), 0);
}

TEST(Runtime, DeterministicUnderSeed) {
  const CpSetup s;
  StragglerPolicy policy;
  policy.mode = StragglerPolicy::Mode::FailStopRandom;
  policy.count = 2;
  policy.mean_delay = 0.5;
  NoiseModel noise;
  noise.snr_db = 40.0;
  const auto a = simulate_cp(s.plan, s.coded, s.x, 50, policy, noise, 77);
  const auto b = simulate_cp(s.plan, s.coded, s.x, 50, policy, noise, 77);
  EXPECT_EQ(a.result, b.result);
  EXPECT_EQ(a.run.failed, b.run.failed);
  ASSERT_EQ(a.run.trace.size(), b.run.trace.size());
  for (std::size_t i = 0; i < a.run.trace.size(); ++i) {
    EXPECT_EQ(a.run.trace[i].start, b.run.trace[i].start);
    EXPECT_EQ(a.run.trace[i].end, b.run.trace[i].end);
  }
  const auto c = simulate_cp(s.plan, s.coded, s.x, 50, policy, noise, 78);
  EXPECT_NE(a.result, c.result);
}

TEST(Runtime, SequentialAndConcurrentAgree) {
  const CpSetup s;
  NoiseModel noise;
  noise.snr_db = 30.0;
  RunOptions seq;
  seq.concurrent = false;
  const auto a = run_workers(s.coded, s.x, {}, noise, 3, seq);
  const auto b = run_workers(s.coded, s.x, {}, noise, 3);
  for (std::size_t w = 0; w < a.workers.size(); ++w) EXPECT_EQ(a.workers[w].results, b.workers[w].results);
}

TEST(Runtime, NoiseHitsTheRequestedSnr) {
  const auto a = gen_gaussian(4000, 30, 8);
  const auto x = gen_vector(30, 8);
  std::vector<std::vector<MatrixBlock>> jobs = {{MatrixBlock(a)}};
  NoiseModel noise;
  noise.snr_db = 20.0;
  const auto run = run_workers(jobs, x, {}, noise, 4);
  const auto clean = oracle::matvec(MatrixBlock(a), x);
  double sig = 0.0, err = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    sig += clean[i] * clean[i];
    const double d = run.workers[0].results[0][i] - clean[i];
    err += d * d;
  }
  EXPECT_NEAR(10.0 * std::log10(sig / err), 20.0, 0.3);

  noise.reference = NoiseModel::Reference::Global;
  noise.reference_power = 0.0;
  const auto silent = run_workers(jobs, x, {}, noise, 4);
  EXPECT_EQ(silent.workers[0].results[0], multiply(MatrixBlock(a), x));
}

TEST(Runtime, VirtualClockFollowsCostModel) {
  const CpSetup s;
  RunOptions opts;
  opts.seconds_per_nnz = 1.0;
  opts.seconds_per_row = 0.0;
  const auto run = run_workers(s.coded, s.x, {}, {}, 1, opts);
  for (const auto& rec : run.trace) EXPECT_DOUBLE_EQ(rec.end - rec.start, static_cast<double>(rec.nnz));
  for (std::size_t w = 0; w < s.coded.size(); ++w) {
    double total = 0.0;
    for (const auto& b : s.coded[w]) total += static_cast<double>(nnz(b));
    EXPECT_DOUBLE_EQ(run.busy_time[w], total);
  }
}

TEST(Runtime, ShapeMismatch) {
  const CpSetup s;
  const std::vector<double> short_x(5, 1.0);
  EXPECT_THROW(run_workers(s.coded, short_x, {}, {}, 1), ShapeMismatch);
}

TEST(DeriveSeed, DistinctStreams) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 2, 4));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(2, 2, 3));
}

}  // namespace
}  // namespace cpmv

namespace cpmv {
namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
  return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

TEST(Runtime, WallTimeTracksNonzeros) {
  std::vector<std::vector<MatrixBlock>> jobs(1);
  for (std::size_t b : {2u, 10u, 25u, 50u, 90u, 140u, 200u, 280u, 380u, 500u})
    jobs[0].push_back(MatrixBlock(gen_banded(1500, b, b)));
  const auto x = gen_vector(1500, 1);
  RunOptions opts;
  opts.clock = ClockMode::Wall;
  opts.concurrent = false;
  opts.timing_repeats = 7;
  const auto run = run_workers(jobs, x, {}, {}, 1, opts);
  std::vector<double> t, z;
  for (const auto& rec : run.trace) {
    t.push_back(rec.wall_seconds);
    z.push_back(static_cast<double>(rec.nnz));
  }
  EXPECT_GT(pearson(ranks(t), ranks(z)), 0.9);
}

}  // namespace
}  // namespace cpmv
