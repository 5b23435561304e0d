// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "cpmv/errors.hpp"
#include "cpmv/io.hpp"
#include "cpmv/planner.hpp"
#include "oracles.hpp"

namespace cpmv {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

TEST(StorageBudget, Parse) {
  EXPECT_EQ(StorageBudget::parse("3/10").gamma, Rational(3, 10));
  EXPECT_EQ(StorageBudget::parse("0.3").gamma, Rational(3, 10));
  EXPECT_EQ(StorageBudget::parse("1").gamma, Rational(1));
  EXPECT_THROW(StorageBudget::parse("0"), InvalidParams);
  EXPECT_THROW(StorageBudget::parse("3/2"), InvalidParams);
  EXPECT_THROW(StorageBudget::parse("abc"), InvalidParams);
}

TEST(ChooseDelta, WorkedExamples) {
  EXPECT_EQ(choose_delta({4, 2}, StorageBudget::parse("3/4"), 2), 8);
  EXPECT_EQ(choose_delta({7, 4}, StorageBudget::parse("3/10"), 8), 160);
  EXPECT_EQ(choose_delta({5, 2}, StorageBudget::parse("3/5"), 4), 40);
}

TEST(ChooseDelta, SmallestMultipleOfKAboveBound) {
  // lambda / (gamma - 1/k) = 3 / (1/2 - 1/3) = 18, already a multiple of 3.
  EXPECT_EQ(choose_delta({5, 3}, StorageBudget::parse("1/2"), 3), 18);
  // 1 / (1 - 1/2) = 2.
  EXPECT_EQ(choose_delta({3, 2}, StorageBudget::parse("1"), 1), 2);
  // 5 / (2/5 - 1/4) = 33.33..., next multiple of 4 is 36.
  EXPECT_EQ(choose_delta({6, 4}, StorageBudget::parse("2/5"), 5), 36);
}

TEST(ChooseDelta, InfeasibleBudget) {
  EXPECT_THROW(choose_delta({4, 2}, StorageBudget::parse("1/2"), 2), InfeasibleBudget);
  EXPECT_THROW(choose_delta({4, 2}, StorageBudget::parse("1/4"), 2), InfeasibleBudget);
}

TEST(BuildPlan, MatchesFigureTaskTable) {
  const auto plan = build_plan({4, 2}, 8);
  std::ostringstream os;
  io::write_plan_text(os, plan);
  EXPECT_EQ(os.str(), slurp(CPMV_GOLDEN_DIR "/plan_4_2.txt"));
  std::ostringstream csv;
  io::write_plan_csv(csv, plan);
  EXPECT_EQ(csv.str(), slurp(CPMV_GOLDEN_DIR "/plan_4_2.csv"));
  EXPECT_EQ(plan.q, 4);
  EXPECT_EQ(plan.lambda, 2);
}

TEST(BuildPlan, RejectsBadDelta) {
  EXPECT_THROW(build_plan({4, 2}, 7), BadDelta);
  EXPECT_THROW(build_plan({4, 2}, 0), BadDelta);
}

TEST(BuildPlan, LengthsAreQPlusSpan) {
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k < n; ++k) {
      const auto plan = build_plan({n, k}, 3 * k);
      for (int j = 0; j < n; ++j)
        EXPECT_EQ(plan.workers[static_cast<std::size_t>(j)].length(), plan.q + plan.spans[static_cast<std::size_t>(j)]);
    }
}

// Scalar stand-ins for the block products: each task's value, read as the
// coefficient of D^(offset + slot), must reproduce sum_i u~_i(D) G_ij(D).
TEST(BuildPlan, TasksExpandTheGeneratorProduct) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> dist(-5, 5);
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k < n; ++k) {
      const CodeParams params{n, k};
      const auto g = build_generator(params);
      const int q = 2 + n % 3;
      const auto plan = build_plan(params, g, q * k);
      std::vector<std::vector<double>> u(static_cast<std::size_t>(q * k));
      for (auto& b : u) b = {static_cast<double>(dist(rng))};
      const auto want = oracle::codeword(params, g, q, u);

      for (int j = 0; j < n; ++j) {
        const auto& w = plan.workers[static_cast<std::size_t>(j)];
        for (int t = 0; t < w.length(); ++t) {
          double value = 0.0;
          for (const auto& term : w.tasks[static_cast<std::size_t>(t)].terms)
            value += static_cast<double>(term.coefficient) * u[static_cast<std::size_t>(term.block)][0];
          const auto it = want.find({w.offset + t, j});
          const double expected = it == want.end() ? 0.0 : it->second[0];
          ASSERT_EQ(value, expected) << "CP(" << n << "," << k << ") worker " << j << " slot " << t;
        }
        for (const auto& [pos, v] : want)
          if (pos.second == j && v[0] != 0.0) {
            EXPECT_GE(pos.first, w.offset);
            EXPECT_LT(pos.first, w.offset + w.length());
          }
      }
    }
}

TEST(VerifyPlan, AcceptsBuiltPlansAndRejectsTampering) {
  for (int n = 2; n <= 7; ++n)
    for (int k = 1; k < n; ++k) EXPECT_TRUE(verify_plan(build_plan({n, k}, 2 * k)));

  auto plan = build_plan({4, 2}, 8);
  plan.workers[0].tasks[1].terms[0].coefficient = 2;
  EXPECT_FALSE(verify_plan(plan));

  auto shifted = build_plan({4, 2}, 8);
  shifted.workers[1].offset += 1;
  EXPECT_FALSE(verify_plan(shifted));
}

TEST(ValidateStorage, MaxLengthAgainstBudget) {
  const auto plan = build_plan({4, 2}, 8);
  EXPECT_EQ(plan.max_length(), 6);
  EXPECT_TRUE(validate_storage(plan, StorageBudget::parse("3/4")));
  EXPECT_FALSE(validate_storage(plan, StorageBudget::parse("5/8")));
  const auto big = build_plan({7, 4}, 160);
  EXPECT_TRUE(validate_storage(big, StorageBudget::parse("3/10")));
}

TEST(Materialize, CodedBlocksMatchDenseCombination) {
  std::mt19937 rng(22);
  std::normal_distribution<double> gauss;
  DenseMatrix a(37, 9);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) a.at(r, c) = gauss(rng);
  const auto plan = build_plan({5, 2}, 8);
  for (bool sparse : {false, true}) {
    const MatrixBlock full = sparse ? MatrixBlock(CsrMatrix::from_dense(a)) : MatrixBlock(a);
    const BlockMatrix blocks(full, plan.delta);
    const auto coded = materialize(plan, blocks);
    for (std::size_t j = 0; j < coded.size(); ++j)
      for (std::size_t t = 0; t < coded[j].size(); ++t) {
        const auto got = to_dense(coded[j][t]);
        EXPECT_EQ(is_sparse(coded[j][t]), sparse);
        for (std::size_t r = 0; r < blocks.block_rows(); ++r)
          for (std::size_t c = 0; c < a.cols(); ++c) {
            double want = 0.0;
            for (const auto& term : plan.workers[j].tasks[t].terms) {
              const std::size_t row = static_cast<std::size_t>(term.block) * blocks.block_rows() + r;
              if (row < a.rows()) want += static_cast<double>(term.coefficient) * a.at(row, c);
            }
            ASSERT_DOUBLE_EQ(got.at(r, c), want);
          }
      }
  }
  EXPECT_THROW(materialize(plan, BlockMatrix(MatrixBlock(a), 4)), ShapeMismatch);
}

TEST(Sparsity, ReportOnIdentity) {
  DenseMatrix eye(8, 8);
  for (std::size_t i = 0; i < 8; ++i) eye.at(i, i) = 1.0;
  const auto plan = build_plan({4, 2}, 8);
  const auto coded = materialize(plan, BlockMatrix(MatrixBlock(CsrMatrix::from_dense(eye)), 8));
  const auto rep = sparsity_report(plan, coded);
  // Systematic workers hold four distinct rows of I_8.
  EXPECT_DOUBLE_EQ(rep.worst_systematic, 1.0 - 4.0 / 32.0);
  // Worker 1 has 6 tasks with 2+4+5+5+3+1 = 20 nonzeros out of 48 entries.
  EXPECT_DOUBLE_EQ(rep.worker_sparsity[1], 1.0 - 20.0 / 48.0);
  EXPECT_DOUBLE_EQ(rep.worst_parity, rep.worker_sparsity[1]);
}

TEST(RenderTask, Formats) {
  Task t;
  EXPECT_EQ(render_task(t), "0");
  t.terms = {{1, -1}, {2, -1}, {5, 3}};
  EXPECT_EQ(render_task(t), "-A1 -A2 +3*A5");
}

}  // namespace
}  // namespace cpmv
