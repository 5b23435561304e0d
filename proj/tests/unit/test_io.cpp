// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "cpmv/config.hpp"
#include "cpmv/errors.hpp"
#include "cpmv/io.hpp"
#include "cpmv/runtime.hpp"

namespace cpmv {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cpmv_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

using IoTest = TempDir;

TEST(FormatDouble, RoundTrips) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = g(rng);
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::format_double(70.0), "70");
}

TEST_F(IoTest, MatrixMarketRoundTrip) {
  const auto m = gen_banded(30, 3, 2);
  io::write_matrix_market(dir_ / "a.mtx", m);
  EXPECT_EQ(io::read_matrix_market(dir_ / "a.mtx"), m);
  const auto via_dispatch = io::read_matrix(dir_ / "a.mtx");
  EXPECT_TRUE(std::holds_alternative<CsrMatrix>(via_dispatch));
}

TEST_F(IoTest, MatrixMarketParsesCommentsAndDuplicates) {
  std::ofstream(dir_ / "b.mtx") << "%%MatrixMarket matrix coordinate real general\n"
                                   "% comment\n"
                                   "2 3 3\n"
                                   "1 1 1.5\n"
                                   "2 3 -2\n"
                                   "1 1 0.5\n";
  const auto d = io::read_matrix_market(dir_ / "b.mtx").to_dense();
  EXPECT_EQ(d.at(0, 0), 2.0);
  EXPECT_EQ(d.at(1, 2), -2.0);
  EXPECT_EQ(d.nnz(), 2u);
}

TEST_F(IoTest, MatrixMarketRejectsUnsupported) {
  std::ofstream(dir_ / "c.mtx") << "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n";
  EXPECT_THROW(io::read_matrix_market(dir_ / "c.mtx"), IoError);
  std::ofstream(dir_ / "d.mtx") << "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n";
  EXPECT_THROW(io::read_matrix_market(dir_ / "d.mtx"), IoError);
  EXPECT_THROW(io::read_matrix_market(dir_ / "missing.mtx"), IoError);
}

TEST_F(IoTest, RawMatrixRoundTripAndLayout) {
  DenseMatrix m(2, 3, {1, 2, 3, 4, 5, std::numeric_limits<double>::denorm_min()});
  io::write_raw_matrix(dir_ / "m.bin", m);
  EXPECT_EQ(io::read_raw_matrix(dir_ / "m.bin"), m);
  EXPECT_EQ(fs::file_size(dir_ / "m.bin"), 16u + 6u * 8u);

  std::ifstream is(dir_ / "m.bin", std::ios::binary);
  unsigned char header[16];
  is.read(reinterpret_cast<char*>(header), 16);
  EXPECT_EQ(header[0], 2);
  EXPECT_EQ(header[8], 3);
  for (int b = 1; b < 8; ++b) EXPECT_EQ(header[b], 0);
}

TEST_F(IoTest, RawMatrixTruncated) {
  std::ofstream(dir_ / "t.bin", std::ios::binary).write("\x02\0\0\0\0\0\0\0\x02\0\0\0\0\0\0\0abc", 19);
  EXPECT_THROW(io::read_raw_matrix(dir_ / "t.bin"), IoError);
}

TEST_F(IoTest, VectorRoundTrip) {
  const auto v = gen_vector(17, 3);
  io::write_vector(dir_ / "v.bin", v);
  EXPECT_EQ(io::read_vector(dir_ / "v.bin"), v);
  io::write_vector(dir_ / "e.bin", std::vector<double>{});
  EXPECT_TRUE(io::read_vector(dir_ / "e.bin").empty());
}

TEST_F(IoTest, GridRoundTrip) {
  const auto plan = build_plan({4, 2}, 8);
  const auto a = gen_gaussian(16, 5, 1);
  const auto x = gen_vector(5, 1);
  StragglerPolicy policy;
  policy.workers = {1};
  const auto run = run_workers(materialize(plan, BlockMatrix(MatrixBlock(a), 8)), x, policy, {}, 1);
  const auto shape = GridShape::for_plan(plan);
  io::write_grid(dir_ / "grid", shape, run);
  auto loaded = io::read_grid(dir_ / "grid", shape);
  EXPECT_EQ(loaded.missing.size(), 1);
  EXPECT_EQ(loaded.missing[0], 1);
  for (int j : {0, 2, 3})
    for (int t = 0; t < shape.lengths[static_cast<std::size_t>(j)]; ++t)
      EXPECT_EQ(loaded.grid.value(shape.row_begin(j) + t, j), run.workers[static_cast<std::size_t>(j)].results[static_cast<std::size_t>(t)]);
  EXPECT_FALSE(loaded.grid.column_known(1));
}

TEST(TraceCsv, Formats) {
  DecodeTrace t;
  t.steps.push_back({0, 2, 1, 2, 0});
  std::ostringstream os;
  io::write_decode_trace(os, t);
  EXPECT_EQ(os.str(), "step,row,col,slope,line,phase\n0,0,2,1,2,0\n");

  RunResult r;
  r.trace.push_back({1, 0, 0.0, 0.25, 12, 0.0});
  std::ostringstream rs;
  io::write_run_trace(rs, r);
  EXPECT_EQ(rs.str(), "worker,task_index,start,end,nnz\n1,0,0,0.25,12\n");
}

TEST(ConfigParse, KeyValuesCommentsAndPrecedence) {
  const auto cfg = Config::parse("# header\n n = 7 \nk=4 # trailing\n\ngamma = 3/10\nsnr_db = 70, 80, inf\nn = 8\n");
  EXPECT_EQ(cfg.get_int("n", 0), 8);
  EXPECT_EQ(cfg.get_int("k", 0), 4);
  EXPECT_EQ(cfg.get_string("gamma", ""), "3/10");
  const auto snr = cfg.get_doubles("snr_db", {});
  ASSERT_EQ(snr.size(), 3u);
  EXPECT_EQ(snr[1], 80.0);
  EXPECT_TRUE(std::isinf(snr[2]));
  EXPECT_EQ(cfg.get_int("missing", 5), 5);
  EXPECT_FALSE(cfg.has("missing"));
}

TEST(ConfigParse, Errors) {
  EXPECT_THROW(Config::parse("just words\n"), InvalidParams);
  EXPECT_THROW(Config::parse(" = 3\n"), InvalidParams);
  const auto cfg = Config::parse("n = seven\nflag = maybe\n");
  EXPECT_THROW(cfg.get_int("n", 0), InvalidParams);
  EXPECT_THROW(cfg.get_bool("flag", false), InvalidParams);
  EXPECT_THROW(cfg.require_known({"n"}), InvalidParams);
  EXPECT_NO_THROW(cfg.require_known({"n", "flag"}));
  EXPECT_THROW(Config::load("/nonexistent/cpmv.cfg"), IoError);
}

TEST(ConfigParse, Lists) {
  auto cfg = Config::parse("a = 1,2, 3\nb =\n");
  EXPECT_EQ(cfg.get_ints("a", {}), (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(cfg.get_ints("b", {9}).empty());
  cfg.set("b", "4");
  EXPECT_EQ(cfg.get_ints("b", {}), (std::vector<int>{4}));
}

}  // namespace
}  // namespace cpmv
