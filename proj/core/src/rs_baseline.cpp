// SPDX-License-Identifier: Apache-2.0

#include "cpmv/rs_baseline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpmv/errors.hpp"

namespace cpmv {

RSConfig RSConfig::equally_spaced(int n, int delta, int jobs_per_worker) {
  RSConfig cfg{n, delta, jobs_per_worker, {}};
  const int count = n * jobs_per_worker;
  if (count < 1) throw InvalidParams("RS config needs at least one evaluation point");
  cfg.points.resize(static_cast<std::size_t>(count));
  for (int p = 0; p < count; ++p)
    cfg.points[static_cast<std::size_t>(p)] =
        count == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(p) / static_cast<double>(count - 1);
  cfg.validate();
  return cfg;
}

int RSConfig::resilience() const {
  int s = -1;
  while (s + 1 <= n && (n - (s + 1)) * jobs_per_worker >= delta) ++s;
  return s;
}

void RSConfig::validate() const {
  if (n < 1 || delta < 1 || jobs_per_worker < 1)
    throw InvalidParams("RS config needs positive n, delta and jobs per worker");
  if (static_cast<int>(points.size()) != n * jobs_per_worker)
    throw InvalidParams("RS config needs n * jobs_per_worker evaluation points");
  if (n * jobs_per_worker < delta)
    throw InvalidParams("RS config cannot recover delta blocks even with no stragglers");
  std::vector<double> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DuplicatePoints("RS evaluation points must be distinct");
}

std::vector<double> RSConfig::worker_points(int worker) const {
  std::vector<double> out;
  for (int t = 0; t < jobs_per_worker; ++t) out.push_back(points.at(static_cast<std::size_t>(worker + t * n)));
  return out;
}

std::vector<std::vector<MatrixBlock>> rs_encode(const BlockMatrix& a, const RSConfig& cfg) {
  cfg.validate();
  if (a.delta() != cfg.delta)
    throw ShapeMismatch("rs_encode: A has " + std::to_string(a.delta()) + " block-rows, config expects " +
                        std::to_string(cfg.delta));
  std::vector<std::vector<MatrixBlock>> out(static_cast<std::size_t>(cfg.n));
  std::vector<std::pair<const MatrixBlock*, double>> terms;
  for (int w = 0; w < cfg.n; ++w) {
    for (double z : cfg.worker_points(w)) {
      terms.clear();
      double power = 1.0;
      for (int j = 0; j < cfg.delta; ++j) {
        if (power != 0.0) terms.emplace_back(&a.block(j), power);
        power *= z;
      }
      out[static_cast<std::size_t>(w)].push_back(
          linear_combination(terms, a.block_rows(), a.cols(), a.sparse()));
    }
  }
  return out;
}

std::vector<double> vandermonde(std::span<const double> points) {
  const std::size_t m = points.size();
  std::vector<double> v(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    double power = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      v[a * m + j] = power;
      power *= points[a];
    }
  }
  return v;
}

std::vector<std::vector<double>> rs_decode(std::span<const RSResponse> responses, const RSConfig& cfg) {
  const auto d = static_cast<std::size_t>(cfg.delta);
  if (responses.size() < d)
    throw SingularSystem("rs_decode: need " + std::to_string(d) + " responses, got " +
                         std::to_string(responses.size()));
  const auto used = responses.first(d);
  std::vector<double> pts;
  for (const auto& r : used) pts.push_back(r.point);
  std::vector<double> sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw SingularSystem("rs_decode: coincident evaluation points");

  const std::size_t len = used.front().value.size();
  const auto v = vandermonde(pts);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> vm(
      v.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  Eigen::MatrixXd rhs(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(len));
  for (std::size_t a = 0; a < d; ++a) {
    if (used[a].value.size() != len) throw ShapeMismatch("rs_decode: response length mismatch");
    for (std::size_t e = 0; e < len; ++e)
      rhs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(e)) = used[a].value[e];
  }
  const Eigen::MatrixXd sol = Eigen::MatrixXd(vm).partialPivLu().solve(rhs);

  std::vector<std::vector<double>> blocks(d, std::vector<double>(len));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t e = 0; e < len; ++e)
      blocks[j][e] = sol(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(e));
  return blocks;
}

double condition_number(std::span<const double> points) {
  if (points.empty()) return 1.0;
  const auto m = static_cast<Eigen::Index>(points.size());
  const auto v = vandermonde(points);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> vm(v.data(), m, m);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(vm);
  const auto& sv = svd.singularValues();
  const double smin = sv(m - 1);
  return smin == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / smin;
}

}  // namespace cpmv
