// SPDX-License-Identifier: Apache-2.0

#include "cpmv/planner.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "cpmv/errors.hpp"

namespace cpmv {

namespace {

Rational parse_rational(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw InvalidParams("empty rational");
  if (s.find('.') == std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw InvalidParams("cannot parse rational '" + s + "'");
    r.canonicalize();
    return r;
  }
  // Exact decimal: "0.3" -> 3/10.
  const auto dot = s.find('.');
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  if (digits.empty() || digits == "-" || digits == "+")
    throw InvalidParams("cannot parse rational '" + s + "'");
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw InvalidParams("cannot parse rational '" + s + "'");
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::int64_t to_int64(const Rational& c) {
  if (c.get_den() != 1 || !c.get_num().fits_slong_p())
    throw std::logic_error("generator coefficient is not a machine integer: " + c.get_str());
  return c.get_num().get_si();
}

}  // namespace

StorageBudget StorageBudget::parse(std::string_view text) {
  StorageBudget b{parse_rational(text)};
  if (b.gamma <= 0 || b.gamma > 1)
    throw InvalidParams("gamma must lie in (0, 1], got " + b.gamma.get_str());
  return b;
}

int JobPlan::max_length() const {
  int best = 0;
  for (const auto& w : workers) best = std::max(best, w.length());
  return best;
}

int choose_delta(const CodeParams& params, const StorageBudget& budget, int lambda) {
  params.validate();
  const Rational slack = budget.gamma - Rational(1, params.k);
  if (slack <= 0)
    throw InfeasibleBudget("storage fraction " + budget.gamma.get_str() +
                           " does not exceed 1/k = 1/" + std::to_string(params.k));
  const Rational bound = Rational(lambda) / slack;
  // ceil(bound / k) * k, using exact integer arithmetic.
  const Rational per_stream = bound / params.k;
  mpz_class blocks = per_stream.get_num() / per_stream.get_den();
  if (blocks * per_stream.get_den() < per_stream.get_num()) ++blocks;
  if (blocks < 1) blocks = 1;
  const mpz_class delta = blocks * params.k;
  if (!delta.fits_sint_p()) throw InfeasibleBudget("required delta overflows");
  return static_cast<int>(delta.get_si());
}

JobPlan build_plan(const CodeParams& params, int delta) {
  return build_plan(params, build_generator(params), delta);
}

JobPlan build_plan(const CodeParams& params, const PolyMatrix& generator, int delta) {
  params.validate();
  if (generator.rows() != params.k || generator.cols() != params.n)
    throw DimensionMismatch("generator shape does not match CP(n,k)");
  if (delta < params.k || delta % params.k != 0)
    throw BadDelta("delta must be a positive multiple of k, got " + std::to_string(delta));

  JobPlan plan;
  plan.params = params;
  plan.delta = delta;
  plan.q = delta / params.k;
  plan.spans = column_spans(generator);
  plan.lambda = *std::max_element(plan.spans.begin(), plan.spans.end());
  plan.workers.resize(static_cast<std::size_t>(params.n));

  for (int j = 0; j < params.n; ++j) {
    int offset = std::numeric_limits<int>::max();
    for (int i = 0; i < params.k; ++i)
      if (!generator.at(i, j).is_zero()) offset = std::min(offset, generator.at(i, j).min_exp());

    WorkerJobs& w = plan.workers[static_cast<std::size_t>(j)];
    w.offset = offset;
    const int length = plan.q + plan.spans[static_cast<std::size_t>(j)];
    w.tasks.resize(static_cast<std::size_t>(length));
    for (int slot = 0; slot < length; ++slot) {
      const int e = offset + slot;
      Task& task = w.tasks[static_cast<std::size_t>(slot)];
      // Coefficient of D^e in sum_i u~_i(D) G_ij(D): u_{iq+t} contributes
      // the coefficient of D^(e-t) in G_ij. Block indices grow with (i, t).
      for (int i = 0; i < params.k; ++i) {
        const LaurentPoly& g = generator.at(i, j);
        if (g.is_zero()) continue;
        for (int t = 0; t < plan.q; ++t) {
          const Rational c = g.coeff(e - t);
          if (c != 0) task.terms.push_back({i * plan.q + t, to_int64(c)});
        }
      }
    }
  }
  return plan;
}

bool verify_plan(const JobPlan& plan) {
  const int n = plan.params.n;
  const int s = plan.params.s();
  if (static_cast<int>(plan.workers.size()) != n) return false;

  for (int m = 0; m < s; ++m) {
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (int j = 0; j < n; ++j) {
      const auto& w = plan.workers[static_cast<std::size_t>(j)];
      if (w.tasks.empty()) continue;
      lo = std::min(lo, w.offset + m * j);
      hi = std::max(hi, w.offset + w.length() - 1 + m * j);
    }
    for (int line = lo; line <= hi; ++line) {
      std::map<int, std::int64_t> sum;
      for (int j = 0; j < n; ++j) {
        const auto& w = plan.workers[static_cast<std::size_t>(j)];
        const int slot = line - m * j - w.offset;
        if (slot < 0 || slot >= w.length()) continue;
        for (const auto& term : w.tasks[static_cast<std::size_t>(slot)].terms)
          sum[term.block] += term.coefficient;
      }
      for (const auto& [block, c] : sum)
        if (c != 0) return false;
    }
  }
  return true;
}

bool validate_storage(const JobPlan& plan, const StorageBudget& budget) {
  return Rational(plan.max_length()) <= budget.gamma * plan.delta;
}

std::vector<std::vector<MatrixBlock>> materialize(const JobPlan& plan, const BlockMatrix& a) {
  if (a.delta() != plan.delta)
    throw ShapeMismatch("materialize: A has " + std::to_string(a.delta()) +
                        " block-rows, plan expects " + std::to_string(plan.delta));
  std::vector<std::vector<MatrixBlock>> out(plan.workers.size());
  std::vector<std::pair<const MatrixBlock*, double>> terms;
  for (std::size_t j = 0; j < plan.workers.size(); ++j) {
    out[j].reserve(plan.workers[j].tasks.size());
    for (const auto& task : plan.workers[j].tasks) {
      terms.clear();
      for (const auto& term : task.terms)
        terms.emplace_back(&a.block(term.block), static_cast<double>(term.coefficient));
      // A lone unit term is stored as a copy of the block itself.
      if (terms.size() == 1 && task.terms.front().coefficient == 1)
        out[j].push_back(*terms.front().first);
      else
        out[j].push_back(linear_combination(terms, a.block_rows(), a.cols(), a.sparse()));
    }
  }
  return out;
}

double aggregate_sparsity(const std::vector<MatrixBlock>& blocks) {
  double total = 0.0;
  double nonzero = 0.0;
  for (const auto& b : blocks) {
    total += static_cast<double>(rows(b)) * static_cast<double>(cols(b));
    nonzero += static_cast<double>(nnz(b));
  }
  return total == 0.0 ? 1.0 : 1.0 - nonzero / total;
}

SparsityReport sparsity_report(const JobPlan& plan,
                               const std::vector<std::vector<MatrixBlock>>& coded) {
  if (coded.size() != plan.workers.size())
    throw ShapeMismatch("sparsity_report: worker count mismatch");
  SparsityReport rep;
  const int s = plan.params.s();
  for (std::size_t j = 0; j < coded.size(); ++j) {
    const double sp = aggregate_sparsity(coded[j]);
    rep.worker_sparsity.push_back(sp);
    if (static_cast<int>(j) < s)
      rep.worst_parity = std::min(rep.worst_parity, sp);
    else
      rep.worst_systematic = std::min(rep.worst_systematic, sp);
  }
  return rep;
}

std::string render_task(const Task& task) {
  if (task.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : task.terms) {
    if (!first) os << ' ';
    first = false;
    os << (t.coefficient < 0 ? '-' : '+');
    const auto mag = t.coefficient < 0 ? -t.coefficient : t.coefficient;
    if (mag != 1) os << mag << '*';
    os << 'A' << t.block;
  }
  return os.str();
}

}  // namespace cpmv
