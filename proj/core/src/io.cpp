// SPDX-License-Identifier: Apache-2.0

#include "cpmv/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <tuple>

#include "cpmv/errors.hpp"

namespace cpmv::io {

namespace fs = std::filesystem;

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& is, const fs::path& path) {
  std::array<char, sizeof(T)> bytes;
  if (!is.read(bytes.data(), bytes.size())) throw IoError(path.string() + ": truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T v;
  std::memcpy(&v, bytes.data(), sizeof(T));
  return v;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream is(path, mode);
  if (!is) throw IoError("cannot open " + path.string() + " for reading");
  return is;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ostream& os, const fs::path& path) {
  os.flush();
  if (!os) throw IoError("failed writing " + path.string());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, const fs::path& path) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw IoError(path.string() + ": bad integer '" + s + "'");
  return v;
}

std::string symbol_file(int col, int row) {
  return "c" + std::to_string(col) + "_r" + std::to_string(row) + ".bin";
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

CsrMatrix read_matrix_market(const fs::path& path) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw IoError(path.string() + ": empty file");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  };
  if (tag != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate" ||
      (lower(field) != "real" && lower(field) != "integer") || lower(symmetry) != "general")
    throw IoError(path.string() + ": only 'matrix coordinate real general' is supported");

  while (std::getline(is, line) && (line.empty() || line[0] == '%')) {
  }
  std::size_t rows = 0, cols = 0, entries = 0;
  if (!(std::istringstream(line) >> rows >> cols >> entries)) throw IoError(path.string() + ": bad size line");

  std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
  triplets.reserve(entries);
  for (std::size_t e = 0; e < entries; ++e) {
    std::size_t r = 0, c = 0;
    double v = 0.0;
    if (!(is >> r >> c >> v)) throw IoError(path.string() + ": expected " + std::to_string(entries) + " entries");
    if (r < 1 || r > rows || c < 1 || c > cols) throw IoError(path.string() + ": entry index out of range");
    triplets.emplace_back(r - 1, c - 1, v);
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(triplets));
}

void write_matrix_market(const fs::path& path, const MatrixBlock& m) {
  const CsrMatrix csr = std::holds_alternative<CsrMatrix>(m) ? std::get<CsrMatrix>(m)
                                                              : CsrMatrix::from_dense(std::get<DenseMatrix>(m));
  auto os = open_out(path);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << csr.rows() << ' ' << csr.cols() << ' ' << csr.nnz() << '\n';
  for (std::size_t r = 0; r < csr.rows(); ++r)
    for (std::size_t e = csr.row_ptr()[r]; e < csr.row_ptr()[r + 1]; ++e)
      os << r + 1 << ' ' << csr.col_idx()[e] + 1 << ' ' << format_double(csr.values()[e]) << '\n';
  finish(os, path);
}

DenseMatrix read_raw_matrix(const fs::path& path) {
  auto is = open_in(path, std::ios::binary);
  const auto rows = get_le<std::uint64_t>(is, path);
  const auto cols = get_le<std::uint64_t>(is, path);
  std::vector<double> data(static_cast<std::size_t>(rows * cols));
  for (double& v : data) v = get_le<double>(is, path);
  return DenseMatrix(rows, cols, std::move(data));
}

void write_raw_matrix(const fs::path& path, const DenseMatrix& m) {
  auto os = open_out(path, std::ios::binary);
  put_le<std::uint64_t>(os, m.rows());
  put_le<std::uint64_t>(os, m.cols());
  for (double v : m.data()) put_le(os, v);
  finish(os, path);
}

MatrixBlock read_matrix(const fs::path& path) {
  if (path.extension() == ".mtx") return read_matrix_market(path);
  return read_raw_matrix(path);
}

void write_matrix(const fs::path& path, const MatrixBlock& m) {
  if (path.extension() == ".mtx")
    write_matrix_market(path, m);
  else
    write_raw_matrix(path, to_dense(m));
}

std::vector<double> read_vector(const fs::path& path) {
  auto is = open_in(path, std::ios::binary);
  const auto len = get_le<std::uint64_t>(is, path);
  std::vector<double> v(static_cast<std::size_t>(len));
  for (double& e : v) e = get_le<double>(is, path);
  return v;
}

void write_vector(const fs::path& path, std::span<const double> v) {
  auto os = open_out(path, std::ios::binary);
  put_le<std::uint64_t>(os, v.size());
  for (double e : v) put_le(os, e);
  finish(os, path);
}

void write_plan_text(std::ostream& os, const JobPlan& plan) {
  os << "# CP(" << plan.params.n << ',' << plan.params.k << ") delta=" << plan.delta << " q=" << plan.q
     << " lambda=" << plan.lambda << '\n';
  for (std::size_t w = 0; w < plan.workers.size(); ++w) {
    const auto& jobs = plan.workers[w];
    os << "# worker " << w << " offset " << jobs.offset << " length " << jobs.length() << '\n';
    for (std::size_t t = 0; t < jobs.tasks.size(); ++t)
      os << w << ' ' << t << ": " << render_task(jobs.tasks[t]) << '\n';
  }
}

void write_plan_csv(std::ostream& os, const JobPlan& plan) {
  os << "worker,offset,slot,row,block,coefficient\n";
  for (std::size_t w = 0; w < plan.workers.size(); ++w) {
    const auto& jobs = plan.workers[w];
    for (std::size_t t = 0; t < jobs.tasks.size(); ++t) {
      const auto row = jobs.offset + static_cast<int>(t);
      const auto prefix = std::to_string(w) + ',' + std::to_string(jobs.offset) + ',' + std::to_string(t) + ',' +
                          std::to_string(row) + ',';
      if (jobs.tasks[t].terms.empty()) os << prefix << ",\n";
      for (const auto& term : jobs.tasks[t].terms) os << prefix << term.block << ',' << term.coefficient << '\n';
    }
  }
}

void write_grid(const fs::path& dir, const GridShape& shape, const RunResult& run) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::ostringstream csv;
  csv << "col,row,value_file,known\n";
  for (int j = 0; j < shape.n(); ++j) {
    const auto& out = run.workers.at(static_cast<std::size_t>(j));
    for (int t = 0; t < shape.lengths.at(static_cast<std::size_t>(j)); ++t) {
      const int row = shape.row_begin(j) + t;
      const bool known = !out.failed && static_cast<std::size_t>(t) < out.results.size();
      csv << j << ',' << row << ',';
      if (known) {
        const auto file = symbol_file(j, row);
        write_vector(dir / file, out.results[static_cast<std::size_t>(t)]);
        csv << file;
      }
      csv << ',' << (known ? 1 : 0) << '\n';
    }
  }
  write_output(dir / "grid.csv", csv.str());
}

LoadedGrid read_grid(const fs::path& dir, const GridShape& shape) {
  const auto index = dir / "grid.csv";
  auto is = open_in(index);
  std::string line;
  if (!std::getline(is, line) || split_csv(line) != std::vector<std::string>{"col", "row", "value_file", "known"})
    throw IoError(index.string() + ": unexpected header");

  std::map<std::pair<int, int>, std::vector<double>> symbols;
  std::size_t block_len = 0;
  bool have_len = false;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != 4) throw IoError(index.string() + ": malformed line '" + line + "'");
    const int col = parse_int(fields[0], index);
    const int row = parse_int(fields[1], index);
    if (col < 0 || col >= shape.n() || !shape.in_support(row, col))
      throw IoError(index.string() + ": position (" + fields[0] + "," + fields[1] + ") is outside the plan");
    if (parse_int(fields[3], index) == 0) continue;
    auto v = read_vector(dir / fields[2]);
    if (have_len && v.size() != block_len) throw IoError(index.string() + ": symbol lengths differ");
    block_len = v.size();
    have_len = true;
    symbols[{col, row}] = std::move(v);
  }

  std::vector<int> missing;
  std::vector<int> present;
  for (int j = 0; j < shape.n(); ++j) {
    bool full = true;
    for (int row = shape.row_begin(j); row < shape.row_end(j); ++row) full = full && symbols.count({j, row}) > 0;
    (full ? present : missing).push_back(j);
  }
  LoadedGrid out{SymbolGrid<double>(shape, block_len), StragglerSet(missing, shape.n())};
  for (int j : present)
    for (int row = shape.row_begin(j); row < shape.row_end(j); ++row)
      out.grid.set_known(row, j, std::move(symbols[{j, row}]));
  return out;
}

void write_decode_trace(std::ostream& os, const DecodeTrace& trace) {
  os << "step,row,col,slope,line,phase\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    os << i << ',' << s.row << ',' << s.col << ',' << s.slope << ',' << s.line << ',' << s.phase << '\n';
  }
}

void write_run_trace(std::ostream& os, const RunResult& run) {
  os << "worker,task_index,start,end,nnz\n";
  for (const auto& r : run.trace)
    os << r.worker << ',' << r.task << ',' << format_double(r.start) << ',' << format_double(r.end) << ','
       << r.nnz << '\n';
}

void write_verify_csv(std::ostream& os, const PolyMatrix& g, const PolyMatrix& h) {
  os << "matrix,row,col,min_exp,coeffs\n";
  auto dump = [&](const char* name, const PolyMatrix& m) {
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) {
        const auto& p = m.at(r, c);
        os << name << ',' << r << ',' << c << ',' << p.min_exp() << ',';
        bool first = true;
        for (const auto& coeff : p.coeffs()) {
          if (!first) os << ' ';
          first = false;
          os << coeff.get_str();
        }
        os << '\n';
      }
  };
  dump("G", g);
  dump("H", h);
}

void write_output(const fs::path& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  auto os = open_out(path, std::ios::binary);
  os << contents;
  finish(os, path);
}

}  // namespace cpmv::io
