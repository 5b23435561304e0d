// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cpmv/codegen.hpp"
#include "cpmv/matrix.hpp"
#include "cpmv/peeling.hpp"
#include "cpmv/planner.hpp"
#include "cpmv/runtime.hpp"

namespace cpmv::io {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Matrix Market "coordinate real general". Reading yields CSR storage.
CsrMatrix read_matrix_market(const std::filesystem::path& path);
void write_matrix_market(const std::filesystem::path& path, const MatrixBlock& m);

/// u64 rows, u64 cols, then rows*cols little-endian doubles in row-major order.
DenseMatrix read_raw_matrix(const std::filesystem::path& path);
void write_raw_matrix(const std::filesystem::path& path, const DenseMatrix& m);

/// ".mtx" selects Matrix Market, anything else the raw format.
MatrixBlock read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const MatrixBlock& m);

/// u64 length followed by little-endian doubles.
std::vector<double> read_vector(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, std::span<const double> v);

/// One line per task: "<worker> <slot>: <task>", preceded by a comment header.
void write_plan_text(std::ostream& os, const JobPlan& plan);
/// worker,offset,slot,row,block,coefficient with one line per term; zero
/// tasks appear with empty block and coefficient.
void write_plan_csv(std::ostream& os, const JobPlan& plan);

/// Writes every worker's task outputs as vector files plus grid.csv with
/// columns col,row,value_file,known. Failed workers are listed with
/// known=0 and no file.
void write_grid(const std::filesystem::path& dir, const GridShape& shape, const RunResult& run);

struct LoadedGrid {
  SymbolGrid<double> grid;
  StragglerSet missing;
};

/// Reads a directory written by write_grid against the expected shape. A
/// column counts as present only if every one of its symbols is known.
LoadedGrid read_grid(const std::filesystem::path& dir, const GridShape& shape);

/// step,row,col,slope,line,phase
void write_decode_trace(std::ostream& os, const DecodeTrace& trace);
/// worker,task_index,start,end,nnz
void write_run_trace(std::ostream& os, const RunResult& run);

/// matrix,row,col,min_exp,coeffs with coefficients ascending from min_exp
/// separated by spaces.
void write_verify_csv(std::ostream& os, const PolyMatrix& g, const PolyMatrix& h);

/// Writes to a file or, for an empty path or "-", to stdout. Throws IoError.
void write_output(const std::filesystem::path& path, const std::string& contents);

}  // namespace cpmv::io
