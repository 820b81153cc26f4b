#pragma once

#include <cstddef>
#include <vector>

#include "agentclass/matrix.hpp"

// Data-parallel inner loops of the preprocessing and scoring pipeline.
//
// Every kernel exists twice: a *_serial reference and a *_parallel OpenMP
// variant. The accumulation order is fixed for both: ascending rows within a
// column (or ascending columns within a row for row scores), partial results
// combined in ascending index order. The parallel variants only distribute
// independent columns/rows across threads, so their output is bit-identical
// to the serial reference on any thread count. Tests and the bench tool
// compare the two directly.

namespace agentclass::kernels {

// Per-column minima and maxima.
void col_min_max_serial(const Matrix& m, std::vector<double>& mn, std::vector<double>& mx);
void col_min_max_parallel(const Matrix& m, std::vector<double>& mn, std::vector<double>& mx);

// Min-max rescaling into [0,1]; columns with mn == mx map to 0.
void normalize_columns_serial(const Matrix& in, const std::vector<double>& mn,
                              const std::vector<double>& mx, Matrix& out);
void normalize_columns_parallel(const Matrix& in, const std::vector<double>& mn,
                                const std::vector<double>& mx, Matrix& out);

// Column sums, each accumulated over ascending rows.
std::vector<double> col_sums_serial(const Matrix& m);
std::vector<double> col_sums_parallel(const Matrix& m);

// Mean of all entries from column sums, combined left to right.
double mean_from_col_sums(const std::vector<double>& sums, std::size_t entry_count);

// Per-column sum of absolute deviations from g.
std::vector<double> deviation_weights_serial(const Matrix& m, double g);
std::vector<double> deviation_weights_parallel(const Matrix& m, double g);

// Per-row dot product with w (w.size() == m.cols), ascending columns.
std::vector<double> score_rows_serial(const Matrix& m, const std::vector<double>& w);
std::vector<double> score_rows_parallel(const Matrix& m, const std::vector<double>& w);

}  // namespace agentclass::kernels
