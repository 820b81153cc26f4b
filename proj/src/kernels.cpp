#include "agentclass/kernels.hpp"

#include <cstdint>

namespace agentclass::kernels {

namespace {

inline void col_min_max_one(const Matrix& m, std::size_t j, double& mn, double& mx) {
    double lo = m.at(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < m.rows; ++i) {
        const double v = m.at(i, j);
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    mn = lo;
    mx = hi;
}

inline void normalize_col_one(const Matrix& in, std::size_t j, double mn, double mx, Matrix& out) {
    const double range = mx - mn;
    if (range == 0.0) {
        for (std::size_t i = 0; i < in.rows; ++i) out.at(i, j) = 0.0;
        return;
    }
    for (std::size_t i = 0; i < in.rows; ++i) out.at(i, j) = (in.at(i, j) - mn) / range;
}

inline double col_sum_one(const Matrix& m, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) s += m.at(i, j);
    return s;
}

inline double deviation_weight_one(const Matrix& m, std::size_t j, double g) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double d = m.at(i, j) - g;
        s += d < 0.0 ? -d : d;
    }
    return s;
}

inline double score_row_one(const Matrix& m, const std::vector<double>& w, std::size_t i) {
    double s = 0.0;
    const double* r = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) s += w[j] * r[j];
    return s;
}

}  // namespace

void col_min_max_serial(const Matrix& m, std::vector<double>& mn, std::vector<double>& mx) {
    mn.assign(m.cols, 0.0);
    mx.assign(m.cols, 0.0);
    for (std::size_t j = 0; j < m.cols; ++j) col_min_max_one(m, j, mn[j], mx[j]);
}

void col_min_max_parallel(const Matrix& m, std::vector<double>& mn, std::vector<double>& mx) {
    mn.assign(m.cols, 0.0);
    mx.assign(m.cols, 0.0);
    const std::int64_t d = static_cast<std::int64_t>(m.cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < d; ++j) {
        col_min_max_one(m, static_cast<std::size_t>(j), mn[static_cast<std::size_t>(j)],
                        mx[static_cast<std::size_t>(j)]);
    }
}

void normalize_columns_serial(const Matrix& in, const std::vector<double>& mn,
                              const std::vector<double>& mx, Matrix& out) {
    out = Matrix(in.rows, in.cols);
    for (std::size_t j = 0; j < in.cols; ++j) normalize_col_one(in, j, mn[j], mx[j], out);
}

void normalize_columns_parallel(const Matrix& in, const std::vector<double>& mn,
                                const std::vector<double>& mx, Matrix& out) {
    out = Matrix(in.rows, in.cols);
    const std::int64_t d = static_cast<std::int64_t>(in.cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < d; ++j) {
        const std::size_t c = static_cast<std::size_t>(j);
        normalize_col_one(in, c, mn[c], mx[c], out);
    }
}

std::vector<double> col_sums_serial(const Matrix& m) {
    std::vector<double> sums(m.cols, 0.0);
    for (std::size_t j = 0; j < m.cols; ++j) sums[j] = col_sum_one(m, j);
    return sums;
}

std::vector<double> col_sums_parallel(const Matrix& m) {
    std::vector<double> sums(m.cols, 0.0);
    const std::int64_t d = static_cast<std::int64_t>(m.cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < d; ++j) {
        sums[static_cast<std::size_t>(j)] = col_sum_one(m, static_cast<std::size_t>(j));
    }
    return sums;
}

double mean_from_col_sums(const std::vector<double>& sums, std::size_t entry_count) {
    double total = 0.0;
    for (double s : sums) total += s;
    return entry_count == 0 ? 0.0 : total / static_cast<double>(entry_count);
}

std::vector<double> deviation_weights_serial(const Matrix& m, double g) {
    std::vector<double> w(m.cols, 0.0);
    for (std::size_t j = 0; j < m.cols; ++j) w[j] = deviation_weight_one(m, j, g);
    return w;
}

std::vector<double> deviation_weights_parallel(const Matrix& m, double g) {
    std::vector<double> w(m.cols, 0.0);
    const std::int64_t d = static_cast<std::int64_t>(m.cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < d; ++j) {
        w[static_cast<std::size_t>(j)] = deviation_weight_one(m, static_cast<std::size_t>(j), g);
    }
    return w;
}

std::vector<double> score_rows_serial(const Matrix& m, const std::vector<double>& w) {
    std::vector<double> s(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) s[i] = score_row_one(m, w, i);
    return s;
}

std::vector<double> score_rows_parallel(const Matrix& m, const std::vector<double>& w) {
    std::vector<double> s(m.rows, 0.0);
    const std::int64_t n = static_cast<std::int64_t>(m.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        s[static_cast<std::size_t>(i)] = score_row_one(m, w, static_cast<std::size_t>(i));
    }
    return s;
}

}  // namespace agentclass::kernels
