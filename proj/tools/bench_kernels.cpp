// Times the serial reference kernels against their OpenMP variants on one
// random matrix and verifies the outputs are bit-identical while at it.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "agentclass/kernels.hpp"
#include "agentclass/numfmt.hpp"
#include "agentclass/rng.hpp"

namespace {

using namespace agentclass;
using Clock = std::chrono::steady_clock;

double median_ms(std::vector<double>& samples) {
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    return n % 2 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
}

template <typename F>
double time_ms(F&& f, std::size_t reps) {
    std::vector<double> samples;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        f();
        const auto t1 = Clock::now();
        samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return median_ms(samples);
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t rows = 200000;
    std::size_t cols = 8;
    std::size_t reps = 5;
    std::uint64_t seed = 42;

    CLI::App app{"serial vs OpenMP kernel comparison"};
    app.add_option("--rows", rows, "matrix rows");
    app.add_option("--cols", cols, "matrix cols");
    app.add_option("--reps", reps, "repetitions per kernel (median reported)");
    app.add_option("--seed", seed, "data seed");
    CLI11_PARSE(app, argc, argv);

    DetRng rng(seed);
    Matrix m(rows, cols);
    for (double& v : m.data) v = rng.uniform(-1000.0, 1000.0);
    std::vector<double> w(cols);
    for (double& v : w) v = rng.unit();

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif
    std::printf("matrix: %zu x %zu, %zu reps, median ms\n\n", rows, cols, reps);
    std::printf("%-18s %10s %10s %8s  %s\n", "kernel", "serial", "parallel", "speedup", "identical");

    int mismatches = 0;
    auto report = [&](const char* name, double serial_ms, double parallel_ms, bool identical) {
        std::printf("%-18s %10.3f %10.3f %7.2fx  %s\n", name, serial_ms, parallel_ms,
                    parallel_ms > 0 ? serial_ms / parallel_ms : 0.0, identical ? "yes" : "NO");
        if (!identical) ++mismatches;
    };

    {
        std::vector<double> mn_s, mx_s, mn_p, mx_p;
        const double ts = time_ms([&] { kernels::col_min_max_serial(m, mn_s, mx_s); }, reps);
        const double tp = time_ms([&] { kernels::col_min_max_parallel(m, mn_p, mx_p); }, reps);
        report("col_min_max", ts, tp, mn_s == mn_p && mx_s == mx_p);

        Matrix out_s(rows, cols), out_p(rows, cols);
        const double ns = time_ms([&] { kernels::normalize_columns_serial(m, mn_s, mx_s, out_s); }, reps);
        const double np = time_ms([&] { kernels::normalize_columns_parallel(m, mn_p, mx_p, out_p); }, reps);
        report("normalize_columns", ns, np, out_s.data == out_p.data);
    }
    {
        std::vector<double> s, p;
        const double ts = time_ms([&] { s = kernels::col_sums_serial(m); }, reps);
        const double tp = time_ms([&] { p = kernels::col_sums_parallel(m); }, reps);
        report("col_sums", ts, tp, s == p);

        const double g = kernels::mean_from_col_sums(s, rows * cols);
        std::vector<double> dw_s, dw_p;
        const double ds = time_ms([&] { dw_s = kernels::deviation_weights_serial(m, g); }, reps);
        const double dp = time_ms([&] { dw_p = kernels::deviation_weights_parallel(m, g); }, reps);
        report("deviation_weights", ds, dp, dw_s == dw_p);
    }
    {
        std::vector<double> s, p;
        const double ts = time_ms([&] { s = kernels::score_rows_serial(m, w); }, reps);
        const double tp = time_ms([&] { p = kernels::score_rows_parallel(m, w); }, reps);
        report("score_rows", ts, tp, s == p);
    }

    if (mismatches) {
        std::printf("\n%d kernel(s) diverged from the serial reference\n", mismatches);
        return 1;
    }
    return 0;
}
