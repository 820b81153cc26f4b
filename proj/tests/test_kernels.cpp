#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "agentclass/kernels.hpp"
#include "agentclass/matrix.hpp"
#include "agentclass/rng.hpp"

#include "testutil.hpp"

using namespace agentclass;
namespace k = agentclass::kernels;

TEST_CASE("col_min_max finds per-column extrema") {
    Matrix m(3, 2);
    m.data = {2, -1, 4, 5, 6, -3};
    std::vector<double> mn, mx;
    k::col_min_max_serial(m, mn, mx);
    CHECK(mn == std::vector<double>{2, -3});
    CHECK(mx == std::vector<double>{6, 5});
}

TEST_CASE("normalize_columns rescales into [0,1] and zeroes constant columns") {
    Matrix m(3, 2);
    m.data = {2, 5, 4, 5, 6, 5};
    std::vector<double> mn, mx;
    k::col_min_max_serial(m, mn, mx);
    Matrix out(3, 2);
    k::normalize_columns_serial(m, mn, mx, out);
    CHECK(out.at(0, 0) == 0.0);
    CHECK(out.at(1, 0) == 0.5);
    CHECK(out.at(2, 0) == 1.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(out.at(i, 1) == 0.0);
}

TEST_CASE("col_sums accumulates rows in ascending order") {
    Matrix m(4, 1);
    // Chosen so a reversed accumulation order gives a different last bit.
    m.data = {1e16, 1.0, 1.0, 1.0};
    double expect = 0.0;
    for (std::size_t i = 0; i < 4; ++i) expect += m.at(i, 0);
    CHECK(k::col_sums_serial(m) == std::vector<double>{expect});
    CHECK(k::col_sums_parallel(m) == std::vector<double>{expect});
}

TEST_CASE("mean_from_col_sums combines sums left to right") {
    CHECK(k::mean_from_col_sums({2.0, 4.0}, 4) == 1.5);
    CHECK(k::mean_from_col_sums({0.0}, 3) == 0.0);
}

TEST_CASE("deviation_weights matches the definition") {
    Matrix m(2, 2);
    m.data = {0.0, 0.0, 1.0, 0.0};
    const auto w = k::deviation_weights_serial(m, 0.25);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("score_rows is the per-row dot product") {
    Matrix m(2, 3);
    m.data = {1, 0, 2, 0.5, 0.5, 0.5};
    const std::vector<double> w = {1.0, 2.0, 3.0};
    const auto s = k::score_rows_serial(m, w);
    CHECK(s == std::vector<double>{7.0, 3.0});
}

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
    DetRng rng(20240817);
    // Shapes cover the degenerate edges: single cell, single row, single
    // column, and tall/wide mixes.
    const std::vector<std::pair<std::size_t, std::size_t>> shapes = {
        {1, 1}, {1, 7}, {9, 1}, {3, 3}, {50, 4}, {7, 31}, {200, 8}};
    for (const auto& [n, d] : shapes) {
        for (int rep = 0; rep < 10; ++rep) {
            Matrix m = testutil::random_matrix(rng, n, d);
            // Plant a constant column now and then to cover the mn == mx path.
            if (rep % 3 == 0)
                for (std::size_t i = 0; i < n; ++i) m.at(i, d - 1) = 42.0;

            std::vector<double> mn_s, mx_s, mn_p, mx_p;
            k::col_min_max_serial(m, mn_s, mx_s);
            k::col_min_max_parallel(m, mn_p, mx_p);
            REQUIRE(mn_s == mn_p);
            REQUIRE(mx_s == mx_p);

            Matrix norm_s(n, d), norm_p(n, d);
            k::normalize_columns_serial(m, mn_s, mx_s, norm_s);
            k::normalize_columns_parallel(m, mn_s, mx_s, norm_p);
            REQUIRE(norm_s == norm_p);

            const auto sums_s = k::col_sums_serial(norm_s);
            const auto sums_p = k::col_sums_parallel(norm_s);
            REQUIRE(sums_s == sums_p);

            const double g = k::mean_from_col_sums(sums_s, n * d);
            REQUIRE(k::deviation_weights_serial(norm_s, g) ==
                    k::deviation_weights_parallel(norm_s, g));

            std::vector<double> w(d);
            for (double& v : w) v = rng.uniform(0.0, 2.0);
            REQUIRE(k::score_rows_serial(norm_s, w) == k::score_rows_parallel(norm_s, w));
        }
    }
}

TEST_CASE("normalized values stay inside [0,1]") {
    DetRng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix m = testutil::random_matrix(rng, 30, 5);
        std::vector<double> mn, mx;
        k::col_min_max_serial(m, mn, mx);
        Matrix out(30, 5);
        k::normalize_columns_serial(m, mn, mx, out);
        for (double v : out.data) {
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
    }
}
