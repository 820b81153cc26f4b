#pragma once

#include <cstddef>
#include <vector>

namespace agentclass {

// Dense row-major matrix of doubles. Kept deliberately minimal: the kernels in
// kernels.hpp do all the numeric work on top of it.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double* row(std::size_t r) { return data.data() + r * cols; }

    bool operator==(const Matrix&) const = default;
};

}  // namespace agentclass
