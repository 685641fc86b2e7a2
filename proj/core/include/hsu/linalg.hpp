#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace hsu::nn {

using Vector = std::vector<double>;

// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
    std::size_t size() const { return data.size(); }

    void fill_uniform(double bound, std::mt19937& rng) {
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (double& v : data) v = dist(rng);
    }
};

// y = W x
void matvec(const Matrix& w, const Vector& x, Vector& y);
// y += W^T g
void matvec_transposed_add(const Matrix& w, const Vector& g, Vector& y);
// W += g x^T
void outer_add(Matrix& w, const Vector& g, const Vector& x);

}  // namespace hsu::nn
