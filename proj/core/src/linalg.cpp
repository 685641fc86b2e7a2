#include "hsu/linalg.hpp"

namespace hsu::nn {

void matvec(const Matrix& w, const Vector& x, Vector& y) {
    y.assign(w.rows, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* row = w.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void matvec_transposed_add(const Matrix& w, const Vector& g, Vector& y) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* row = w.row(r);
        const double gr = g[r];
        if (gr == 0.0) continue;
        for (std::size_t c = 0; c < w.cols; ++c) y[c] += row[c] * gr;
    }
}

void outer_add(Matrix& w, const Vector& g, const Vector& x) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        double* row = w.row(r);
        const double gr = g[r];
        if (gr == 0.0) continue;
        for (std::size_t c = 0; c < w.cols; ++c) row[c] += gr * x[c];
    }
}

}  // namespace hsu::nn
