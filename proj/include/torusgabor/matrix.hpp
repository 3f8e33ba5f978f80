// Minimal dense complex matrix, row-major.  Used for Gabor coefficient
// tables, Gram matrices and analysis matrices; factorizations live with
// their consumers.

#ifndef TORUSGABOR_MATRIX_HPP
#define TORUSGABOR_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "theta.hpp"

namespace torusgabor {

struct CMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> data;

    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    cplx& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    double frobenius_sq() const {
        double s = 0.0;
        for (const cplx& v : data)
            s += std::norm(v);
        return s;
    }

    CMatrix select_rows(const std::vector<std::size_t>& idx) const {
        CMatrix out(idx.size(), cols);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            if (idx[r] >= rows)
                throw std::invalid_argument("CMatrix::select_rows: index out of range");
            for (std::size_t c = 0; c < cols; ++c)
                out(r, c) = (*this)(idx[r], c);
        }
        return out;
    }
};

} // namespace torusgabor

#endif
