#pragma once

// Minimal dense linear algebra at working precision: just what the module
// builder and the pentagon solver need (symmetric eigensolve, LU solve,
// least squares on tiny systems).

#include "cftlat/prec.hpp"

#include <stdexcept>
#include <vector>

namespace cftlat {

template <class T>
struct Mat {
    size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
    T& operator()(size_t i, size_t j) { return a[i * cols + j]; }
    const T& operator()(size_t i, size_t j) const { return a[i * cols + j]; }

    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
};

using RMat = Mat<Real>;
using CMat = Mat<Cplx>;

template <class T>
Mat<T> matmul(const Mat<T>& x, const Mat<T>& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: shape mismatch");
    Mat<T> r(x.rows, y.cols);
    for (size_t i = 0; i < x.rows; ++i)
        for (size_t k = 0; k < x.cols; ++k) {
            const T& xv = x(i, k);
            for (size_t j = 0; j < y.cols; ++j) r(i, j) += xv * y(k, j);
        }
    return r;
}

// Cyclic Jacobi for a real symmetric matrix. Returns eigenvalues ascending
// and fills V with eigenvectors in matching columns.
void jacobi_eigensymm(RMat A, std::vector<Real>& eigenvalues, RMat& V);

// Solve A x = b by partial-pivot LU (square A, overwritten copy).
std::vector<Cplx> lu_solve(CMat A, std::vector<Cplx> b);

// Least squares via normal equations; fine for the tiny well-conditioned
// systems the F-symbol bootstrap produces.
std::vector<Cplx> least_squares(const CMat& A, const std::vector<Cplx>& b);

} // namespace cftlat
