#include "cftlat/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace cftlat {

void jacobi_eigensymm(RMat A, std::vector<Real>& eigenvalues, RMat& V) {
    const size_t n = A.rows;
    if (n != A.cols) throw std::invalid_argument("jacobi: square matrix required");
    V = RMat::identity(n);
    if (n == 0) { eigenvalues.clear(); return; }

    auto offdiag = [&]() {
        Real s(0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) s += A(i, j) * A(i, j);
        return s;
    };

    Real scale(0);
    for (size_t i = 0; i < n; ++i) scale = std::max(scale, mp::abs(A(i, i)));
    for (auto& x : A.a) scale = std::max(scale, mp::abs(x));
    Real stop = scale * scale * Real("1e-130") * Real(static_cast<int>(n * n)) + Real("1e-200");

    for (int sweep = 0; sweep < 200 && offdiag() > stop; ++sweep) {
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) {
                if (mp::abs(A(p, q)) == 0) continue;
                Real theta = (A(q, q) - A(p, p)) / (2 * A(p, q));
                Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                         (mp::abs(theta) + mp::sqrt(theta * theta + 1));
                Real c = 1 / mp::sqrt(t * t + 1);
                Real s = t * c;
                for (size_t k = 0; k < n; ++k) {
                    Real akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; ++k) {
                    Real apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; ++k) {
                    Real vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
    }

    eigenvalues.resize(n);
    for (size_t i = 0; i < n; ++i) eigenvalues[i] = A(i, i);

    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](size_t i, size_t j) { return eigenvalues[i] < eigenvalues[j]; });
    std::vector<Real> ev(n);
    RMat W(n, n);
    for (size_t j = 0; j < n; ++j) {
        ev[j] = eigenvalues[idx[j]];
        for (size_t i = 0; i < n; ++i) W(i, j) = V(i, idx[j]);
    }
    eigenvalues = std::move(ev);
    V = std::move(W);
}

std::vector<Cplx> lu_solve(CMat A, std::vector<Cplx> b) {
    const size_t n = A.rows;
    if (n != A.cols || b.size() != n) throw std::invalid_argument("lu_solve: shape mismatch");
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        Real best = norm(A(k, k));
        for (size_t i = k + 1; i < n; ++i)
            if (norm(A(i, k)) > best) { best = norm(A(i, k)); piv = i; }
        if (best == 0) throw std::runtime_error("lu_solve: singular matrix");
        if (piv != k) {
            for (size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (size_t i = k + 1; i < n; ++i) {
            Cplx f = A(i, k) / A(k, k);
            for (size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<Cplx> x(n);
    for (size_t i = n; i-- > 0;) {
        Cplx acc = b[i];
        for (size_t j = i + 1; j < n; ++j) acc -= A(i, j) * x[j];
        x[i] = acc / A(i, i);
    }
    return x;
}

std::vector<Cplx> least_squares(const CMat& A, const std::vector<Cplx>& b) {
    // x = (A^H A)^{-1} A^H b
    CMat N(A.cols, A.cols);
    std::vector<Cplx> rhs(A.cols);
    for (size_t i = 0; i < A.cols; ++i) {
        for (size_t j = 0; j < A.cols; ++j) {
            Cplx acc(0);
            for (size_t k = 0; k < A.rows; ++k) acc += conj(A(k, i)) * A(k, j);
            N(i, j) = acc;
        }
        Cplx acc(0);
        for (size_t k = 0; k < A.rows; ++k) acc += conj(A(k, i)) * b[k];
        rhs[i] = acc;
    }
    return lu_solve(std::move(N), std::move(rhs));
}

} // namespace cftlat
