#pragma once

// Adaptive Gauss-Kronrod quadrature in double precision, for the anomaly
// integrals. Geometry quadrature never needs more than ~1e-10 absolute.

#include <functional>

namespace cftlat {

struct QuadResult {
    double value = 0;
    double error_estimate = 0;
    long evaluations = 0;
};

// Adaptive G7-K15 on [a,b] to absolute tolerance.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth = 28);

// Convenience: nested 2D integral of f(x,y) over x in [xa,xb],
// y in [ylo(x), yhi(x)].
QuadResult integrate2d(const std::function<double(double, double)>& f, double xa,
                       double xb, const std::function<double(double)>& ylo,
                       const std::function<double(double)>& yhi, double abs_tol);

} // namespace cftlat
