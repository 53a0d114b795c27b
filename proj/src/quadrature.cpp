#include "cftlat/quadrature.hpp"

#include <cmath>
#include <cstdlib>

namespace cftlat {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1].
const double xk[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
const double wk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
const double wg[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                      0.417959183673469, 0.381830050505119, 0.279705391489277,
                      0.129484966168870};

struct Panel {
    double value, err;
    long evals;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    double h = (b - a) / 2, c = (a + b) / 2;
    double ik = 0, ig = 0;
    for (int i = 0; i < 15; ++i) {
        double v = f(c + h * xk[i]);
        ik += wk[i] * v;
        if (i % 2 == 1) ig += wg[i / 2] * v;
    }
    double value = ik * h;
    double err = std::fabs((ik - ig) * h);
    return {value, err, 15};
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol,
           int depth, QuadResult& out) {
    Panel p = gk15(f, a, b);
    out.evaluations += p.evals;
    if (p.err < tol || depth <= 0 || (b - a) < 1e-15 * (1 + std::fabs(a))) {
        out.value += p.value;
        out.error_estimate += p.err;
        return;
    }
    double c = (a + b) / 2;
    adapt(f, a, c, tol / 2, depth - 1, out);
    adapt(f, c, b, tol / 2, depth - 1, out);
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth) {
    QuadResult out;
    if (a == b) return out;
    adapt(f, a, b, abs_tol, max_depth, out);
    return out;
}

QuadResult integrate2d(const std::function<double(double, double)>& f, double xa,
                       double xb, const std::function<double(double)>& ylo,
                       const std::function<double(double)>& yhi, double abs_tol) {
    QuadResult out;
    double inner_tol = abs_tol / (std::fabs(xb - xa) + 1e-30);
    auto outer = [&](double x) {
        QuadResult inner = integrate([&](double y) { return f(x, y); }, ylo(x), yhi(x),
                                     inner_tol, 20);
        out.evaluations += inner.evaluations;
        return inner.value;
    };
    QuadResult res = integrate(outer, xa, xb, abs_tol, 16);
    res.evaluations += out.evaluations;
    return res;
}

} // namespace cftlat
