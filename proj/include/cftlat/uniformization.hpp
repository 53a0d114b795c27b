#pragma once

// Clipped-triangle geometry: the t-parametrization with R(t), d(t), X(t), the
// local coordinate series phi0 and its hypergeometric inverse, the uniformizer
// E to the clipped triangle, and the numerically traced cut-preimage curve.

#include "cftlat/hyp2f1.hpp"
#include "cftlat/prec.hpp"

#include <vector>

namespace cftlat {

struct CutPoint {
    double psi;   // parameter: phi0^{-1}(u) = e^{i psi}, psi in [0, pi]
    cd u;         // point on the curve (unit-disc frame)
    double kappa; // discrete curvature along the region boundary
};

class TriangleGeometry {
public:
    // series_order: number of phi0 Taylor coefficients kept (default 30).
    TriangleGeometry(double t, int series_order = 30, int trace_points = 512);

    double t() const { return t_; }
    const Real& R() const { return R_; }
    const Real& d() const { return d_; }
    const Real& X() const { return X_; }
    double ratio() const { return to_double(R_ / d_); } // R/d = 1/(2 cosh(pi t))

    // phi0(z) = 1 + sum_{n>=1} coeff[n-1] z^n  (high precision)
    const std::vector<Cplx>& phi0_series() const { return phi0_; }

    // Taylor series of H(z) = -i (phi0(z) - 1); H is the coordinate change
    // entering the block operator Gamma, H(z) = (4/(3X)) z + ...
    std::vector<Cplx> block_map_series() const;

    // closed-form phi0^{-1} and its derivative (double precision). The
    // principal-branch evaluation is single valued on the coordinate patch
    // for t up to about 1.3; the tracer carries its own branch tracking so
    // curve tracing works beyond that.
    cd phi0_inv(cd u) const;
    cd phi0_inv_deriv(cd u) const;

    // uniformizer E on the wedge |arg z| <= pi/3 minus the coordinate patch,
    // scaled so the clipped triangle has edge distance d_phys; E and E'.
    cd uniformizer_E(cd z, double d_phys) const;
    cd uniformizer_E_deriv(cd z, double d_phys) const;

    // traced cut-preimage (upper half, psi in [0,pi]); endpoints on the unit
    // circle at +-theta_star from the insertion point 1
    const std::vector<CutPoint>& cut_curve() const {
        ensure_traced();
        return cut_;
    }
    double theta_star() const {
        ensure_traced();
        return theta_star_;
    }
    // radial extent of the curve at polar angle |th| <= theta_star; the table
    // interpolation seeds a Newton solve on |phi0^{-1}| = 1, so the result is
    // smooth in theta (adaptive quadrature relies on that)
    double cut_radius(double theta) const;

    int series_order() const { return static_cast<int>(phi0_.size()); }
    int trace_points() const { return trace_points_requested_; }

private:
    void build_series(int order);
    void trace(int n_points) const;
    void ensure_traced() const;

    struct InvEval {
        cd value, deriv, logratio;
    };
    // branch-continuous evaluation: when prev_logratio is given, the branch
    // of log(F+/F-) closest to it is used
    InvEval phi0_inv_eval(cd u, const cd* prev_logratio) const;

    double t_;
    Real t_hp_;
    Real R_, d_, X_;
    double Xd_;
    std::vector<Cplx> phi0_;
    int trace_points_requested_;
    mutable bool traced_ = false;
    mutable std::vector<CutPoint> cut_;
    mutable double theta_star_ = 0;
    mutable std::vector<double> rad_theta_, rad_r_; // polar form for quadrature
};

// t from the ratio R/d in (0, 1/2): t = arccosh(1/(2 ratio))/pi.
double t_of_ratio(double ratio);

// X(t) alone (no series, no trace); used by root finds over t.
Real triangle_X_of_t(double t);

// Discrete tangent/normal/curvature of a polyline, the finite-difference
// scheme used along the traced cut: k_j = 2 t_{j+1} . n_j / |z_{j+1}-z_{j-1}|.
std::vector<double> polyline_curvature(const std::vector<cd>& pts);

} // namespace cftlat
