#pragma once

// The Liouville/anomaly action on planar regions with piecewise smooth
// boundary: generic quadrature, closed-form reference cases, cocycle identity
// checks, and the clipped-triangle anomaly constant A(t).

#include "cftlat/quadrature.hpp"
#include "cftlat/uniformization.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cftlat {

// One smooth boundary piece, parametrized with the bulk on the left; supplies
// the flat-metric geodesic curvature and the speed |q'(s)|.
struct BoundaryArc {
    double s0 = 0, s1 = 1;
    std::function<cd(double)> point;
    std::function<double(double)> curvature;
    std::function<double(double)> speed;
};

struct Corner {
    cd at;
    double interior_angle;
};

// Bulk described in coordinates (x,y) -> embed(x,y) with area element
// jacobian(x,y) dx dy; arcs carry the boundary integrals.
struct Region {
    double xa = 0, xb = 0;
    std::function<double(double)> ylo, yhi;
    std::function<cd(double, double)> embed;
    std::function<double(double, double)> jacobian;
    std::vector<BoundaryArc> arcs;
    std::vector<Corner> corners;
};

// Smooth Weyl factor Omega with derivative data. grad is the holomorphic-side
// derivative dOmega/dz (so |grad|^2 integrates the bulk term); laplacian is
// only needed for curved-metric evaluations.
struct WeylField {
    std::function<double(cd)> omega;
    std::function<cd(cd)> grad;
    std::function<double(cd)> laplacian; // may be empty when unused
};

// Pushforward field of a holomorphic map: Omega_F = log |F'|^2.
WeylField weyl_of_map(std::function<cd(cd)> fprime, std::function<cd(cd)> fsecond);

struct LiouvilleBreakdown {
    double bulk = 0, boundary = 0, corner = 0;
    double err = 0;
    double total() const { return bulk + boundary + corner; }
};

LiouvilleBreakdown liouville_action(const Region& region, const WeylField& omega,
                                    bool include_corners, double tol = 1e-9);

// L_{Sigma_{g1}}(Omega2) with g1 = e^{Omega1} delta on the same flat region.
LiouvilleBreakdown liouville_action_curved(const Region& region, const WeylField& om1,
                                           const WeylField& om2, double tol = 1e-9);

// |L_delta(O1+O2) - L_{g1}(O2) - L_delta(O1)|
double cocycle_residual(const Region& region, const WeylField& om1,
                        const WeylField& om2, double tol = 1e-9);

// ready-made regions
Region disc_region(double radius);
Region annulus_region(double r_inner, double r_outer);
Region half_disc_region(); // upper unit half disc

// Triangle-geometry patches of the unit disc. The curve boundary between them
// is handled by the discrete polyline term below, with opposite orientations
// on the two sides.
Region wedge_minus_patch_region(const TriangleGeometry& geom); // T-tilde wedge
Region patch_crescent_region(const TriangleGeometry& geom);    // K0

// boundary piece from traced points: sum k_j Omega dl over segments
double polyline_boundary_term(const std::vector<cd>& pts,
                              const std::function<double(cd)>& omega);

// b-curve of the geometry as a polyline, traversed with the wedge region on
// the left (reverse it for the crescent side).
std::vector<cd> cut_polyline(const TriangleGeometry& geom);

enum class ReferenceCase {
    disc_scale,       // params: R          -> 4 log R
    cylinder_annulus, // params: R, L       -> -2 L / R
    torus_hole,       // params: R          -> -4 log R
    half_disc_mobius, //                    -> 0
    ngon_corner,      // params: n, Omega   -> 2 (1-1/n)/(1-2/n) Omega
};
double reference_anomaly(ReferenceCase c, const std::vector<double>& params);

// The two anomaly-action terms of the clipped triangle, each with all its
// boundary contributions; A = (c/8) (term_E - term_phi).
struct TriangleAnomalyTerms {
    double term_E = 0;
    double term_phi = 0;
    double err = 0;
};

TriangleAnomalyTerms triangle_anomaly_terms(const TriangleGeometry& geom,
                                            double d_phys, double tol = 1e-8,
                                            bool use_cache = true);

double triangle_anomaly_A(const TriangleGeometry& geom, double c, double d_phys,
                          double tol = 1e-8, bool use_cache = true);

} // namespace cftlat
