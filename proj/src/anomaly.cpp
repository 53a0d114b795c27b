#include "cftlat/anomaly.hpp"

#include "cftlat/fsymbols.hpp" // cache_dir()

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

namespace cftlat {

WeylField weyl_of_map(std::function<cd(cd)> fprime, std::function<cd(cd)> fsecond) {
    WeylField w;
    w.omega = [fprime](cd z) { return 2.0 * std::log(std::abs(fprime(z))); };
    w.grad = [fprime, fsecond](cd z) { return fsecond(z) / fprime(z); };
    w.laplacian = [](cd) { return 0.0; }; // log|F'|^2 is harmonic away from zeros
    return w;
}

LiouvilleBreakdown liouville_action(const Region& region, const WeylField& omega,
                                    bool include_corners, double tol) {
    LiouvilleBreakdown out;
    if (region.xb > region.xa) {
        auto f = [&](double x, double y) {
            cd z = region.embed(x, y);
            cd g = omega.grad(z);
            return std::norm(g) * region.jacobian(x, y);
        };
        QuadResult bulk = integrate2d(f, region.xa, region.xb, region.ylo, region.yhi,
                                      tol * M_PI / 2);
        out.bulk = bulk.value / M_PI;
        out.err += bulk.error_estimate / M_PI;
    }
    for (const auto& arc : region.arcs) {
        auto f = [&](double s) {
            return arc.curvature(s) * omega.omega(arc.point(s)) * arc.speed(s);
        };
        QuadResult b = integrate(f, arc.s0, arc.s1, tol * M_PI / 2);
        out.boundary += b.value / M_PI;
        out.err += b.error_estimate / M_PI;
    }
    if (include_corners) {
        for (const auto& c : region.corners) {
            double a = c.interior_angle;
            out.corner += (M_PI * M_PI - a * a) / a * omega.omega(c.at) / (2 * M_PI);
        }
    }
    return out;
}

LiouvilleBreakdown liouville_action_curved(const Region& region, const WeylField& om1,
                                           const WeylField& om2, double tol) {
    // bulk: (1/2pi) (-Lap O1) O2 + (1/pi) |d O2/dz|^2 ;
    // boundary: (1/pi) (k_flat - (1/2) dO1/dn_inward) O2
    LiouvilleBreakdown out;
    auto f = [&](double x, double y) {
        cd z = region.embed(x, y);
        double lap = om1.laplacian ? om1.laplacian(z) : 0.0;
        double v = -lap * om2.omega(z) / 2.0 + std::norm(om2.grad(z));
        return v * region.jacobian(x, y);
    };
    QuadResult bulk =
        integrate2d(f, region.xa, region.xb, region.ylo, region.yhi, tol * M_PI / 2);
    out.bulk = bulk.value / M_PI;
    out.err += bulk.error_estimate / M_PI;

    for (const auto& arc : region.arcs) {
        auto f1 = [&](double s) {
            cd z = arc.point(s);
            // inward normal: left of the tangent (bulk on the left)
            double ds = 1e-6 * (std::fabs(arc.s1 - arc.s0));
            cd zp = (arc.point(std::min(s + ds, arc.s1)) -
                     arc.point(std::max(s - ds, arc.s0)));
            zp /= std::abs(zp);
            cd n_in(-zp.imag(), zp.real());
            cd g1 = om1.grad(z); // dOmega/dz; directional derivative = 2 Re(g dir)
            double dOdn = 2.0 * (g1 * n_in).real();
            return (arc.curvature(s) - 0.5 * dOdn) * om2.omega(z) * arc.speed(s);
        };
        QuadResult b = integrate(f1, arc.s0, arc.s1, tol * M_PI / 2);
        out.boundary += b.value / M_PI;
        out.err += b.error_estimate / M_PI;
    }
    return out;
}

double cocycle_residual(const Region& region, const WeylField& om1,
                        const WeylField& om2, double tol) {
    WeylField sum;
    sum.omega = [&](cd z) { return om1.omega(z) + om2.omega(z); };
    sum.grad = [&](cd z) { return om1.grad(z) + om2.grad(z); };
    sum.laplacian = [&](cd z) {
        double l1 = om1.laplacian ? om1.laplacian(z) : 0.0;
        double l2 = om2.laplacian ? om2.laplacian(z) : 0.0;
        return l1 + l2;
    };
    double lhs = liouville_action(region, sum, false, tol).total();
    double r1 = liouville_action_curved(region, om1, om2, tol).total();
    double r2 = liouville_action(region, om1, false, tol).total();
    return std::fabs(lhs - r1 - r2);
}

Region disc_region(double radius) {
    Region r;
    r.xa = 0;
    r.xb = 2 * M_PI;
    r.ylo = [](double) { return 0.0; };
    r.yhi = [radius](double) { return radius; };
    r.embed = [](double th, double rr) { return std::polar(rr, th); };
    r.jacobian = [](double, double rr) { return rr; };
    BoundaryArc arc;
    arc.s0 = 0;
    arc.s1 = 2 * M_PI;
    arc.point = [radius](double s) { return std::polar(radius, s); };
    arc.curvature = [radius](double) { return 1.0 / radius; };
    arc.speed = [radius](double) { return radius; };
    r.arcs.push_back(arc);
    return r;
}

Region annulus_region(double r_inner, double r_outer) {
    Region r;
    r.xa = 0;
    r.xb = 2 * M_PI;
    r.ylo = [r_inner](double) { return r_inner; };
    r.yhi = [r_outer](double) { return r_outer; };
    r.embed = [](double th, double rr) { return std::polar(rr, th); };
    r.jacobian = [](double, double rr) { return rr; };
    BoundaryArc outer;
    outer.s0 = 0;
    outer.s1 = 2 * M_PI;
    outer.point = [r_outer](double s) { return std::polar(r_outer, s); };
    outer.curvature = [r_outer](double) { return 1.0 / r_outer; };
    outer.speed = [r_outer](double) { return r_outer; };
    BoundaryArc inner = outer;
    inner.point = [r_inner](double s) { return std::polar(r_inner, -s); };
    inner.curvature = [r_inner](double) { return -1.0 / r_inner; };
    inner.speed = [r_inner](double) { return r_inner; };
    r.arcs.push_back(outer);
    r.arcs.push_back(inner);
    return r;
}

Region half_disc_region() {
    Region r;
    r.xa = 0;
    r.xb = M_PI;
    r.ylo = [](double) { return 0.0; };
    r.yhi = [](double) { return 1.0; };
    r.embed = [](double th, double rr) { return std::polar(rr, th); };
    r.jacobian = [](double, double rr) { return rr; };
    BoundaryArc arc;
    arc.s0 = 0;
    arc.s1 = M_PI;
    arc.point = [](double s) { return std::polar(1.0, s); };
    arc.curvature = [](double) { return 1.0; };
    arc.speed = [](double) { return 1.0; };
    BoundaryArc diam;
    diam.s0 = -1;
    diam.s1 = 1;
    diam.point = [](double s) { return cd(s, 0.0); };
    diam.curvature = [](double) { return 0.0; };
    diam.speed = [](double) { return 1.0; };
    r.arcs.push_back(arc);
    r.arcs.push_back(diam);
    r.corners.push_back({cd(1, 0), M_PI / 2});
    r.corners.push_back({cd(-1, 0), M_PI / 2});
    return r;
}

double reference_anomaly(ReferenceCase c, const std::vector<double>& params) {
    switch (c) {
        case ReferenceCase::disc_scale:
            return 4 * std::log(params.at(0));
        case ReferenceCase::cylinder_annulus:
            return -2 * params.at(1) / params.at(0);
        case ReferenceCase::torus_hole:
            return -4 * std::log(params.at(0));
        case ReferenceCase::half_disc_mobius:
            return 0.0;
        case ReferenceCase::ngon_corner: {
            double n = params.at(0), om = params.at(1);
            return 2 * (1 - 1 / n) / (1 - 2 / n) * om;
        }
    }
    throw std::logic_error("reference_anomaly: unknown case");
}

Region wedge_minus_patch_region(const TriangleGeometry& geom) {
    Region r;
    r.xa = -M_PI / 3 + 1e-12;
    r.xb = M_PI / 3 - 1e-12;
    r.ylo = [](double) { return 1e-8; };
    r.yhi = [&geom](double th) { return geom.cut_radius(th) * (1 - 1e-12); };
    r.embed = [](double th, double rr) { return std::polar(rr, th); };
    r.jacobian = [](double, double rr) { return rr; };
    double th_star = geom.theta_star();
    for (int sgn : {-1, 1}) {
        BoundaryArc arc;
        arc.s0 = th_star;
        arc.s1 = M_PI / 3;
        arc.point = [sgn](double s) { return std::polar(1.0, sgn * s); };
        arc.curvature = [](double) { return 1.0; };
        arc.speed = [](double) { return 1.0; };
        r.arcs.push_back(arc);
    }
    // the two radial edges are straight (k = 0) and contribute nothing;
    // the cut curve is added separately as a polyline term
    return r;
}

Region patch_crescent_region(const TriangleGeometry& geom) {
    Region r;
    double th_star = geom.theta_star();
    r.xa = -th_star + 1e-12;
    r.xb = th_star - 1e-12;
    r.ylo = [&geom](double th) { return geom.cut_radius(th) * (1 + 1e-12); };
    r.yhi = [](double) { return 1.0 - 1e-10; };
    r.embed = [](double th, double rr) { return std::polar(rr, th); };
    r.jacobian = [](double, double rr) { return rr; };
    BoundaryArc arc;
    arc.s0 = -th_star;
    arc.s1 = th_star;
    arc.point = [](double s) { return std::polar(1.0, s); };
    arc.curvature = [](double) { return 1.0; };
    arc.speed = [](double) { return 1.0; };
    r.arcs.push_back(arc);
    return r;
}

std::vector<cd> cut_polyline(const TriangleGeometry& geom) {
    // psi in [0, pi] already covers the whole curve, endpoint to endpoint;
    // orient it from -theta* to +theta* so the wedge bulk sits on the left
    const auto& cut = geom.cut_curve();
    std::vector<cd> pts;
    pts.reserve(cut.size());
    for (const auto& cp : cut) pts.push_back(cp.u);
    if (std::arg(pts.front()) > std::arg(pts.back()))
        std::reverse(pts.begin(), pts.end());
    return pts;
}

double polyline_boundary_term(const std::vector<cd>& pts,
                              const std::function<double(cd)>& omega) {
    // trapezoid over the nodes; the field is sampled a hair inside the unit
    // disc radius so that maps with a branch cut across the curve are read
    // from the bulk side
    auto kappa = polyline_curvature(pts);
    std::vector<double> f(pts.size());
    for (size_t j = 0; j < pts.size(); ++j) {
        cd z = pts[j] * (1.0 - 1e-7 / std::abs(pts[j]));
        f[j] = kappa[j] * omega(z);
    }
    double acc = 0;
    for (size_t j = 0; j + 1 < pts.size(); ++j)
        acc += 0.5 * (f[j] + f[j + 1]) * std::abs(pts[j + 1] - pts[j]);
    return acc / M_PI;
}

namespace {

std::filesystem::path anomaly_cache_file() { return cache_dir() / "anomaly.txt"; }

std::optional<TriangleAnomalyTerms> cache_lookup(const std::string& key) {
    static std::mutex mu;
    std::scoped_lock lock(mu);
    std::ifstream in(anomaly_cache_file());
    if (!in) return std::nullopt;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string k;
        TriangleAnomalyTerms t;
        ss >> k >> t.term_E >> t.term_phi >> t.err;
        if (ss && k == key) return t;
    }
    return std::nullopt;
}

void cache_store(const std::string& key, const TriangleAnomalyTerms& t) {
    static std::mutex mu;
    std::scoped_lock lock(mu);
    std::filesystem::create_directories(cache_dir());
    std::ofstream out(anomaly_cache_file(), std::ios::app);
    out.precision(17);
    out << key << ' ' << t.term_E << ' ' << t.term_phi << ' ' << t.err << '\n';
}

} // namespace

TriangleAnomalyTerms triangle_anomaly_terms(const TriangleGeometry& geom,
                                            double d_phys, double tol,
                                            bool use_cache) {
    // The principal-branch hypergeometric evaluation of phi0^{-1} is single
    // valued on the coordinate patch only up to t of about 1.3 (beyond that a
    // log-branch line enters the integration region); far below t ~ 0.05 the
    // patch shrinks under double resolution.
    if (geom.t() < 0.05 || geom.t() > 1.3)
        throw std::domain_error(
            "triangle_anomaly_terms: supported geometry range is t in [0.05, 1.3]");
    std::ostringstream key;
    key.precision(17);
    key << "t=" << geom.t() << ";o=" << geom.series_order() << ";n="
        << geom.trace_points() << ";tol=" << tol << ";d=" << d_phys;
    if (use_cache)
        if (auto hit = cache_lookup(key.str())) {
            ++cache_stats().anomaly_hits;
            return *hit;
        }
    ++cache_stats().anomaly_misses;

    TriangleAnomalyTerms out;

    // --- term_E = L_{T'}(log|dE|^2) over the wedge minus the patch ---
    WeylField omE;
    omE.omega = [&](cd z) {
        return 2.0 * std::log(std::abs(geom.uniformizer_E_deriv(z, d_phys)));
    };
    omE.grad = [&](cd z) {
        // E''/E' by central differences of the analytic E'
        double h = 1e-6 * std::max(0.05, std::abs(z));
        cd e1 = geom.uniformizer_E_deriv(z + h, d_phys);
        cd e2 = geom.uniformizer_E_deriv(z - h, d_phys);
        cd em = geom.uniformizer_E_deriv(z, d_phys);
        return (e1 - e2) / (2.0 * h) / em;
    };
    {
        // |E'| is invariant under conjugation: integrate the upper half of the
        // wedge and double. Split the outer integral at theta* where the
        // radial extent switches from the cut curve to the unit circle.
        const double th_star = geom.theta_star();
        auto f = [&](double th, double r) {
            return std::norm(omE.grad(std::polar(r, th))) * r;
        };
        QuadResult b1 = integrate2d(f, 1e-10, th_star, [](double) { return 1e-8; },
                                    [&](double th) { return geom.cut_radius(th) - 1e-12; },
                                    tol / 4 * M_PI);
        QuadResult b2 = integrate2d(f, th_star, M_PI / 3 - 1e-12,
                                    [](double) { return 1e-8; },
                                    [](double) { return 1.0 - 1e-10; }, tol / 4 * M_PI);
        out.term_E += 2 * (b1.value + b2.value) / M_PI;
        out.err += 2 * (b1.error_estimate + b2.error_estimate) / M_PI;

        auto farc = [&](double th) { return omE.omega(std::polar(1.0, th)); };
        QuadResult arc = integrate(farc, th_star, M_PI / 3, tol / 4 * M_PI);
        out.term_E += 2 * arc.value / M_PI;
        out.err += 2 * arc.error_estimate / M_PI;

        out.term_E += polyline_boundary_term(cut_polyline(geom), omE.omega);
    }

    // --- term_phi = L_{D+}(log|d phi0|^2), computed in the image frame:
    // bulk = (1/pi) int_{K0} |g''/g'|^2 with g = phi0^{-1}; boundary = the
    // unit arc of D+ with k=1, Omega(e^{i psi}) = -log|g'(u(psi))|^2.
    auto dlogg = [&](cd u) {
        double h = 1e-6 * std::max(0.02, 1.0 - std::abs(u));
        h = std::max(h, 1e-9);
        cd g1 = geom.phi0_inv_deriv(u + h);
        cd g2 = geom.phi0_inv_deriv(u - h);
        cd gm = geom.phi0_inv_deriv(u);
        return (g1 - g2) / (2.0 * h) / gm;
    };
    {
        // crescent bulk, symmetric in theta: upper half doubled
        auto f = [&](double th, double r) {
            return std::norm(dlogg(std::polar(r, th))) * r;
        };
        QuadResult b = integrate2d(f, 1e-10, geom.theta_star() - 1e-12,
                                   [&](double th) { return geom.cut_radius(th) + 1e-12; },
                                   [](double) { return 1.0 - 1e-10; }, tol / 4 * M_PI);
        out.term_phi += 2 * b.value / M_PI;
        out.err += 2 * b.error_estimate / M_PI;
    }
    {
        const auto& cut = geom.cut_curve();
        size_t n = cut.size();
        auto val = [&](size_t j) {
            return -2.0 * std::log(std::abs(geom.phi0_inv_deriv(cut[j].u)));
        };
        double acc = 0;
        size_t m = n - 1; // even number of intervals when trace_points is even
        for (size_t j = 0; j + 2 <= m; j += 2) {
            double h = cut[j + 1].psi - cut[j].psi;
            acc += h / 3.0 * (val(j) + 4 * val(j + 1) + val(j + 2));
        }
        out.term_phi += acc / M_PI;
    }

    if (use_cache) cache_store(key.str(), out);
    return out;
}

double triangle_anomaly_A(const TriangleGeometry& geom, double c, double d_phys,
                          double tol, bool use_cache) {
    TriangleAnomalyTerms t = triangle_anomaly_terms(geom, d_phys, tol, use_cache);
    return c / 8.0 * (t.term_E - t.term_phi);
}

} // namespace cftlat
