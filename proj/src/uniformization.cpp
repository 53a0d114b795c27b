#include "cftlat/uniformization.hpp"

#include "cftlat/gamma.hpp"
#include "cftlat/series.hpp"

#include <cmath>
#include <stdexcept>

namespace cftlat {

namespace {

// branch-side nudge for hypergeometric arguments that land on the [1,inf) cut
cd nudge_to_side(cd w, double side) {
    if (std::fabs(w.imag()) < 1e-14 * (1 + std::fabs(w.real())) && w.real() > 1.0)
        return {w.real(), side * 1e-22 * (1 + std::fabs(w.real()))};
    return w;
}

} // namespace

double t_of_ratio(double ratio) {
    if (!(ratio > 0 && ratio < 0.5))
        throw std::domain_error("t_of_ratio: ratio must lie in (0, 1/2)");
    return std::acosh(1.0 / (2.0 * ratio)) / M_PI;
}

Real triangle_X_of_t(double t) {
    Real th(t);
    Real arg1 = lgamma_cplx(Cplx(Real(1) / 6, th)).im;
    Real arg2 = lgamma_cplx(Cplx(Real(0), th)).im;
    return mp::exp((arg1 - arg2) / th);
}

TriangleGeometry::TriangleGeometry(double t, int series_order, int trace_points)
    : t_(t), t_hp_(t) {
    if (!(t > 0)) throw std::domain_error("TriangleGeometry: t must be positive");
    if (series_order < 3) throw std::invalid_argument("series_order >= 3 required");

    Real pi = real_pi();
    // R(t) = sqrt(3 pi) / (cosh^2(pi t) - 3/4) * Gamma(7/6) / |Gamma(5/6+it)|^2
    Real ch = mp::cosh(pi * t_hp_);
    Cplx lg = lgamma_cplx(Cplx(Real(5) / 6, t_hp_));
    Real gamma56_sq = mp::exp(2 * lg.re);
    R_ = mp::sqrt(3 * pi) / (ch * ch - Real(3) / 4) * mp::tgamma(Real(7) / 6) / gamma56_sq;
    d_ = 2 * ch * R_;
    // X(t) = exp((arg Gamma(1/6+it) - arg Gamma(it)) / t): real and >= 1
    Real arg1 = lgamma_cplx(Cplx(Real(1) / 6, t_hp_)).im;
    Real arg2 = lgamma_cplx(Cplx(Real(0), t_hp_)).im;
    X_ = mp::exp((arg1 - arg2) / t_hp_);
    Xd_ = to_double(X_);

    build_series(series_order);
    trace_points_requested_ = trace_points;
}

void TriangleGeometry::build_series(int order) {
    // phi0^{-1}(u) = X (s/2) exp( (1/(2it)) log(F+(s^2)/F-(s^2)) ),
    // s = (u^{3/2} - u^{-3/2})/(2i); series in v = u-1, then reversion.
    size_t n = static_cast<size_t>(order) + 2;
    Series v = Series::identity(n); // v
    Series u = Series::constant(Cplx(Real(1)), n) + v;
    Series u32 = pow(u, Cplx(Real(3) / 2));
    Series um32 = pow(u, Cplx(Real(-3) / 2));
    Cplx half_over_i = Cplx(Real(0), Real(-1) / 2); // 1/(2i)
    Series s = half_over_i * (u32 - um32);
    Series s2 = s * s;

    auto hyp_series = [&](const Cplx& a, const Cplx& b, const Cplx& c) {
        // 2F1(a,b;c; s2) as a series in v (s2 starts at order 1)
        Series acc = Series::constant(Cplx(Real(1)), n);
        Series pw = Series::constant(Cplx(Real(1)), n);
        Cplx coeff(Real(1));
        for (size_t k = 1; 2 * k < n + 2; ++k) {
            Cplx kk(Real(static_cast<int>(k) - 1));
            coeff *= (a + kk) * (b + kk) / ((c + kk) * Cplx(Real(static_cast<int>(k))));
            pw = pw * s2;
            bool nonzero = false;
            for (size_t m = 0; m < n; ++m)
                if (norm(pw[m]) != 0) { nonzero = true; break; }
            if (!nonzero) break;
            acc = acc + coeff * pw;
        }
        return acc;
    };

    Cplx it_half(Real(0), t_hp_ / 2);
    Cplx it(Real(0), t_hp_);
    Series fp = hyp_series(Cplx(Real(5) / 12) + it_half, Cplx(Real(1) / 12) + it_half,
                           Cplx(Real(1)) + it);
    Series fm = hyp_series(Cplx(Real(5) / 12) - it_half, Cplx(Real(1) / 12) - it_half,
                           Cplx(Real(1)) - it);
    Series ratio = fp * inverse(fm);
    Series lg = log(ratio); // log(1) = 0 constant term
    Cplx pref = Cplx(Real(1)) / (Cplx(Real(0), 2 * t_hp_));
    Series expo = exp(pref * lg);
    Series zofv = Cplx(X_ / 2) * (s * expo); // starts at order 1

    Series vofz = revert(zofv);
    phi0_.assign(static_cast<size_t>(order), Cplx(0));
    for (int k = 1; k <= order && k < static_cast<int>(n); ++k)
        phi0_[static_cast<size_t>(k - 1)] = vofz[static_cast<size_t>(k)];
}

std::vector<Cplx> TriangleGeometry::block_map_series() const {
    // H(z) = -i (phi0(z) - 1)
    std::vector<Cplx> h(phi0_.size());
    Cplx mi(Real(0), Real(-1));
    for (size_t k = 0; k < phi0_.size(); ++k) h[k] = mi * phi0_[k];
    return h;
}

TriangleGeometry::InvEval TriangleGeometry::phi0_inv_eval(cd u,
                                                           const cd* prev_logratio) const {
    // phi0^{-1} = X (s/2) exp(L/(2it)) with L = log(F+(s^2)/F-(s^2)); the
    // derivative is X s' exp(L/(2it)) (1/2 + s^2 P'(s^2)).
    cd s = (std::pow(u, 1.5) - std::pow(u, -1.5)) / cd(0, 2);
    cd sp = 1.5 * (std::pow(u, 0.5) + std::pow(u, -2.5)) / cd(0, 2);
    cd s2 = s * s;
    cd a(5.0 / 12, t_ / 2), b(1.0 / 12, t_ / 2), c(1.0, t_);
    cd fp = hyp2f1_cd(a, b, c, s2);
    cd fm = hyp2f1_cd(std::conj(a), std::conj(b), std::conj(c), s2);
    cd dfp = a * b / c * hyp2f1_cd(a + 1.0, b + 1.0, c + 1.0, s2);
    cd dfm = std::conj(a) * std::conj(b) / std::conj(c) *
             hyp2f1_cd(std::conj(a) + 1.0, std::conj(b) + 1.0, std::conj(c) + 1.0, s2);
    cd L = std::log(fp / fm);
    if (prev_logratio) {
        double k = std::round((prev_logratio->imag() - L.imag()) / (2 * M_PI));
        L += cd(0, 2 * M_PI * k);
    }
    cd expP = std::exp(L / cd(0, 2 * t_));
    cd Pp = (dfp / fp - dfm / fm) / cd(0, 2 * t_);
    InvEval ev;
    ev.value = Xd_ * (s / 2.0) * expP;
    ev.deriv = Xd_ * sp * expP * (0.5 + s2 * Pp);
    ev.logratio = L;
    return ev;
}

cd TriangleGeometry::phi0_inv(cd u) const { return phi0_inv_eval(u, nullptr).value; }

cd TriangleGeometry::phi0_inv_deriv(cd u) const { return phi0_inv_eval(u, nullptr).deriv; }

cd TriangleGeometry::uniformizer_E(cd z, double d_phys) const {
    double wedge = std::arg(z);
    if (std::fabs(wedge) > M_PI / 3 + 1e-12) {
        // extend by conjugation with the 2 pi/3 rotations
        double rot = (wedge > 0) ? 2 * M_PI / 3 : -2 * M_PI / 3;
        cd ph = std::polar(1.0, rot);
        return ph * uniformizer_E(z / ph, d_phys);
    }
    cd S = (std::pow(z, -1.5) - std::pow(z, 1.5)) / 2.0;
    cd w = -1.0 / (S * S);
    w = nudge_to_side(w, -(std::sin(3 * std::arg(z)) >= 0 ? 1.0 : -1.0));
    cd num = hyp2f1_cd(cd(5.0 / 12, t_ / 2), cd(5.0 / 12, -t_ / 2), cd(4.0 / 3), w);
    cd den = hyp2f1_cd(cd(1.0 / 12, t_ / 2), cd(1.0 / 12, -t_ / 2), cd(2.0 / 3), w);
    cd scale = d_phys / to_double(d_);
    return scale / cd(0, 1) * std::pow(S, -2.0 / 3.0) * num / den;
}

cd TriangleGeometry::uniformizer_E_deriv(cd z, double d_phys) const {
    double wedge = std::arg(z);
    if (std::fabs(wedge) > M_PI / 3 + 1e-12) {
        double rot = (wedge > 0) ? 2 * M_PI / 3 : -2 * M_PI / 3;
        cd ph = std::polar(1.0, rot);
        return uniformizer_E_deriv(z / ph, d_phys);
    }
    cd S = (std::pow(z, -1.5) - std::pow(z, 1.5)) / 2.0;
    cd Sp = -0.75 * (std::pow(z, -2.5) + std::pow(z, 0.5));
    cd w = -1.0 / (S * S);
    double side = -(std::sin(3 * std::arg(z)) >= 0 ? 1.0 : -1.0);
    w = nudge_to_side(w, side);
    cd wp = 2.0 * Sp / (S * S * S);
    cd a1(5.0 / 12, t_ / 2), b1(5.0 / 12, -t_ / 2), c1(4.0 / 3);
    cd a2(1.0 / 12, t_ / 2), b2(1.0 / 12, -t_ / 2), c2(2.0 / 3);
    cd num = hyp2f1_cd(a1, b1, c1, w);
    cd den = hyp2f1_cd(a2, b2, c2, w);
    cd dnum = a1 * b1 / c1 * hyp2f1_cd(a1 + 1.0, b1 + 1.0, c1 + 1.0, w);
    cd dden = a2 * b2 / c2 * hyp2f1_cd(a2 + 1.0, b2 + 1.0, c2 + 1.0, w);
    cd scale = d_phys / to_double(d_);
    cd G = num / den;
    cd Gp = (dnum * den - num * dden) / (den * den);
    return scale / cd(0, 1) *
           (cd(-2.0 / 3.0) * std::pow(S, -5.0 / 3.0) * Sp * G +
            std::pow(S, -2.0 / 3.0) * Gp * wp);
}

void TriangleGeometry::ensure_traced() const {
    if (!traced_) {
        trace(trace_points_requested_);
        traced_ = true;
    }
}

void TriangleGeometry::trace(int n_points) const {
    if (n_points < 64) throw std::invalid_argument("trace: need at least 64 points");
    // endpoint angle theta*: |phi0^{-1}(e^{i theta})| = 1 with real value 1
    auto absinv_on_circle = [&](double th) {
        return std::abs(phi0_inv(std::polar(1.0, th))) - 1.0;
    };
    // |phi0^{-1}| rises from 0 through 1 at the endpoint; locate the first
    // crossing by scanning, then bisect.
    double lo = 1e-9, hi = 0;
    for (double th = 1e-3; th < 2 * M_PI / 3; th += 1e-3) {
        if (absinv_on_circle(th) > 0) { hi = th; break; }
        lo = th;
    }
    if (hi == 0) throw std::runtime_error("trace: cut endpoint bracketing failed");
    for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2;
        (absinv_on_circle(mid) < 0 ? lo : hi) = mid;
    }
    theta_star_ = (lo + hi) / 2;

    // March psi from 0 to pi: solve phi0^{-1}(u) = e^{i psi} by Newton,
    // starting at the endpoint and continuing along the curve; bisect the
    // psi-step when Newton leaves its basin (small or large t).
    cd branch_state = phi0_inv_eval(std::polar(1.0, theta_star_), nullptr).logratio;
    auto solve_to = [&](cd start, double psi) {
        cd target = std::polar(1.0, psi);
        cd u = start;
        cd lr = branch_state;
        for (int it = 0; it < 50; ++it) {
            InvEval ev = phi0_inv_eval(u, &lr);
            lr = ev.logratio;
            cd fval = ev.value - target;
            if (std::abs(fval) < 1e-13) {
                branch_state = lr;
                return u;
            }
            cd step = fval / ev.deriv;
            double cap = 0.05;
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            u -= step;
        }
        throw std::runtime_error("trace: Newton stalled");
    };
    cut_.clear();
    cut_.reserve(static_cast<size_t>(n_points) + 1);
    cd u = std::polar(1.0, theta_star_);
    double psi_prev = 0;
    cut_.push_back({0.0, u, 0.0});
    for (int j = 1; j <= n_points; ++j) {
        double psi = M_PI * j / n_points;
        int refine = 1;
        for (;; refine *= 2) {
            try {
                cd cur = u;
                for (int k = 1; k <= refine; ++k)
                    cur = solve_to(cur, psi_prev + (psi - psi_prev) * k / refine);
                u = cur;
                break;
            } catch (const std::runtime_error&) {
                if (refine >= 64) throw;
            }
        }
        psi_prev = psi;
        cut_.push_back({psi, u, 0.0});
    }

    // discrete curvature along the polyline (upper branch traversed from the
    // endpoint inwards; sign convention fixed by the traversal order)
    std::vector<cd> pts;
    for (const auto& cp : cut_) pts.push_back(cp.u);
    auto kap = polyline_curvature(pts);
    for (size_t j = 0; j < cut_.size(); ++j) cut_[j].kappa = kap[j];

    // polar form r_b(theta) for the region quadrature (theta in [0, theta*]),
    // assembled from the upper branch; the curve is symmetric under
    // conjugation.
    rad_theta_.clear();
    rad_r_.clear();
    for (auto it = cut_.rbegin(); it != cut_.rend(); ++it) {
        double th = std::arg(it->u);
        double r = std::abs(it->u);
        if (!rad_theta_.empty() && th >= rad_theta_.back() - 1e-14) continue;
        rad_theta_.push_back(th);
        rad_r_.push_back(r);
    }
    // rad_theta_ descending from ~theta_star to 0
}

double TriangleGeometry::cut_radius(double theta) const {
    ensure_traced();
    double th = std::fabs(theta);
    if (th >= theta_star_) return 1.0;
    // seed from the table (rad_theta_ descending) ...
    double guess;
    if (th >= rad_theta_.front()) {
        guess = rad_r_.front();
    } else if (th <= rad_theta_.back()) {
        guess = rad_r_.back();
    } else {
        size_t lo = 0, hi = rad_theta_.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            if (rad_theta_[mid] > th) lo = mid;
            else hi = mid;
        }
        double t0 = rad_theta_[lo], t1 = rad_theta_[hi];
        double w = (th - t0) / (t1 - t0);
        guess = rad_r_[lo] * (1 - w) + rad_r_[hi] * w;
    }
    // ... then polish with Newton on |phi0inv(r e^{i th})|^2 = 1 so the
    // result is smooth in theta (piecewise-linear kinks defeat the adaptive
    // quadrature otherwise)
    cd dir = std::polar(1.0, th);
    double r = guess;
    for (int it = 0; it < 30; ++it) {
        cd val = phi0_inv(r * dir);
        double f = std::norm(val) - 1.0;
        if (std::fabs(f) < 1e-13) break;
        cd dval = phi0_inv_deriv(r * dir) * dir;
        double df = 2.0 * (std::conj(val) * dval).real();
        double step = f / df;
        if (!std::isfinite(step) || std::fabs(step) > 0.1) step = (step > 0 ? 0.1 : -0.1);
        r -= step;
        r = std::min(std::max(r, 0.05), 0.999999999);
    }
    return r;
}

std::vector<double> polyline_curvature(const std::vector<cd>& pts) {
    // t_j = (z_j - z_{j-1})/|.|, n_j = (y_{j-1}-y_j, x_j-x_{j-1})/|.|,
    // k_j = 2 t_{j+1} . n_j / |z_{j+1} - z_{j-1}|
    size_t n = pts.size();
    std::vector<double> kappa(n, 0.0);
    auto tangent = [&](size_t j) {
        cd d = pts[j] - pts[j - 1];
        return d / std::abs(d);
    };
    for (size_t j = 1; j + 1 < n; ++j) {
        cd d = pts[j] - pts[j - 1];
        cd nj = cd(-d.imag(), d.real()) / std::abs(d);
        cd tj1 = tangent(j + 1);
        double num = tj1.real() * nj.real() + tj1.imag() * nj.imag();
        kappa[j] = 2.0 * num / std::abs(pts[j + 1] - pts[j - 1]);
    }
    if (n >= 4) {
        kappa[0] = 2 * kappa[1] - kappa[2];
        kappa[n - 1] = 2 * kappa[n - 2] - kappa[n - 3];
    }
    return kappa;
}

} // namespace cftlat
