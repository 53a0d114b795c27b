#include <doctest.h>

#include "cftlat/channels.hpp"

#include <algorithm>
#include <cmath>

#include "cftlat/uniformization.hpp"

using namespace cftlat;

namespace {
bool contains(const std::vector<KacLabel>& v, const MinimalModel& m, KacLabel l) {
    l = m.canonical(l);
    return std::find_if(v.begin(), v.end(), [&](KacLabel x) {
               return m.canonical(x) == l;
           }) != v.end();
}
} // namespace

TEST_CASE("tilde sets for the three symmetry choices") {
    for (int p : {3, 4, 5}) {
        MinimalModel m(p, p + 1);
        // full set: only the vacuum survives
        auto tI = tilde_set(m, label_set_all(m));
        CHECK(tI.size() == 1);
        CHECK(m.canonical(tI[0]) == m.vacuum());

        // first row: (x,1) with x odd
        auto tR = tilde_set(m, label_set_first_row(m));
        std::vector<KacLabel> want;
        for (int x = 1; x <= p - 1; x += 2) want.push_back(m.canonical({x, 1}));
        std::sort(want.begin(), want.end());
        want.erase(std::unique(want.begin(), want.end()), want.end());
        CHECK(tR.size() == want.size());
        for (const auto& l : want) CHECK(contains(tR, m, l));

        // Z2: q(x-1) + p(y-1) even
        auto tZ = tilde_set(m, label_set_z2(m));
        for (const auto& l : m.labels()) {
            bool even = ((m.q() * (l.r - 1) + m.p() * (l.s - 1)) % 2) == 0;
            KacLabel mir{m.p() - l.r, m.q() - l.s};
            bool even_mirror = ((m.q() * (mir.r - 1) + m.p() * (mir.s - 1)) % 2) == 0;
            CHECK(contains(tZ, m, l) == (even || even_mirror));
        }

        // non-closed set rejected
        if (p >= 4) {
            std::vector<KacLabel> bad{m.vacuum(), m.canonical({1, 2})};
            CHECK_THROWS(tilde_set(m, bad));
        }
    }
}

TEST_CASE("stability verdicts") {
    for (int p : {3, 4, 5, 6}) {
        MinimalModel m(p, p + 1);
        CHECK(stability_check(m, label_set_all(m)).satisfied);
        CHECK(stability_check(m, label_set_first_row(m)).satisfied);
        auto z = stability_check(m, label_set_z2(m));
        CHECK(!z.satisfied);
        bool has13 = false;
        for (const auto& v : z.violators)
            if (m.canonical(v) == m.canonical({1, 3})) has13 = true;
        CHECK(has13);
        // h_{(1,3)} = 2t - 1
        CHECK(m.conformal_weight({1, 3}) == 2 * m.t_ratio() - 1);
    }
}

TEST_CASE("cloaking boundary state and idempotency constant") {
    MinimalModel m(3, 4);
    Real delta0 = mp::pow(m.s_matrix(m.vacuum(), m.vacuum()), Real(3) / 2);
    auto st = cloaking_boundary_state(m, label_set_all(m), delta0);
    REQUIRE(st.sectors.size() == 1);
    // delta0 Dim(I) sqrt(S11) = 1 for the Ising normalization delta0 = S11^{3/2}
    CHECK(to_double(st.coefficients[0]) == doctest::Approx(1.0).epsilon(1e-14));
    // composing the projection twice multiplies by delta0 Dim(J)
    Real dimJ = m.global_dim(label_set_all(m));
    auto twice = cloaking_boundary_state(m, label_set_all(m), delta0 * delta0 * dimJ);
    CHECK(to_double(mp::abs(twice.coefficients[0] -
                            delta0 * dimJ * st.coefficients[0])) < 1e-14);
}

TEST_CASE("torus one-point machinery") {
    MinimalModel m(3, 4);
    TorusOnePoint top(m, 8, 6);
    std::complex<double> tau(0.5, std::sqrt(3.0) / 2);

    // identity insertion reproduces the torus partition function, 1.88..
    double Z = top.partition_function(tau);
    CHECK(Z == doctest::Approx(1.8899).epsilon(2e-3));
    CHECK(top.one_point(0, 0, tau).real() == doctest::Approx(Z).epsilon(1e-12));

    // Ward identity oracle: the trace of o(Gamma L_{-2} vac) equals
    // -(2 pi)^2 (h + l - c/24) dim(l) sector by sector
    VState chi = top.dressed_vacuum_state(2, 0);
    double c = 0.5;
    double norm = std::sqrt(c / 2); // ON normalization of L_{-2}|0>
    for (const auto& lab : m.labels()) {
        auto f = top.chiral_trace(lab, chi);
        TruncatedModule mod = TruncatedModule::for_label(m, lab, top.trace_level());
        double h = to_double(to_real(m.conformal_weight(lab)));
        for (int l = 0; l <= top.trace_level(); ++l) {
            double want = -4 * M_PI * M_PI / norm * (h + l - c / 24) * mod.dim(l);
            CHECK(std::fabs(f[static_cast<size_t>(l)].real() - want) <
                  1e-6 * (1 + std::fabs(want)));
            CHECK(std::fabs(f[static_cast<size_t>(l)].imag()) < 1e-8 * (1 + std::fabs(want)));
        }
    }
}

TEST_CASE("open channel touching limit is exactly 3/2 for Ising") {
    MinimalModel m(3, 4);
    Real delta0 = mp::pow(m.s_matrix(m.vacuum(), m.vacuum()), Real(3) / 2);
    Real lim = one_hole_open_touching_limit(m, delta0);
    CHECK(to_double(mp::abs(lim - Real(3) / 2)) < 1e-30);
}

TEST_CASE("closed channel small-R limit reproduces the partition function") {
    MinimalModel m(3, 4);
    TorusOnePoint top(m, 8, 6);
    std::complex<double> tau(0.5, std::sqrt(3.0) / 2);
    double d = 2.0;
    OneHolePoint pt = one_hole_closed(top, 1e-5 * d, d, tau, 8);
    double Z = top.partition_function(tau);
    CHECK(pt.raw == doctest::Approx(Z).epsilon(1e-9));
    // corrected = raw * R^{-c/6}
    CHECK(pt.corrected == doctest::Approx(pt.raw * std::pow(1e-5 * d, -0.5 / 6)).epsilon(1e-12));
}

TEST_CASE("closed channel truncation convergence") {
    MinimalModel m(3, 4);
    TorusOnePoint top(m, 8, 6);
    std::complex<double> tau(0.5, std::sqrt(3.0) / 2);
    double t = t_of_ratio(0.25);
    TriangleGeometry geom(t, 16, 64);
    double d = to_double(geom.d()), R = to_double(geom.R());
    OneHolePoint lo = one_hole_closed(top, R, d, tau, 6);
    OneHolePoint hi = one_hole_closed(top, R, d, tau, 8);
    CHECK(std::fabs(hi.corrected - lo.corrected) / hi.corrected < 0.005);
}

TEST_CASE("channel agreement at reduced cutoffs") {
    // one grid point with light cutoffs; the production-accuracy comparison
    // runs in the acceptance suite
    MinimalModel m(3, 4);
    std::complex<double> tau(0.5, std::sqrt(3.0) / 2);
    auto cmp = channel_compare(m, {0.3}, tau, 4, 8, 1e-6);
    CHECK(cmp.rel_diff_corrected[0] < 0.05);
    CHECK(cmp.rel_diff_raw[0] > 0.1);
    // open channel must sit between its two endpoint values
    CHECK(cmp.open_points[0].raw > 1.5);
}

TEST_CASE("appendix B fixtures") {
    MinimalModel m(3, 4);
    auto r1 = appendixB_fixture(m, AppendixBCase::torus_from_sphere, 14);
    CHECK(r1.pass);
    auto r2 = appendixB_fixture(m, AppendixBCase::cylinder_closed, 14);
    CHECK(r2.pass);
    CHECK(r2.residual < 1e-6);
    auto r3 = appendixB_fixture(m, AppendixBCase::boundary_state_radius, 8);
    CHECK(r3.pass);
    // tricritical cylinder as well
    MinimalModel m2(4, 5);
    auto r4 = appendixB_fixture(m2, AppendixBCase::cylinder_open, 14);
    CHECK(r4.pass);
}
