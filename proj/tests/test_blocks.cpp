#include <doctest.h>

#include "cftlat/blocks.hpp"

#include <cstdio>
#include <random>

using namespace cftlat;

namespace {
double d(const Real& x) { return to_double(x); }
double d(const Cplx& z) { return to_double(abs(z)); }

VState word_state(const TruncatedModule& mod, const ModeWord& w) {
    VState v;
    v.add(w.level(), mod.word_index(w), Cplx(Real(1)));
    return v;
}

VState random_state(const TruncatedModule& mod, int maxlvl, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    VState v;
    for (int n = 0; n <= maxlvl; ++n)
        for (int w = 0; w < mod.verma_dim(n); ++w)
            v.add(n, static_cast<size_t>(w), Cplx(Real(u(rng)), Real(u(rng))));
    return v;
}
} // namespace

TEST_CASE("three-point block normalization and level-1 closed form") {
    Rational c(1, 2), h1(1, 16), h2(1, 2), h3(1, 16);
    auto blk = ThreePointBlock::get(c, h1, h2, h3, 4);
    VState p1 = word_state(blk->leg(0), ModeWord{});
    VState p2 = word_state(blk->leg(1), ModeWord{});
    VState p3 = word_state(blk->leg(2), ModeWord{});
    CHECK(d(blk->eval(p1, p2, p3) - Cplx(Real(1))) < 1e-60);

    // B(L_{-1} i, j, k) = -i h1 + h2/sqrt(3) - h3/sqrt(3)
    VState l1 = word_state(blk->leg(0), ModeWord{{1}});
    Cplx got = blk->eval(l1, p2, p3);
    Cplx want = Cplx(Real(0), -to_real(h1)) +
                Cplx((to_real(h2) - to_real(h3)) / mp::sqrt(Real(3)));
    CHECK(d(got - want) < 1e-58);
}

TEST_CASE("three-point block cyclic symmetry on random states") {
    Rational c(7, 10), h1(3, 80), h2(1, 10), h3(3, 2);
    auto b123 = ThreePointBlock::get(c, h1, h2, h3, 3);
    auto b231 = ThreePointBlock::get(c, h2, h3, h1, 3);
    std::mt19937 rng(17);
    for (int rep = 0; rep < 3; ++rep) {
        VState u = random_state(b123->leg(0), 3, rng);
        VState v = random_state(b123->leg(1), 3, rng);
        VState w = random_state(b123->leg(2), 3, rng);
        Cplx lhs = b123->eval(u, v, w);
        Cplx rhs = b231->eval(v, w, u);
        CHECK(d(lhs - rhs) < 1e-45 * (1 + to_double(abs(lhs))));
    }
}

TEST_CASE("disc amplitudes") {
    MinimalModel m(3, 4);
    auto F = FSymbols::cached(m);
    KacLabel one{1, 1}, sig{1, 2}, eps{1, 3};
    Real pi = real_pi();

    // empty disc normalization through the 2pt at theta = pi
    Real a_disc = m.s_matrix(one, one) / mp::sqrt(m.s_matrix(one, one));
    CHECK(d(mp::abs(disc_2pt(m, *F, one, one, one, pi) - a_disc)) < 1e-55);

    // rotation identity value(a,b,theta) = value(b,a,2pi-theta)
    for (Real th : {pi / 3, Real(2), pi - Real("0.4")}) {
        Real lhs = disc_2pt(m, *F, sig, sig, eps, th);
        Real rhs = disc_2pt(m, *F, sig, sig, eps, 2 * pi - th);
        CHECK(d(mp::abs(lhs - rhs)) < 1e-50);
        Real lhs2 = disc_2pt(m, *F, sig, eps, sig, th);
        Real rhs2 = disc_2pt(m, *F, eps, sig, sig, 2 * pi - th);
        CHECK(d(mp::abs(lhs2 - rhs2)) < 1e-50);
    }

    // all-identity three point equals the empty disc amplitude, here for
    // boundary condition a = sigma
    Real v3 = disc_3pt_primary(m, *F, sig, sig, sig, one, one, one);
    Real want = m.s_matrix(sig, one) / mp::sqrt(m.s_matrix(one, one));
    CHECK(d(mp::abs(v3 - want)) < 1e-55);
}

TEST_CASE("Ising disc 3pt from the listed F-values") {
    // (sigma sigma sigma; eps eps 1): F_{sigma 1}[ss;ee] F_{sigma 1}[ss;11]
    // (S_{s1}/sqrt(S11)) (sqrt3/2)^{-1}
    MinimalModel m(3, 4);
    auto F = FSymbols::cached(m);
    KacLabel one{1, 1}, sig{1, 2}, eps{1, 3};
    Real got = disc_3pt_primary(m, *F, sig, sig, sig, eps, eps, one);
    Real want = Real(1) / 2 * m.s_matrix(sig, one) / mp::sqrt(m.s_matrix(one, one)) *
                (2 / mp::sqrt(Real(3)));
    CHECK(d(mp::abs(got - want)) < 1e-55);
}

TEST_CASE("projector regime: h_max = 0 keeps the p weight-zero fields") {
    for (int p : {3, 4, 5}) {
        MinimalModel m(p, p + 1);
        auto basis = truncated_boundary_basis(m, label_set_first_row(m), Rational(0));
        CHECK(basis.size() == static_cast<size_t>(p));
    }
}

TEST_CASE("disc 3pt and N-constant cyclic invariance") {
    MinimalModel m(4, 5);
    auto F = FSymbols::cached(m);
    const auto& L = m.labels();
    int checked = 0;
    for (const auto& a : L)
        for (const auto& b : L)
            for (const auto& c : L)
                for (const auto& i : L)
                    for (const auto& j : L)
                        for (const auto& k : L) {
                            if (!(m.fusion_coeff(b, a, i) && m.fusion_coeff(c, b, j) &&
                                  m.fusion_coeff(a, c, k) && m.fusion_coeff(i, j, k)))
                                continue;
                            Real v1 = disc_3pt_primary(m, *F, a, b, c, i, j, k);
                            Real v2 = disc_3pt_primary(m, *F, b, c, a, j, k, i);
                            CHECK(d(mp::abs(v1 - v2)) < 1e-48 * (1 + std::fabs(d(v1))));
                            Real n1 = n_constant(m, *F, a, b, c, i, j, k);
                            Real n2 = n_constant(m, *F, b, c, a, j, k, i);
                            CHECK(d(mp::abs(n1 - n2)) < 1e-48 * (1 + std::fabs(d(n1))));
                            ++checked;
                        }
    CHECK(checked > 50);
}

TEST_CASE("triangle coordinate map matches the quoted second order") {
    TriangleGeometry g(0.7, 20, 128);
    CoordMapOperator gamma(g.block_map_series(), 4);
    double t = 0.7;
    // eps_1 = i/2, eps_2 = -(5/192)(1+4t^2)/(1+t^2); a1 = 4/(3X)
    const auto& eps = gamma.peeled();
    CHECK(d(eps[1] - Cplx(Real(0), Real(1) / 2)) < 1e-40);
    Real want2 = -Real(5) / 192 * (1 + 4 * Real(t) * Real(t)) / (1 + Real(t) * Real(t));
    CHECK(d(eps[2] - Cplx(want2)) < 1e-40);
    const auto& series = g.block_map_series();
    CHECK(d(series[0] - Cplx(4 / (3 * g.X()))) < 1e-50);
}

TEST_CASE("triangle amplitude assembly on primaries") {
    MinimalModel m(3, 4);
    auto F = FSymbols::cached(m);
    TriangleGeometry g(0.5, 30, 256);
    double dphys = to_double(g.d());
    TriangleAmplitudes amps(m, F, g, dphys, 2, 1e-6);
    KacLabel one{1, 1}, sig{1, 2}, eps{1, 3};

    // all-vacuum entry: N^{111}_{111} = S11^{-1/4}, B = 1
    Real t111 = amps.triangle_amplitude(one, one, one, one, one, one, 0, 0, 0, 0, 0, 0,
                                        false);
    Real want = mp::pow(m.s_matrix(one, one), Real(-1) / 4);
    CHECK(d(mp::abs(t111 - want)) < 1e-40);
    Real t111a = amps.triangle_amplitude(one, one, one, one, one, one, 0, 0, 0, 0, 0, 0,
                                         true);
    CHECK(d(t111a) == doctest::Approx(d(want) * std::exp(amps.anomaly_A())).epsilon(1e-12));

    // primary factorization: T (no anomaly) = (2/(3X))^{sum h} *
    //   disc3pt / sqrt of the three two-point normalizations
    auto norm2 = [&](KacLabel a, KacLabel b, KacLabel i) {
        return m.s_matrix(a, one) / mp::sqrt(m.s_matrix(one, one)) *
               F->f(b, one, a, a, i, i);
    };
    for (auto [a, b, c, i, j, k] :
         {std::tuple{sig, sig, sig, one, eps, eps}, {sig, eps, sig, eps, sig, sig},
          {eps, sig, one, sig, sig, eps}}) {
        if (!(m.fusion_coeff(b, a, i) && m.fusion_coeff(c, b, j) &&
              m.fusion_coeff(a, c, k) && m.fusion_coeff(i, j, k)))
            continue;
        Real got = amps.triangle_amplitude(a, b, c, i, j, k, 0, 0, 0, 0, 0, 0, false);
        Real hsum = to_real(m.conformal_weight(i) + m.conformal_weight(j) +
                            m.conformal_weight(k));
        Real expect = mp::pow(2 / (3 * amps.X()), hsum) *
                      disc_3pt_primary(m, *F, a, b, c, i, j, k) /
                      mp::sqrt(norm2(b, a, i) * norm2(c, b, j) * norm2(a, c, k));
        CHECK(d(mp::abs(got - expect)) < 1e-35 * (1 + std::fabs(d(expect))));
    }
}

TEST_CASE("cloaking table at the Ising Z2 cutoff") {
    MinimalModel m(3, 4);
    auto F = FSymbols::cached(m);
    TriangleGeometry g(0.45, 30, 256);
    double dphys = to_double(g.d());
    TriangleAmplitudes amps(m, F, g, dphys, 1, 1e-6);

    auto z2 = label_set_z2(m);
    Real delta0 = mp::pow(m.s_matrix(m.vacuum(), m.vacuum()), Real(3) / 2);
    auto table = cloaking_triangle_table(amps, z2, delta0, Rational(1, 2));
    // 4 states: kappa_1^{(11)}, kappa_eps^{(1e)}, kappa_eps^{(e1)}, kappa_1^{(ee)}
    CHECK(table.basis.size() == 4);

    // cyclic symmetry of the table
    size_t n = table.basis.size();
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y)
            for (size_t z = 0; z < n; ++z)
                CHECK(d(mp::abs(table.at(x, y, z) - table.at(y, z, x))) < 1e-9);

    // T_{aab}/T_{aaa} = x(R): locate the entries
    auto find = [&](KacLabel l, KacLabel r, KacLabel rep) -> size_t {
        for (size_t idx = 0; idx < n; ++idx) {
            const auto& s = table.basis[idx];
            if (s.left == l && s.right == r && s.rep == rep) return idx;
        }
        REQUIRE(false);
        return 0;
    };
    KacLabel one{1, 1}, eps{1, 3};
    size_t k11 = find(one, one, one), kee = find(eps, eps, one);
    size_t k1e = find(one, eps, eps), ke1 = find(eps, one, eps);
    Real taaa = table.at(k11, k11, k11);
    Real tbbb = table.at(kee, kee, kee);
    CHECK(d(mp::abs(taaa - tbbb)) < 1e-30); // dims are 1 for both
    // T(kappa_eps^{(e1)}, kappa_eps^{(1e)}, kappa_1^{(11)}) = T_{aaa} x(R) for a=1,b=eps
    Real taab = table.at(ke1, k1e, k11);
    Real hf = to_real(m.conformal_weight(eps));
    Real xR = mp::pow(4 / (3 * mp::sqrt(Real(3)) * amps.X()), 2 * hf);
    CHECK(d(mp::abs(taab / taaa - xR)) < 1e-25);
}

TEST_CASE("vacuum dominance: high-weight entries suppressed more at small t") {
    MinimalModel m(3, 4);
    auto F = FSymbols::cached(m);
    auto z2 = label_set_z2(m);
    Real delta0 = mp::pow(m.s_matrix(m.vacuum(), m.vacuum()), Real(3) / 2);
    double r_prev = -1;
    for (double t : {0.2, 0.45, 0.8}) {
        TriangleGeometry g(t, 24, 128);
        TriangleAmplitudes amps(m, F, g, to_double(g.d()), 0, 1e-5);
        auto table = cloaking_triangle_table(amps, z2, delta0, Rational(1, 2));
        // locate T_{aaa} and a mixed entry with total weight 1
        size_t n = table.basis.size();
        double t_low = 0, t_high = 0;
        for (size_t x = 0; x < n; ++x)
            for (size_t y = 0; y < n; ++y)
                for (size_t z = 0; z < n; ++z) {
                    double v = std::fabs(to_double(table.at(x, y, z)));
                    if (v == 0) continue;
                    Rational h = table.basis[x].h + table.basis[y].h + table.basis[z].h;
                    if (h == 0) t_low = v;
                    else t_high = v;
                }
        double ratio = t_high / t_low;
        CHECK(ratio > r_prev); // suppression strengthens toward t -> 0
        r_prev = ratio;
    }
}

TEST_CASE("one-hole contraction collapses to boundary-preserving sectors") {
    // contract two triangle tables with the one-hole identification pattern;
    // the boundary deltas force all six boundary labels equal
    MinimalModel m(3, 4);
    auto F = FSymbols::cached(m);
    auto z2 = label_set_z2(m);
    Real delta0 = mp::pow(m.s_matrix(m.vacuum(), m.vacuum()), Real(3) / 2);
    TriangleGeometry g(0.5, 24, 128);
    TriangleAmplitudes amps(m, F, g, to_double(g.d()), 0, 1e-5);
    auto table = cloaking_triangle_table(amps, z2, delta0, Rational(1, 2));
    size_t n = table.basis.size();

    auto same_state = [&](const BoundaryState& s1, const BoundaryState& s2) {
        return s1.rep == s2.rep && s1.level == s2.level && s1.alpha == s2.alpha;
    };
    Real lhs(0);
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y)
            for (size_t z = 0; z < n; ++z)
                for (size_t x2 = 0; x2 < n; ++x2)
                    for (size_t y2 = 0; y2 < n; ++y2)
                        for (size_t z2i = 0; z2i < n; ++z2i) {
                            const auto &s1 = table.basis[x], &s2 = table.basis[y],
                                       &s3 = table.basis[z];
                            const auto &s4 = table.basis[x2], &s5 = table.basis[y2],
                                       &s6 = table.basis[z2i];
                            if (!(same_state(s1, s4) && same_state(s2, s5) &&
                                  same_state(s3, s6)))
                                continue;
                            // labels: s1=(b,a), s2=(c,b), s3=(a,c);
                            //         s4=(e,d), s5=(f,e), s6=(d,f)
                            KacLabel b = s1.left, a = s1.right, c = s2.left;
                            KacLabel e = s4.left, d = s4.right, f = s5.left;
                            if (!(a == f && c == d && b == d && a == e && b == f &&
                                  c == e))
                                continue;
                            lhs += table.at(x, y, z) * table.at(x2, y2, z2i);
                        }
    Real rhs(0);
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y)
            for (size_t z = 0; z < n; ++z) {
                const auto &s1 = table.basis[x], &s2 = table.basis[y],
                           &s3 = table.basis[z];
                bool all_equal = s1.left == s1.right && s2.left == s2.right &&
                                 s3.left == s3.right && s1.left == s2.left &&
                                 s2.left == s3.left;
                if (all_equal) rhs += table.at(x, y, z) * table.at(x, y, z);
            }
    CHECK(to_double(mp::abs(lhs - rhs)) < 1e-40);
    CHECK(to_double(rhs) > 0);
}
