#include <doctest.h>

#include "cftlat/minimal_model.hpp"

#include <numeric>
#include <set>

using namespace cftlat;

namespace {

// Independent BPZ fusion oracle: take the su(2) x su(2) ranges from all four
// representative choices of the two inputs, keep what lands in the Kac table
// after the double truncation, and canonicalize.
std::set<KacLabel> bpz_fusion_oracle(const MinimalModel& m, KacLabel i, KacLabel j) {
    std::set<KacLabel> out;
    auto reps = [&](KacLabel l) {
        return std::vector<KacLabel>{l, {m.p() - l.r, m.q() - l.s}};
    };
    for (KacLabel a : reps(m.canonical(i)))
        for (KacLabel b : reps(m.canonical(j))) {
            for (int r = std::abs(a.r - b.r) + 1;
                 r <= std::min(a.r + b.r - 1, 2 * m.p() - 1 - a.r - b.r); r += 2)
                for (int s = std::abs(a.s - b.s) + 1;
                     s <= std::min(a.s + b.s - 1, 2 * m.q() - 1 - a.s - b.s); s += 2)
                    out.insert(m.canonical({r, s}));
        }
    return out;
}

std::vector<std::pair<int, int>> models_up_to_7() {
    std::vector<std::pair<int, int>> v;
    for (int p = 3; p <= 7; ++p)
        for (int q = p + 1; q <= 7; ++q)
            if (std::gcd(p, q) == 1) v.push_back({p, q});
    return v;
}

} // namespace

TEST_CASE("central charges") {
    CHECK(MinimalModel(3, 4).central_charge() == Rational(1, 2));
    CHECK(MinimalModel(4, 5).central_charge() == Rational(7, 10));
    CHECK(MinimalModel(5, 6).central_charge() == Rational(4, 5));
    CHECK_THROWS(MinimalModel(2, 3));
    CHECK_THROWS(MinimalModel(4, 6));
}

TEST_CASE("Ising weights and labels") {
    MinimalModel ising(3, 4);
    CHECK(ising.num_labels() == 3);
    CHECK(ising.conformal_weight({1, 2}) == Rational(1, 16));
    CHECK(ising.conformal_weight({1, 3}) == Rational(1, 2));
    CHECK(ising.conformal_weight({1, 1}) == 0);
    // identification invariance
    CHECK(ising.conformal_weight({2, 2}) == Rational(1, 16));
    CHECK(ising.canonical({2, 1}) == KacLabel{1, 3});
}

TEST_CASE("Ising fusion rules") {
    MinimalModel m(3, 4);
    KacLabel one{1, 1}, sig{1, 2}, eps{1, 3};
    CHECK(m.fusion_coeff(sig, sig, one) == 1);
    CHECK(m.fusion_coeff(sig, sig, eps) == 1);
    CHECK(m.fusion_coeff(sig, sig, sig) == 0);
    CHECK(m.fusion_coeff(eps, eps, one) == 1);
    CHECK(m.fusion_coeff(eps, eps, eps) == 0);
    CHECK(m.fusion_coeff(eps, sig, sig) == 1);
    for (const auto& j : m.labels())
        for (const auto& k : m.labels())
            CHECK(m.fusion_coeff(one, j, k) == (j == k ? 1 : 0));
}

TEST_CASE("fusion agrees with BPZ oracle for p,q <= 7") {
    for (auto [p, q] : models_up_to_7()) {
        MinimalModel m(p, q);
        for (const auto& i : m.labels())
            for (const auto& j : m.labels()) {
                auto oracle = bpz_fusion_oracle(m, i, j);
                for (const auto& k : m.labels()) {
                    int want = oracle.count(k) ? 1 : 0;
                    CHECK(m.fusion_coeff(i, j, k) == want);
                }
            }
    }
}

TEST_CASE("tricritical (1,2) fusion") {
    MinimalModel m(4, 5);
    auto prod = m.fusion_product({1, 2}, {1, 2});
    CHECK(prod.size() == 2);
    CHECK(m.fusion_coeff({1, 2}, {1, 2}, {1, 1}) == 1);
    CHECK(m.fusion_coeff({1, 2}, {1, 2}, {1, 3}) == 1);
}

TEST_CASE("S-matrix values, symmetry, and involution") {
    MinimalModel ising(3, 4);
    CHECK(to_double(ising.s_matrix({1, 1}, {1, 1})) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(to_double(ising.quantum_dim({1, 2})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(to_double(ising.quantum_dim({1, 3})) == doctest::Approx(1.0).epsilon(1e-14));

    for (auto [p, q] : models_up_to_7()) {
        MinimalModel m(p, q);
        size_t n = m.num_labels();
        // symmetric, representative independent, S^2 = 1
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                KacLabel li = m.label_at(i), lj = m.label_at(j);
                CHECK(to_double(mp::abs(m.s_matrix(li, lj) - m.s_matrix(lj, li))) < 1e-60);
                KacLabel mi{m.p() - li.r, m.q() - li.s};
                CHECK(to_double(mp::abs(m.s_matrix(mi, lj) - m.s_matrix(li, lj))) < 1e-60);
                Real acc(0);
                for (size_t k = 0; k < n; ++k)
                    acc += m.s_matrix(li, m.label_at(k)) * m.s_matrix(m.label_at(k), lj);
                CHECK(to_double(mp::abs(acc - (i == j ? 1 : 0))) < 1e-12);
            }
        // positive quantum dimensions for unitary models
        if (q == p + 1)
            for (const auto& a : m.labels()) CHECK(m.quantum_dim(a) > 0);
    }
}

TEST_CASE("quantum dimension closed forms") {
    // M(p,p+1): dim(1,2) = 2 cos(pi/(p+1))
    for (int p = 3; p <= 6; ++p) {
        MinimalModel m(p, p + 1);
        Real want = 2 * mp::cos(real_pi() / (p + 1));
        CHECK(to_double(mp::abs(m.quantum_dim({1, 2}) - want)) < 1e-60);
    }
    // M(4,5): S_{(1,1),(1,2)} / S_{(1,1),(1,1)} = 2 cos(pi/5)
    MinimalModel m(4, 5);
    Real ratio = m.s_matrix({1, 1}, {1, 2}) / m.s_matrix({1, 1}, {1, 1});
    CHECK(to_double(mp::abs(ratio - 2 * mp::cos(real_pi() / 5))) < 1e-60);
}

TEST_CASE("label sets") {
    MinimalModel m(4, 5);
    auto all = label_set_all(m);
    CHECK(all.size() == 6);
    auto row = label_set_first_row(m);
    CHECK(row.size() == 4);
    CHECK(m.fusion_closed(row));
    auto z2 = label_set_z2(m);
    CHECK(z2.size() == 2);
    CHECK(m.fusion_closed(z2));
    CHECK(m.fusion_closed(all));
    // a non-closed set
    std::vector<KacLabel> bad{{1, 1}, {1, 2}};
    CHECK(!m.fusion_closed(bad));
}
