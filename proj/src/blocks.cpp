#include "cftlat/blocks.hpp"

#include "cftlat/anomaly.hpp"

#include <algorithm>
#include <cmath>

namespace cftlat {

namespace {

Cplx zeta3() {
    Real pi = real_pi();
    return Cplx(mp::cos(2 * pi / 3), mp::sin(2 * pi / 3));
}

// binom(1-m, k-1) as a working-precision real
Real binom_1m(int m, int k) {
    Real acc(1);
    for (int j = 0; j < k - 1; ++j) acc *= Real(1 - m - j) / Real(j + 1);
    return acc;
}

} // namespace

std::shared_ptr<ThreePointBlock> ThreePointBlock::get(const Rational& c,
                                                      const Rational& h1,
                                                      const Rational& h2,
                                                      const Rational& h3,
                                                      int max_level) {
    static std::mutex mu;
    static std::map<std::tuple<Rational, Rational, Rational, Rational, int>,
                    std::shared_ptr<ThreePointBlock>>
        registry;
    std::scoped_lock lock(mu);
    auto key = std::make_tuple(c, h1, h2, h3, max_level);
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    auto ptr = std::shared_ptr<ThreePointBlock>(
        new ThreePointBlock(c, h1, h2, h3, max_level));
    registry.emplace(key, ptr);
    return ptr;
}

ThreePointBlock::ThreePointBlock(const Rational& c, const Rational& h1,
                                 const Rational& h2, const Rational& h3, int max_level)
    : c_(c), h1_(h1), h2_(h2), h3_(h3), max_level_(max_level) {
    legs_[0] = std::make_unique<TruncatedModule>(c, h1, max_level);
    legs_[1] = std::make_unique<TruncatedModule>(c, h2, max_level);
    legs_[2] = std::make_unique<TruncatedModule>(c, h3, max_level);
}

Cplx ThreePointBlock::eval(const VState& u, const VState& v, const VState& w) const {
    Cplx acc(0);
    for (const auto& [lu, cu] : u.comp)
        for (size_t wu = 0; wu < cu.size(); ++wu) {
            if (norm(cu[wu]) == 0) continue;
            const ModeWord& mu_w = legs_[0]->words(lu)[wu];
            for (const auto& [lv, cv] : v.comp)
                for (size_t wv = 0; wv < cv.size(); ++wv) {
                    if (norm(cv[wv]) == 0) continue;
                    const ModeWord& mv_w = legs_[1]->words(lv)[wv];
                    for (const auto& [lw, cw] : w.comp)
                        for (size_t ww = 0; ww < cw.size(); ++ww) {
                            if (norm(cw[ww]) == 0) continue;
                            acc += cu[wu] * cv[wv] * cw[ww] *
                                   word_block(mu_w, mv_w, legs_[2]->words(lw)[ww]);
                        }
                }
        }
    return acc;
}

Cplx ThreePointBlock::word_block(const ModeWord& wa, const ModeWord& wb,
                                 const ModeWord& wc) const {
    if (wa.parts.empty() && wb.parts.empty() && wc.parts.empty()) return Cplx(Real(1));
    if (wa.parts.empty()) {
        // cyclic symmetry B(u,v,w) = B(v,w,u)
        auto rotated = ThreePointBlock::get(c_, h2_, h3_, h1_, max_level_);
        return rotated->word_block(wb, wc, wa);
    }
    std::scoped_lock lock(mu_);
    auto key = std::make_tuple(wa, wb, wc);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // strip L_{-m} from the first leg:
    //   B(L_{-m} u, v, w) = B(A0 u, v, w) + B(u, A+ v, w) + B(u, v, A- w)
    int m = wa.parts.front();
    ModeWord rest{std::vector<int>(wa.parts.begin() + 1, wa.parts.end())};
    VState u;
    u.add(rest.level(), legs_[0]->word_index(rest), Cplx(Real(1)));
    VState v;
    v.add(wb.level(), legs_[1]->word_index(wb), Cplx(Real(1)));
    VState w;
    w.add(wc.level(), legs_[2]->word_index(wc), Cplx(Real(1)));

    Cplx z = zeta3(), zb = conj(z);
    Real pw3 = mp::pow(Real(3), Real(-m) / 2);

    Cplx total(0);

    // A0 = -i L_{-m+1} + (1/3) L_{-m+2}
    {
        VState t1 = legs_[0]->apply_mode(1 - m, u);
        for (auto& [lvl, cs] : t1.comp)
            for (auto& x : cs) x *= Cplx(Real(0), Real(-1));
        VState t2 = legs_[0]->apply_mode(2 - m, u);
        for (auto& [lvl, cs] : t2.comp)
            for (auto& x : cs) x *= Cplx(Real(1) / 3);
        // B(A0 u, v, w)
        for (const VState* s : {&t1, &t2})
            for (const auto& [lvl, cs] : s->comp)
                for (size_t wi = 0; wi < cs.size(); ++wi)
                    if (norm(cs[wi]) != 0)
                        total += cs[wi] * word_block(legs_[0]->words(lvl)[wi], wb, wc);
    }

    // A+ acting on the second leg
    {
        Cplx pref = -Cplx(Real((m % 2 == 0) ? 1 : -1)) * Cplx(pw3) * pow(z, Real(m - 1));
        // L0 term
        Cplx l0(legs_[1]->h_real() + wb.level());
        total += pref * l0 * word_block(rest, wb, wc);
        // sum over k >= 1 of binom(1-m,k-1) (-1)^k 3^{-k/2} zb^k ((2-m-k)/k - zb) L_k
        for (int k = 1; k <= wb.level(); ++k) {
            Cplx coeff = Cplx(binom_1m(m, k)) * Cplx(Real((k % 2 == 0) ? 1 : -1)) *
                         Cplx(mp::pow(Real(3), Real(-k) / 2)) * pow(zb, Real(k)) *
                         (Cplx(Real(2 - m - k) / k) - zb);
            VState lk = legs_[1]->apply_mode(k, v);
            for (const auto& [lvl, cs] : lk.comp)
                for (size_t wi = 0; wi < cs.size(); ++wi)
                    if (norm(cs[wi]) != 0)
                        total += pref * coeff * cs[wi] *
                                 word_block(rest, legs_[1]->words(lvl)[wi], wc);
        }
    }

    // A- acting on the third leg
    {
        Cplx pref = -Cplx(pw3) * pow(zb, Real(m - 1));
        Cplx l0(legs_[2]->h_real() + wc.level());
        total += pref * l0 * word_block(rest, wb, wc);
        for (int k = 1; k <= wc.level(); ++k) {
            Cplx coeff = Cplx(binom_1m(m, k)) * Cplx(mp::pow(Real(3), Real(-k) / 2)) *
                         pow(z, Real(k)) * (Cplx(Real(2 - m - k) / k) - z);
            VState lk = legs_[2]->apply_mode(k, w);
            for (const auto& [lvl, cs] : lk.comp)
                for (size_t wi = 0; wi < cs.size(); ++wi)
                    if (norm(cs[wi]) != 0)
                        total += pref * coeff * cs[wi] *
                                 word_block(rest, wb, legs_[2]->words(lvl)[wi]);
        }
    }

    memo_.emplace(key, total);
    return total;
}

Real n_constant(const MinimalModel& m, const FSymbols& F, KacLabel a, KacLabel b,
                KacLabel c, KacLabel i, KacLabel j, KacLabel k) {
    if (!(m.fusion_coeff(b, a, i) && m.fusion_coeff(c, b, j) && m.fusion_coeff(a, c, k) &&
          m.fusion_coeff(i, j, k)))
        return Real(0);
    KacLabel one = m.vacuum();
    Real hsum = to_real(m.conformal_weight(i) + m.conformal_weight(j) +
                        m.conformal_weight(k));
    Real s11 = m.s_matrix(one, one);
    Real ratio = F.f(c, one, a, a, k, k) /
                 (F.f(a, one, b, b, i, i) * F.f(b, one, c, c, j, j));
    return m.quantum_dim(a) / (mp::pow(s11, Real(1) / 4) * mp::pow(Real(3), hsum / 2)) *
           mp::sqrt(ratio) * F.f(b, k, c, a, j, i);
}

Real disc_2pt(const MinimalModel& m, const FSymbols& F, KacLabel a, KacLabel b,
              KacLabel i, const Real& theta) {
    if (!m.fusion_coeff(a, b, i)) return Real(0);
    KacLabel one = m.vacuum();
    Real hi = to_real(m.conformal_weight(i));
    return m.s_matrix(a, one) / mp::sqrt(m.s_matrix(one, one)) * F.f(b, one, a, a, i, i) *
           mp::pow(mp::sin(theta / 2), -2 * hi);
}

Real disc_3pt_primary(const MinimalModel& m, const FSymbols& F, KacLabel a, KacLabel b,
                      KacLabel c, KacLabel i, KacLabel j, KacLabel k) {
    if (!(m.fusion_coeff(b, a, i) && m.fusion_coeff(c, b, j) && m.fusion_coeff(a, c, k) &&
          m.fusion_coeff(i, j, k)))
        return Real(0);
    KacLabel one = m.vacuum();
    Real hsum = to_real(m.conformal_weight(i) + m.conformal_weight(j) +
                        m.conformal_weight(k));
    return F.f(b, k, c, a, j, i) * F.f(c, one, a, a, k, k) * m.s_matrix(a, one) /
           mp::sqrt(m.s_matrix(one, one)) * mp::pow(mp::sqrt(Real(3)) / 2, -hsum);
}

TriangleAmplitudes::TriangleAmplitudes(const MinimalModel& model,
                                       std::shared_ptr<const FSymbols> F,
                                       const TriangleGeometry& geom, double d_phys,
                                       int level_cutoff, double anomaly_tol)
    : model_(model), F_(std::move(F)), X_(geom.X()), cutoff_(level_cutoff) {
    gamma_series_ = geom.block_map_series();
    double c = to_double(to_real(model_.central_charge()));
    A_ = triangle_anomaly_A(geom, c, d_phys, anomaly_tol);
}

const TruncatedModule& TriangleAmplitudes::module_of(KacLabel rep) const {
    std::scoped_lock lock(mu_);
    rep = model_.canonical(rep);
    auto it = modules_.find(rep);
    if (it == modules_.end())
        it = modules_.emplace(rep, module_registry(model_, rep, cutoff_)).first;
    return *it->second;
}

VState TriangleAmplitudes::gamma_on_state(const TruncatedModule& mod, int level,
                                          int alpha) const {
    // twisted-ON vector i^level * (standard ON), then Gamma applied
    VState v = mod.on_state(level, alpha);
    Cplx phase(Real(1));
    switch (level % 4) {
        case 1: phase = Cplx(Real(0), Real(1)); break;
        case 2: phase = Cplx(Real(-1)); break;
        case 3: phase = Cplx(Real(0), Real(-1)); break;
        default: break;
    }
    for (auto& [lvl, cs] : v.comp)
        for (auto& x : cs) x *= phase;
    CoordMapOperator gamma(gamma_series_, cutoff_);
    return gamma.apply(mod, v);
}

TriangleAmplitudes::BlockTensor TriangleAmplitudes::gamma_block_tensor(
    KacLabel i, KacLabel j, KacLabel k) const {
    const TruncatedModule& mi = module_of(i);
    const TruncatedModule& mj = module_of(j);
    const TruncatedModule& mk = module_of(k);
    auto block = ThreePointBlock::get(model_.central_charge(), model_.conformal_weight(i),
                                      model_.conformal_weight(j),
                                      model_.conformal_weight(k), cutoff_);

    auto collect = [&](const TruncatedModule& mod) {
        std::vector<VState> states;
        for (int n = 0; n <= cutoff_; ++n)
            for (int a = 0; a < mod.dim(n); ++a)
                states.push_back(gamma_on_state(mod, n, a));
        return states;
    };
    std::vector<VState> si = collect(mi), sj = collect(mj), sk = collect(mk);

    BlockTensor out;
    out.dim = {static_cast<int>(si.size()), static_cast<int>(sj.size()),
               static_cast<int>(sk.size())};
    out.val.resize(si.size() * sj.size() * sk.size());
    size_t idx = 0;
    for (const auto& u : si)
        for (const auto& v : sj)
            for (const auto& w : sk) out.val[idx++] = block->eval(u, v, w);
    return out;
}

Real TriangleAmplitudes::triangle_amplitude(KacLabel a, KacLabel b, KacLabel c,
                                            KacLabel i, KacLabel j, KacLabel k,
                                            int alpha, int beta, int gamma_idx, int li,
                                            int lj, int lk, bool with_anomaly) const {
    Real nc = n_constant(model_, *F_, a, b, c, i, j, k);
    if (nc == 0) return Real(0);
    const TruncatedModule& mi = module_of(i);
    const TruncatedModule& mj = module_of(j);
    const TruncatedModule& mk = module_of(k);
    auto block = ThreePointBlock::get(model_.central_charge(), model_.conformal_weight(i),
                                      model_.conformal_weight(j),
                                      model_.conformal_weight(k), cutoff_);
    Cplx B = block->eval(gamma_on_state(mi, li, alpha), gamma_on_state(mj, lj, beta),
                         gamma_on_state(mk, lk, gamma_idx));
    Real dims = mp::sqrt(model_.quantum_dim(a) * model_.quantum_dim(b) *
                         model_.quantum_dim(c));
    Real val = nc / dims * B.re;
    // individual odd-level entries carry an i^(sum of levels) phase; only
    // assembled amplitudes are guaranteed real
    if (mp::abs(B.im) > Real("1e-8") * (1 + mp::abs(B.re)))
        std::fprintf(stderr, "triangle_amplitude: imaginary part %.3e discarded\n",
                     to_double(B.im));
    if (with_anomaly) val *= Real(std::exp(A_));
    return val;
}

std::vector<BoundaryState> truncated_boundary_basis(const MinimalModel& m,
                                                    const std::vector<KacLabel>& symmetry,
                                                    const Rational& h_max) {
    if (!m.fusion_closed(symmetry))
        throw std::invalid_argument("truncated_boundary_basis: symmetry set not fusion closed");
    std::vector<BoundaryState> basis;
    for (const auto& a : symmetry)
        for (const auto& b : symmetry)
            for (const auto& i : m.labels()) {
                if (!m.fusion_coeff(i, b, a)) continue;
                Rational hi = m.conformal_weight(i);
                if (hi > h_max) continue;
                int max_lvl = 0;
                while (hi + max_lvl + 1 <= h_max) ++max_lvl;
                auto mod_ptr = module_registry(m, i, max_lvl);
                const TruncatedModule& mod = *mod_ptr;
                for (int n = 0; n <= max_lvl; ++n)
                    for (int al = 0; al < mod.dim(n); ++al)
                        basis.push_back(
                            {m.canonical(a), m.canonical(b), m.canonical(i), n, al, hi + n});
            }
    return basis;
}

TriangleAmplitudeTable cloaking_triangle_table(const TriangleAmplitudes& amps,
                                               const std::vector<KacLabel>& symmetry,
                                               const Real& delta0, const Rational& h_max) {
    const MinimalModel& m = amps.model();
    TriangleAmplitudeTable table;
    table.basis = truncated_boundary_basis(m, symmetry, h_max);
    size_t n = table.basis.size();
    table.value.assign(n * n * n, Real(0));
    Real pref = mp::sqrt(delta0) * Real(std::exp(amps.anomaly_A()));

    std::map<std::tuple<KacLabel, KacLabel, KacLabel>, TriangleAmplitudes::BlockTensor>
        tensors;
    auto flat = [&](const TruncatedModule& mod, int level, int alpha) {
        int idx = alpha;
        for (int l = 0; l < level; ++l) idx += mod.dim(l);
        return idx;
    };

    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y)
            for (size_t z = 0; z < n; ++z) {
                const BoundaryState &s1 = table.basis[x], &s2 = table.basis[y],
                                    &s3 = table.basis[z];
                // kappa^{(ba)} kappa^{(cb)} kappa^{(ac)} chaining
                KacLabel b = s1.left, a = s1.right;
                KacLabel c = s2.left;
                if (!(s2.right == b && s3.left == a && s3.right == c)) continue;
                Real nc = n_constant(m, amps.fsymbols(), a, b, c, s1.rep, s2.rep, s3.rep);
                if (nc == 0) continue;
                auto key = std::make_tuple(s1.rep, s2.rep, s3.rep);
                auto it = tensors.find(key);
                if (it == tensors.end())
                    it = tensors
                             .emplace(key,
                                      amps.gamma_block_tensor(s1.rep, s2.rep, s3.rep))
                             .first;
                const auto& tens = it->second;
                Cplx B = tens.at(flat(amps.module_of(s1.rep), s1.level, s1.alpha),
                                 flat(amps.module_of(s2.rep), s2.level, s2.alpha),
                                 flat(amps.module_of(s3.rep), s3.level, s3.alpha));
                Real dims = mp::pow(m.quantum_dim(a) * m.quantum_dim(b) * m.quantum_dim(c),
                                    Real(1) / 3);
                table.value[(x * n + y) * n + z] = pref * nc / dims * B.re;
            }
    return table;
}

} // namespace cftlat
