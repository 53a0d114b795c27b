#include "cftlat/virasoro.hpp"

#include "cftlat/series.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace cftlat {

std::vector<ModeWord> partitions_of(int n) {
    std::vector<ModeWord> out;
    ModeWord cur;
    // descending parts, lexicographically
    std::function<void(int, int)> rec = [&](int rem, int maxpart) {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rem, maxpart); p >= 1; --p) {
            cur.parts.push_back(p);
            rec(rem - p, p);
            cur.parts.pop_back();
        }
    };
    rec(n, n);
    return out;
}

bool VState::empty() const {
    for (const auto& [lvl, v] : comp)
        for (const auto& x : v)
            if (norm(x) != 0) return false;
    return true;
}

void VState::add(int level, size_t widx, const Cplx& coeff) {
    auto& v = comp[level];
    if (v.size() <= widx) v.resize(partitions_of(level).size());
    v[widx] += coeff;
}

void VState::prune(const Real& tol) {
    for (auto it = comp.begin(); it != comp.end();) {
        bool live = false;
        for (const auto& x : it->second)
            if (abs(x) > tol) { live = true; break; }
        it = live ? std::next(it) : comp.erase(it);
    }
}

TruncatedModule::TruncatedModule(Rational c, Rational h, int max_level)
    : c_(std::move(c)), h_(std::move(h)), max_level_(max_level) {
    c_real_ = to_real(c_);
    h_real_ = to_real(h_);
    words_.resize(max_level_ + 1);
    gram_.resize(max_level_ + 1);
    on_.resize(max_level_ + 1);
    signs_.resize(max_level_ + 1);
    for (int n = 0; n <= max_level_; ++n) words_[n] = partitions_of(n);
}

TruncatedModule TruncatedModule::for_label(const MinimalModel& model, KacLabel label,
                                           int max_level) {
    return TruncatedModule(model.central_charge(), model.conformal_weight(label),
                           max_level);
}

int TruncatedModule::verma_dim(int n) const {
    return static_cast<int>(words_[n].size());
}

const std::vector<ModeWord>& TruncatedModule::words(int n) const { return words_[n]; }

size_t TruncatedModule::word_index(const ModeWord& w) const {
    const auto& ws = words_[w.level()];
    auto it = std::find(ws.begin(), ws.end(), w);
    if (it == ws.end()) throw std::logic_error("word_index: word not found");
    return static_cast<size_t>(it - ws.begin());
}

std::vector<std::pair<size_t, Real>> TruncatedModule::mode_on_word(int m, int level,
                                                                   size_t widx) const {
    std::scoped_lock lock(mu_);
    return mode_on_word_impl(m, level, widx);
}

const std::vector<std::pair<size_t, Real>>& TruncatedModule::mode_on_word_impl(
    int m, int level, size_t widx) const {
    auto key = std::make_tuple(m, level, widx);
    auto it = mode_cache_.find(key);
    if (it != mode_cache_.end()) return it->second;

    // compute L_m applied to the word, normal ordering recursively
    std::vector<std::pair<size_t, Real>> result;
    const ModeWord& w = words_[level][widx];
    int target = level - m;
    auto add = [&](const ModeWord& nw, const Real& coeff) {
        size_t idx = word_index(nw);
        for (auto& [i, c0] : result)
            if (i == idx) { c0 += coeff; return; }
        result.emplace_back(idx, coeff);
    };

    if (w.parts.empty()) {
        if (m == 0) add(w, h_real_);
        else if (m < 0) {
            ModeWord nw{{-m}};
            if (target <= max_level_) add(nw, Real(1));
        }
        // m > 0: annihilates the primary
    } else {
        int n1 = w.parts.front();
        ModeWord rest{std::vector<int>(w.parts.begin() + 1, w.parts.end())};
        if (m <= -n1) {
            // already normal ordered when prepended
            if (target <= max_level_) {
                ModeWord nw;
                nw.parts.reserve(w.parts.size() + 1);
                nw.parts.push_back(-m);
                nw.parts.insert(nw.parts.end(), w.parts.begin(), w.parts.end());
                add(nw, Real(1));
            }
        } else {
            int rl = rest.level();
            size_t ridx = word_index(rest);
            // L_m L_{-n1} rest = L_{-n1} L_m rest + [L_m, L_{-n1}] rest
            {
                auto inner = mode_on_word_impl(m, rl, ridx); // copy: map may grow
                for (const auto& [idx2, c2] : inner) {
                    int lvl2 = rl - m;
                    auto raised = mode_on_word_impl(-n1, lvl2, idx2);
                    for (const auto& [idx3, c3] : raised)
                        if (lvl2 + n1 <= max_level_)
                            add(words_[lvl2 + n1][idx3], c2 * c3);
                }
            }
            {
                // [L_m, L_{-n1}] = (m + n1) L_{m-n1} + c/12 m(m^2-1) delta_{m,n1}
                Real f(m + n1);
                if (f != 0) {
                    int mm = m - n1;
                    if (rl - mm <= max_level_ && rl - mm >= 0) {
                        auto comm = mode_on_word_impl(mm, rl, ridx);
                        for (const auto& [idx2, c2] : comm)
                            add(words_[rl - mm][idx2], f * c2);
                    }
                }
                if (m == n1) {
                    Real central = c_real_ / 12 * m * (m * m - 1);
                    if (central != 0) add(rest, central);
                }
            }
        }
    }
    auto [ins, ok] = mode_cache_.emplace(key, std::move(result));
    (void)ok;
    return ins->second;
}

VState TruncatedModule::apply_mode(int m, const VState& v) const {
    VState out;
    for (const auto& [lvl, coeffs] : v.comp) {
        int target = lvl - m;
        if (target < 0 || target > max_level_) continue;
        for (size_t w = 0; w < coeffs.size(); ++w) {
            if (norm(coeffs[w]) == 0) continue;
            for (const auto& [idx2, c2] : mode_on_word(m, lvl, w))
                out.add(target, idx2, coeffs[w] * Cplx(c2));
        }
    }
    return out;
}

const RMat& TruncatedModule::gram(int n) const {
    build_level(n);
    return *gram_[n];
}

void TruncatedModule::build_level(int n) const {
    {
        std::scoped_lock lock(mu_);
        if (gram_[n]) return;
    }
    const auto& ws = words_[n];
    size_t d = ws.size();
    auto G = std::make_unique<RMat>(d, d);

    // <M_alpha h, M_beta h> with L_m^dag = L_{-m}: apply the reversed raised
    // word of alpha to beta and read the |h> coefficient.
    for (size_t a = 0; a < d; ++a) {
        for (size_t b = a; b < d; ++b) {
            VState v;
            v.add(n, b, Cplx(Real(1)));
            // adjoint of L_{-n1}...L_{-nk} is L_{nk}...L_{n1}; acting on v the
            // rightmost factor L_{n1} (largest part) applies first
            for (int part : ws[a].parts) {
                v = apply_mode(part, v);
                if (v.empty()) break;
            }
            Cplx val(0);
            if (auto it = v.comp.find(0); it != v.comp.end() && !it->second.empty())
                val = it->second[0];
            (*G)(a, b) = val.re;
            (*G)(b, a) = val.re;
        }
    }

    // Rank-revealing decomposition at threshold 1e-25 relative (64 digits of
    // working precision leave a huge gap to genuine null directions). In the
    // positive semidefinite case a diagonally pivoted Cholesky is much faster
    // than Jacobi; indefinite Grams (non-unitary models) fall back to the
    // eigensolver.
    size_t rank = 0;
    std::unique_ptr<RMat> tight;
    std::vector<int> signs;
    Real gmax(0);
    for (size_t i = 0; i < d; ++i) gmax = std::max(gmax, mp::abs((*G)(i, i)));
    Real thresh = gmax * Real("1e-25");
    bool psd_ok = true;
    {
        RMat A(*G);
        std::vector<size_t> perm(d);
        for (size_t i = 0; i < d; ++i) perm[i] = i;
        RMat Lf(d, d);
        rank = 0;
        for (size_t k = 0; k < d && psd_ok; ++k) {
            size_t piv = k;
            Real best = A(perm[k], perm[k]);
            for (size_t i = k + 1; i < d; ++i)
                if (A(perm[i], perm[i]) > best) { best = A(perm[i], perm[i]); piv = i; }
            if (best < -thresh) { psd_ok = false; break; }
            if (best <= thresh) break;
            std::swap(perm[k], perm[piv]);
            Real lkk = mp::sqrt(best);
            Lf(perm[k], k) = lkk;
            for (size_t i = k + 1; i < d; ++i) {
                Real v = A(perm[i], perm[k]);
                for (size_t j = 0; j < k; ++j) v -= Lf(perm[i], j) * Lf(perm[k], j);
                Lf(perm[i], k) = v / lkk;
            }
            for (size_t i = k + 1; i < d; ++i) {
                Real lik = Lf(perm[i], k);
                A(perm[i], perm[i]) -= lik * lik;
                if (A(perm[i], perm[i]) < -thresh) { psd_ok = false; }
            }
            rank = k + 1;
        }
        if (psd_ok) {
            // confirm the decomposition reproduces G; an indefinite matrix
            // can slip through pivoting (e.g. negative block behind a zero
            // diagonal), in which case the eigensolver takes over
            for (size_t i = 0; i < d && psd_ok; ++i)
                for (size_t j = 0; j <= i && psd_ok; ++j) {
                    Real acc(0);
                    for (size_t k2 = 0; k2 < rank; ++k2) acc += Lf(i, k2) * Lf(j, k2);
                    if (mp::abs(acc - (*G)(i, j)) > thresh * 10) psd_ok = false;
                }
        }
        if (psd_ok) {
            tight = std::make_unique<RMat>(d, rank);
            signs.assign(rank, 1);
            for (size_t col = 0; col < rank; ++col) {
                // solve L^T y = e_col on the pivot rows; the ON vector is
                // supported on those rows
                std::vector<Real> y(rank);
                for (size_t i = rank; i-- > 0;) {
                    Real v = (i == col) ? Real(1) : Real(0);
                    for (size_t j = i + 1; j < rank; ++j) v -= Lf(perm[j], i) * y[j];
                    y[i] = v / Lf(perm[i], i);
                }
                for (size_t i = 0; i < rank; ++i) (*tight)(perm[i], col) = y[i];
            }
        }
    }
    if (!psd_ok) {
        std::vector<Real> ev;
        RMat V;
        jacobi_eigensymm(*G, ev, V);
        Real emax(0);
        for (const auto& e : ev) emax = std::max(emax, mp::abs(e));
        Real ethresh = emax * Real("1e-25");
        auto wide = std::make_unique<RMat>(d, d);
        signs.clear();
        rank = 0;
        for (size_t j = 0; j < d; ++j) {
            if (mp::abs(ev[j]) <= ethresh) continue;
            Real scale = 1 / mp::sqrt(mp::abs(ev[j]));
            for (size_t i = 0; i < d; ++i) (*wide)(i, rank) = V(i, j) * scale;
            signs.push_back(ev[j] > 0 ? 1 : -1);
            ++rank;
        }
        tight = std::make_unique<RMat>(d, rank);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < rank; ++j) (*tight)(i, j) = wide->a[i * d + j];
    }

    std::scoped_lock lock(mu_);
    if (!gram_[n]) {
        gram_[n] = std::move(G);
        on_[n] = std::move(tight);
        signs_[n] = std::move(signs);
    }
}

int TruncatedModule::dim(int n) const {
    build_level(n);
    return static_cast<int>(on_[n]->cols);
}

int TruncatedModule::dim_up_to(int n) const {
    int s = 0;
    for (int k = 0; k <= n; ++k) s += dim(k);
    return s;
}

const RMat& TruncatedModule::on_basis(int n) const {
    build_level(n);
    return *on_[n];
}

const std::vector<int>& TruncatedModule::on_signs(int n) const {
    build_level(n);
    return signs_[n];
}

Cplx TruncatedModule::pairing(const VState& u, const VState& v) const {
    Cplx acc(0);
    for (const auto& [lvl, cu] : u.comp) {
        auto it = v.comp.find(lvl);
        if (it == v.comp.end()) continue;
        const RMat& G = gram(lvl);
        const auto& cv = it->second;
        for (size_t a = 0; a < cu.size(); ++a) {
            if (norm(cu[a]) == 0) continue;
            for (size_t b = 0; b < cv.size(); ++b)
                acc += cu[a] * cv[b] * Cplx(G(a, b));
        }
    }
    return acc;
}

Cplx TruncatedModule::twisted_pairing(const VState& u, const VState& v) const {
    Cplx acc(0);
    for (const auto& [lvl, cu] : u.comp) {
        auto it = v.comp.find(lvl);
        if (it == v.comp.end()) continue;
        const RMat& G = gram(lvl);
        const auto& cv = it->second;
        Cplx sign((lvl % 2 == 0) ? Real(1) : Real(-1));
        for (size_t a = 0; a < cu.size(); ++a) {
            if (norm(cu[a]) == 0) continue;
            for (size_t b = 0; b < cv.size(); ++b)
                acc += sign * cu[a] * cv[b] * Cplx(G(a, b));
        }
    }
    return acc;
}

VState TruncatedModule::on_state(int n, int alpha) const {
    const RMat& U = on_basis(n);
    VState v;
    for (size_t i = 0; i < U.rows; ++i)
        if (U(i, static_cast<size_t>(alpha)) != 0)
            v.add(n, i, Cplx(U(i, static_cast<size_t>(alpha))));
    return v;
}

Cplx TruncatedModule::graded_character(const Cplx& nome) const {
    Cplx expo = Cplx(h_real_ - c_real_ / 24);
    Cplx acc(0);
    Cplx qn(Real(1));
    for (int n = 0; n <= max_level_; ++n) {
        acc += Cplx(Real(dim(n))) * qn;
        qn *= nome;
    }
    return pow(nome, expo) * acc;
}

std::shared_ptr<const TruncatedModule> module_registry(const Rational& c,
                                                       const Rational& h, int max_level) {
    static std::mutex mu;
    static std::map<std::tuple<Rational, Rational, int>,
                    std::shared_ptr<const TruncatedModule>>
        registry;
    std::scoped_lock lock(mu);
    auto key = std::make_tuple(c, h, max_level);
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    auto ptr = std::make_shared<const TruncatedModule>(c, h, max_level);
    registry.emplace(key, ptr);
    return ptr;
}

std::shared_ptr<const TruncatedModule> module_registry(const MinimalModel& m,
                                                       KacLabel label, int max_level) {
    return module_registry(m.central_charge(), m.conformal_weight(label), max_level);
}

int irreducible_graded_dim(int p, int q, KacLabel label, int n) {
    // Level-n dimension from the alternating embedding-diagram sum:
    // dim(n) = sum_k [ P(n - A_k) - P(n - B_k) ],
    // A_k = ((2pqk + qr - ps)^2 - (qr - ps)^2) / (4pq),
    // B_k = ((2pqk + qr + ps)^2 - (qr - ps)^2) / (4pq).
    static std::vector<long long> P{1};
    if (static_cast<int>(P.size()) <= n) {
        // extend partition numbers via Euler's pentagonal recurrence
        for (int m = static_cast<int>(P.size()); m <= n; ++m) {
            long long acc = 0;
            for (int k = 1;; ++k) {
                long long g1 = static_cast<long long>(k) * (3 * k - 1) / 2;
                long long g2 = static_cast<long long>(k) * (3 * k + 1) / 2;
                if (g1 > m && g2 > m) break;
                long long sgn = (k % 2) ? 1 : -1;
                if (g1 <= m) acc += sgn * P[m - g1];
                if (g2 <= m) acc += sgn * P[m - g2];
            }
            P.push_back(acc);
        }
    }
    auto part = [&](long long x) -> long long {
        if (x < 0) return 0;
        return P[static_cast<size_t>(x)];
    };
    long long base = static_cast<long long>(q) * label.r - static_cast<long long>(p) * label.s;
    long long acc = 0;
    for (long long k = -n - 2; k <= n + 2; ++k) {
        long long u = 2LL * p * q * k + base;
        long long A4 = u * u - base * base; // divisible by 4pq
        long long v = 2LL * p * q * k + static_cast<long long>(q) * label.r +
                      static_cast<long long>(p) * label.s;
        long long B4 = v * v - base * base;
        long long A = A4 / (4LL * p * q), B = B4 / (4LL * p * q);
        if (A4 % (4LL * p * q) == 0) acc += part(n - A);
        if (B4 % (4LL * p * q) == 0) acc -= part(n - B);
    }
    return static_cast<int>(acc);
}

CoordMapOperator::CoordMapOperator(std::vector<Cplx> series, int max_level)
    : max_level_(max_level) {
    if (series.empty() || norm(series[0]) == 0)
        throw std::invalid_argument("CoordMapOperator: a1 must be nonzero");
    a1_ = series[0];

    // Normalize to ghat(w) = G(w/a1) = w + c2 w^2 + ..., then peel the flows
    // phi_k = exp(eps_k z^k d/dz) with the lowest order outermost:
    //   ghat = phi_2 o phi_3 o phi_4 o ... ,
    // so that (Gamma being a homomorphism of coordinate changes)
    //   Gamma_G = exp(eps_2 L_1) exp(eps_3 L_2) ... a1^{L0},
    // matching the second-order expansion (1 + (a2/a1^2) L1 + ...) a1^{L0}.
    size_t order = static_cast<size_t>(max_level_) + 2;
    Series g(order);
    Cplx apow(Real(1));
    for (size_t k = 1; k < order; ++k) {
        apow /= a1_;
        if (k <= series.size()) g[k] = series[k - 1] * apow; // a_k / a1^k
    }
    eps_.assign(order, Cplx(0));
    for (size_t k = 2; k < order; ++k) {
        Cplx e = g[k];
        eps_[k - 1] = e; // multiplies L_{k-1}
        if (norm(e) == 0) continue;
        // remove the outer flow: g <- phi_{-e} o g, with
        // phi_{-e}(u) = u (1 + (k-1) e u^{k-1})^{-1/(k-1)}
        Series base = Series::constant(Cplx(Real(1)), order);
        if (k - 1 < order) base[k - 1] = Cplx(Real(static_cast<int>(k - 1))) * e;
        Series factor = pow(base, Cplx(Real(-1) / Real(static_cast<int>(k - 1))));
        Series flow(order);
        for (size_t m = 0; m + 1 < order; ++m) flow[m + 1] = factor[m];
        g = compose(flow, g);
    }
}

VState CoordMapOperator::apply(const TruncatedModule& mod, const VState& v) const {
    // Gamma = exp(eps_1 L_1) exp(eps_2 L_2) ... reading left to right, applied
    // to a1^{L0} v from the highest mode down.
    VState cur;
    for (const auto& [lvl, coeffs] : v.comp) {
        Cplx scale = pow(a1_, Cplx(mod.h_real() + lvl));
        for (size_t w = 0; w < coeffs.size(); ++w)
            if (norm(coeffs[w]) != 0) cur.add(lvl, w, coeffs[w] * scale);
    }
    int kmax = std::min(max_level_, static_cast<int>(eps_.size()) - 1);
    for (int k = kmax; k >= 1; --k) {
        const Cplx& e = eps_[k];
        if (norm(e) == 0) continue;
        // exp(e L_k) via nilpotency of L_k on the truncation
        VState acc = cur;
        VState term = cur;
        Cplx fact(Real(1));
        for (int it = 1; it * k <= mod.max_level(); ++it) {
            term = mod.apply_mode(k, term);
            if (term.empty()) break;
            fact *= e / Cplx(Real(it));
            for (const auto& [lvl, coeffs] : term.comp)
                for (size_t w = 0; w < coeffs.size(); ++w)
                    if (norm(coeffs[w]) != 0) acc.add(lvl, w, coeffs[w] * fact);
        }
        cur = std::move(acc);
        cur.prune();
    }
    return cur;
}

} // namespace cftlat
