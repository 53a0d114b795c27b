#include "cftlat/fsymbols.hpp"

#include "cftlat/gamma.hpp"
#include "cftlat/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace cftlat {

namespace {

constexpr const char* kCacheEnv = "CFTLAT_CACHE_DIR";

// Seed crossing matrix for <a(inf) i(1) f(x) c(0)> with f = (1,2) in M(p,q).
// Momentum bookkeeping is exact rational throughout: with t = p/q,
//   C     = 1 + r_c - s_c t
//   A     = ((1 + r_i + r_c + r_a) - t (s_i + s_c + s_a)) / 2
//   B     = ((1 + r_i + r_c - r_a) - t (s_i + s_c - s_a)) / 2
// and the entry for internal (b,k) is the classical 2F1 connection
// coefficient picked by the sign eps with lambda_c + eps*beta/2 in the class
// of b (rows) and likewise eps' for k against i (columns).
struct SeedParams {
    Rational A, B, C;
};

int momentum_shift_sign(int p, int q, KacLabel base, KacLabel target) {
    // Find eps in {+1,-1} with (r_base - s_base t) + eps t = +-(r_t - s_t t).
    Rational t(p, q);
    Rational mb = base.r - base.s * t;
    Rational mt = target.r - target.s * t;
    for (int eps : {1, -1}) {
        Rational shifted = mb + eps * t;
        if (shifted == mt || shifted == -mt) return eps;
    }
    return 0;
}

Real seed_entry(const SeedParams& sp, int eps_row, int eps_col) {
    const Rational &A = sp.A, &B = sp.B, &C = sp.C;
    Rational n1, n2, d1, d2;
    if (eps_row > 0 && eps_col > 0) {
        n1 = C; n2 = C - A - B; d1 = C - A; d2 = C - B;
    } else if (eps_row > 0 && eps_col < 0) {
        n1 = C; n2 = A + B - C; d1 = A; d2 = B;
    } else if (eps_row < 0 && eps_col > 0) {
        n1 = 2 - C; n2 = C - A - B; d1 = 1 - A; d2 = 1 - B;
    } else {
        n1 = 2 - C; n2 = A + B - C; d1 = A - C + 1; d2 = B - C + 1;
    }
    return gamma_rational(n1) * gamma_rational(n2) * rec_gamma_rational(d1) *
           rec_gamma_rational(d2);
}

} // namespace

CacheStats& cache_stats() {
    static CacheStats stats;
    return stats;
}

std::filesystem::path cache_dir() {
    if (const char* env = std::getenv(kCacheEnv)) return env;
    return "cftlat-cache";
}

FSymbols::FSymbols(MinimalModel model) : model_(std::move(model)) { bootstrap(); }

FKey FSymbols::make_key(KacLabel b, KacLabel k, KacLabel a, KacLabel c, KacLabel i,
                        KacLabel j) const {
    FKey key{};
    key.v[0] = static_cast<uint8_t>(model_.index_of(b));
    key.v[1] = static_cast<uint8_t>(model_.index_of(k));
    key.v[2] = static_cast<uint8_t>(model_.index_of(a));
    key.v[3] = static_cast<uint8_t>(model_.index_of(c));
    key.v[4] = static_cast<uint8_t>(model_.index_of(i));
    key.v[5] = static_cast<uint8_t>(model_.index_of(j));
    return key;
}

bool FSymbols::admissible(KacLabel b, KacLabel k, KacLabel a, KacLabel c, KacLabel i,
                          KacLabel j) const {
    return model_.fusion_coeff(a, b, i) && model_.fusion_coeff(b, c, j) &&
           model_.fusion_coeff(a, c, k) && model_.fusion_coeff(i, j, k);
}

Real FSymbols::f(KacLabel b, KacLabel k, KacLabel a, KacLabel c, KacLabel i,
                 KacLabel j) const {
    if (!admissible(b, k, a, c, i, j)) return Real(0);
    auto it = table_.find(make_key(b, k, a, c, i, j));
    if (it == table_.end())
        throw std::logic_error("FSymbols: admissible entry missing from table");
    return it->second;
}

Real FSymbols::seed_crossing(KacLabel a, KacLabel i, KacLabel j, KacLabel c,
                             KacLabel b, KacLabel k) const {
    return degenerate_crossing(model_, a, i, j, c, b, k);
}

Real degenerate_crossing(const MinimalModel& m, KacLabel a, KacLabel i, KacLabel j,
                         KacLabel c, KacLabel b, KacLabel k) {
    // F_{bk}[a c; i j] is the inverse-transposed crossing of the block family
    // <a(inf) i(1) j(x) c(0)>, which equals the direct crossing of the family
    // with the 1- and 0-insertions swapped: rows follow the k-channel (shift
    // of i), columns the b-channel (shift of c).
    const int p = m.p(), q = m.q();
    KacLabel f{1, 2}, g{2, 1};
    j = m.canonical(j);
    if (j == m.canonical(f)) {
        SeedParams sp;
        KacLabel ca = m.canonical(a), ci = m.canonical(i), cc = m.canonical(c);
        Rational t(p, q);
        sp.C = 1 + ci.r - ci.s * t;
        sp.A = Rational((1 + ci.r + cc.r + ca.r)) - t * (ci.s + cc.s + ca.s);
        sp.A /= 2;
        sp.B = Rational((1 + ci.r + cc.r - ca.r)) - t * (ci.s + cc.s - ca.s);
        sp.B /= 2;
        int er = momentum_shift_sign(p, q, ci, m.canonical(k));
        int ec = momentum_shift_sign(p, q, cc, m.canonical(b));
        if (er == 0 || ec == 0) return Real(0);
        return seed_entry(sp, er, ec);
    }
    if (j == m.canonical(g)) {
        // Transposed model: M(q,p) with all Kac labels transposed.
        MinimalModel tm(q, p);
        auto tr = [&](KacLabel l) { return tm.canonical({l.s, l.r}); };
        return degenerate_crossing(tm, tr(a), tr(i), tr(j), tr(c), tr(b), tr(k));
    }
    throw std::invalid_argument("degenerate_crossing: j must be (1,2) or (2,1)");
}

void FSymbols::insert_checked(const FKey& key, const Real& value) {
    auto [it, inserted] = table_.emplace(key, value);
    if (!inserted) {
        Real diff = mp::abs(it->second - value);
        if (diff > real_eps_loose() * (1 + mp::abs(it->second))) {
            std::string msg = "FSymbols: inconsistent recomputation of F";
            const char* slot = "bkacij";
            for (int n = 0; n < 6; ++n)
                msg += std::string(" ") + slot[n] + "=" + to_string(model_.label_at(key.v[n]));
            msg += " old=" + std::to_string(to_double(it->second)) +
                   " new=" + std::to_string(to_double(value));
            throw std::logic_error(msg);
        }
    }
}

void FSymbols::bootstrap() {
    const auto& L = model_.labels();
    KacLabel f = model_.canonical({1, 2});
    KacLabel g = model_.canonical({2, 1});
    auto N = [&](KacLabel x, KacLabel y, KacLabel z) { return model_.fusion_coeff(x, y, z); };

    // Identity-slot entries are exactly 1.
    for (const auto& a : L)
        for (const auto& c : L)
            for (const auto& j : L) {
                if (N(a, c, j)) {
                    // F_{a j}[a c; 1 j] = 1
                    insert_checked(make_key(a, j, a, c, model_.vacuum(), j), Real(1));
                    // F_{c j... mirrored i-slot: F_{c i}[a c; i 1] = 1
                    insert_checked(make_key(c, j, a, c, j, model_.vacuum()), Real(1));
                }
            }

    // Seeds: bottom-right slot degenerate, plus the reflected orientation.
    for (KacLabel j : {f, g}) {
        for (const auto& a : L)
            for (const auto& c : L)
                for (const auto& i : L)
                    for (const auto& b : L) {
                        if (!(N(a, b, i) && N(b, c, j))) continue;
                        for (const auto& k : L) {
                            if (!(N(a, c, k) && N(i, j, k))) continue;
                            Real v = seed_crossing(a, i, j, c, b, k);
                            insert_checked(make_key(b, k, a, c, i, j), v);
                            insert_checked(make_key(b, k, c, a, j, i), v);
                        }
                    }
    }

    // Pentagon propagation outward from {1, f, g}. With k = mu degenerate and
    // bottom-right l already complete, the pentagon instances
    //   sum_p F_{dp}[c a; mu l] F_{ci}[b a; j p] F_{pq}[i l; j mu]
    //       = F_{cq}[b d; j mu] F_{di}[b a; q l]
    // are linear in the unknowns F_{ci}[b a; j p], p in mu x l.
    std::set<KacLabel> done{model_.vacuum(), f, g};
    auto lookup = [&](KacLabel b, KacLabel k, KacLabel a, KacLabel c, KacLabel i,
                      KacLabel j) -> Real {
        if (!admissible(b, k, a, c, i, j)) return Real(0);
        auto it = table_.find(make_key(b, k, a, c, i, j));
        if (it == table_.end()) throw std::logic_error("FSymbols bootstrap: missing known");
        return it->second;
    };

    while (done.size() < L.size()) {
        bool progressed = false;
        std::set<KacLabel> done_snapshot = done;
        for (KacLabel l : done_snapshot) {
            for (KacLabel mu : {f, g}) {
                auto targets = model_.fusion_product(mu, l);
                bool all_done = std::all_of(targets.begin(), targets.end(),
                                            [&](KacLabel x) { return done.count(x) > 0; });
                if (all_done) continue;

                for (const auto& b : L)
                    for (const auto& a : L)
                        for (const auto& i : L) {
                            if (!N(b, a, i)) continue;
                            for (const auto& c : L)
                                for (const auto& j : L) {
                                    if (!N(b, c, j)) continue;
                                    std::vector<KacLabel> unknowns, knowns;
                                    for (const auto& pl : targets) {
                                        if (!(N(c, a, pl) && N(j, pl, i))) continue;
                                        if (table_.count(make_key(c, i, b, a, j, pl)))
                                            knowns.push_back(pl);
                                        else
                                            unknowns.push_back(pl);
                                    }
                                    if (unknowns.empty()) continue;

                                    std::vector<std::vector<Real>> rows;
                                    std::vector<Real> rhs;
                                    for (const auto& d : L) {
                                        if (!(N(c, d, mu) && N(d, a, l))) continue;
                                        for (const auto& qq : L) {
                                            if (!(N(b, d, qq) && N(j, mu, qq) && N(qq, l, i)))
                                                continue;
                                            std::vector<Real> row(unknowns.size());
                                            bool nontrivial = false;
                                            for (size_t u = 0; u < unknowns.size(); ++u) {
                                                row[u] = lookup(d, unknowns[u], c, a, mu, l) *
                                                         lookup(unknowns[u], qq, i, l, j, mu);
                                                if (mp::abs(row[u]) > 0) nontrivial = true;
                                            }
                                            if (!nontrivial) continue;
                                            Real r = lookup(c, qq, b, d, j, mu) *
                                                     lookup(d, i, b, a, qq, l);
                                            for (const auto& pk : knowns)
                                                r -= lookup(d, pk, c, a, mu, l) *
                                                     lookup(pk, qq, i, l, j, mu) *
                                                     table_.at(make_key(c, i, b, a, j, pk));
                                            rows.push_back(std::move(row));
                                            rhs.push_back(r);
                                        }
                                    }
                                    if (rows.size() < unknowns.size()) continue;

                                    // normal equations with explicit rank guard;
                                    // the systems are 1x1 or 2x2 and well scaled
                                    const size_t nu = unknowns.size();
                                    RMat G(nu, nu);
                                    std::vector<Real> gb(nu);
                                    for (size_t u = 0; u < nu; ++u) {
                                        for (size_t v = 0; v < nu; ++v)
                                            for (size_t r = 0; r < rows.size(); ++r)
                                                G(u, v) += rows[r][u] * rows[r][v];
                                        for (size_t r = 0; r < rows.size(); ++r)
                                            gb[u] += rows[r][u] * rhs[r];
                                    }
                                    Real rank_tol = Real("1e-50");
                                    std::vector<Real> sol(nu);
                                    if (nu == 1) {
                                        if (G(0, 0) < rank_tol) continue;
                                        sol[0] = gb[0] / G(0, 0);
                                    } else if (nu == 2) {
                                        Real det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
                                        if (mp::abs(det) <
                                            rank_tol * (1 + G(0, 0)) * (1 + G(1, 1)))
                                            continue;
                                        sol[0] = (gb[0] * G(1, 1) - gb[1] * G(0, 1)) / det;
                                        sol[1] = (gb[1] * G(0, 0) - gb[0] * G(1, 0)) / det;
                                    } else {
                                        continue; // fusion multiplicity-free: cannot happen
                                    }
                                    Real resid(0), scale(0);
                                    for (size_t r = 0; r < rows.size(); ++r) {
                                        Real acc(0);
                                        for (size_t u = 0; u < nu; ++u)
                                            acc += rows[r][u] * sol[u];
                                        resid = std::max(resid, mp::abs(acc - rhs[r]));
                                        scale = std::max(scale, mp::abs(rhs[r]));
                                    }
                                    if (resid > real_eps_loose() * (1 + scale)) continue;
                                    for (size_t u = 0; u < nu; ++u)
                                        insert_checked(make_key(c, i, b, a, j, unknowns[u]),
                                                       sol[u]);
                                }
                        }

                for (const auto& tgt : targets) done.insert(tgt);
                progressed = true;
            }
        }
        if (!progressed)
            throw std::logic_error("FSymbols bootstrap: no progress; label set not reachable");
    }

    // Completeness: every admissible tuple must now be present.
    for (const auto& b : L)
        for (const auto& k : L)
            for (const auto& a : L)
                for (const auto& c : L)
                    for (const auto& i : L)
                        for (const auto& j : L)
                            if (admissible(b, k, a, c, i, j) &&
                                table_.find(make_key(b, k, a, c, i, j)) == table_.end())
                                throw std::logic_error("FSymbols bootstrap: incomplete table");
}

Real FSymbols::pentagon_residual() const {
    // sum_p F_{dp}[c a; k l] F_{ci}[b a; j p] F_{pq}[i l; j k]
    //   = F_{cq}[b d; j k] F_{di}[b a; q l]
    const auto& L = model_.labels();
    auto N = [&](KacLabel x, KacLabel y, KacLabel z) { return model_.fusion_coeff(x, y, z); };
    Real worst(0);
    for (const auto& b : L)
        for (const auto& a : L)
            for (const auto& i : L) {
                if (!N(b, a, i)) continue;
                for (const auto& c : L)
                    for (const auto& j : L) {
                        if (!N(b, c, j)) continue;
                        for (const auto& d : L)
                            for (const auto& k : L) {
                                if (!N(c, d, k)) continue;
                                for (const auto& l : L) {
                                    if (!N(d, a, l)) continue;
                                    for (const auto& q : L) {
                                        if (!(N(b, d, q) && N(j, k, q) && N(q, l, i)))
                                            continue;
                                        Real lhs(0);
                                        for (const auto& pp : L) {
                                            if (!(N(k, l, pp) && N(c, a, pp) && N(j, pp, i)))
                                                continue;
                                            lhs += f(d, pp, c, a, k, l) *
                                                   f(c, i, b, a, j, pp) *
                                                   f(pp, q, i, l, j, k);
                                        }
                                        Real rhs = f(c, q, b, d, j, k) * f(d, i, b, a, q, l);
                                        worst = std::max(worst, mp::abs(lhs - rhs));
                                    }
                                }
                            }
                    }
            }
    return worst;
}

Real FSymbols::s_relation_residual() const {
    Real worst(0);
    KacLabel one = model_.vacuum();
    for (const auto& a : model_.labels())
        for (const auto& b : model_.labels())
            for (const auto& i : model_.labels()) {
                if (!model_.fusion_coeff(a, b, i)) continue;
                Real lhs = f(b, one, a, a, i, i) * model_.s_matrix(a, one);
                Real rhs = f(a, one, b, b, i, i) * model_.s_matrix(b, one);
                worst = std::max(worst, mp::abs(lhs - rhs));
            }
    return worst;
}

Real FSymbols::triple_identity_residual() const {
    // F_{bk}[c a; j i] F_{c1}[a a; k k] = F_{ci}[a b; k j] F_{b1}[a a; i i]
    Real worst(0);
    KacLabel one = model_.vacuum();
    const auto& L = model_.labels();
    for (const auto& a : L)
        for (const auto& b : L)
            for (const auto& c : L)
                for (const auto& i : L)
                    for (const auto& j : L)
                        for (const auto& k : L) {
                            if (!admissible(b, k, c, a, j, i)) continue;
                            Real lhs = f(b, k, c, a, j, i) * f(c, one, a, a, k, k);
                            Real rhs = f(c, i, a, b, k, j) * f(b, one, a, a, i, i);
                            worst = std::max(worst, mp::abs(lhs - rhs));
                        }
    return worst;
}

void FSymbols::save(const std::filesystem::path& file) const {
    if (!file.parent_path().empty()) std::filesystem::create_directories(file.parent_path());
    std::map<std::array<int, 12>, Real> sorted;
    for (const auto& [key, val] : table_) {
        std::array<int, 12> k{};
        for (int n = 0; n < 6; ++n) {
            KacLabel l = model_.label_at(key.v[n]);
            k[2 * n] = l.r;
            k[2 * n + 1] = l.s;
        }
        sorted.emplace(k, val);
    }
    std::ofstream out(file);
    if (!out) throw std::runtime_error("FSymbols::save: cannot open " + file.string());
    out << std::setprecision(static_cast<int>(kPrecisionDigits) + 6);
    for (const auto& [k, val] : sorted) {
        out << model_.p() << ' ' << model_.q();
        for (int n = 0; n < 12; ++n) out << ' ' << k[n];
        out << ' ' << val << ' ' << kPrecisionDigits << '\n';
    }
}

std::optional<FSymbols> FSymbols::load(const MinimalModel& model,
                                       const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    FSymbols fs(model, LoadTag{});
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        int p, q, lv[12];
        unsigned prec;
        std::string sval;
        ss >> p >> q;
        for (int n = 0; n < 12; ++n) ss >> lv[n];
        ss >> sval >> prec;
        if (!ss || p != model.p() || q != model.q() || prec != kPrecisionDigits)
            return std::nullopt;
        // field order is (b,k,a,c,i,j), each label as an (r,s) pair
        FKey key = fs.make_key({lv[0], lv[1]}, {lv[2], lv[3]}, {lv[4], lv[5]}, {lv[6], lv[7]},
                               {lv[8], lv[9]}, {lv[10], lv[11]});
        fs.table_[key] = Real(sval);
    }
    // completeness check: recompute expected admissible count
    size_t expected = 0;
    const auto& L = model.labels();
    for (const auto& b : L)
        for (const auto& k : L)
            for (const auto& a : L)
                for (const auto& c : L)
                    for (const auto& i : L)
                        for (const auto& j : L)
                            if (fs.admissible(b, k, a, c, i, j)) ++expected;
    if (fs.table_.size() != expected) return std::nullopt;
    return fs;
}

std::shared_ptr<const FSymbols> FSymbols::cached(const MinimalModel& model) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const FSymbols>> registry;
    std::scoped_lock lock(mu);
    auto key = std::make_pair(model.p(), model.q());
    if (auto it = registry.find(key); it != registry.end()) return it->second;

    std::filesystem::path file = cache_dir() / ("f_p" + std::to_string(model.p()) + "_q" +
                                                std::to_string(model.q()) + "_prec" +
                                                std::to_string(kPrecisionDigits) + ".txt");
    std::shared_ptr<const FSymbols> fs;
    if (auto loaded = load(model, file)) {
        fs = std::make_shared<FSymbols>(std::move(*loaded));
        ++cache_stats().f_hits;
    } else {
        fs = std::make_shared<FSymbols>(model);
        fs->save(file);
        ++cache_stats().f_misses;
    }
    registry.emplace(key, fs);
    return fs;
}

} // namespace cftlat
