#include "cftlat/minimal_model.hpp"

#include <algorithm>
#include <numeric>

namespace cftlat {

std::string to_string(const KacLabel& l) {
    return "(" + std::to_string(l.r) + "," + std::to_string(l.s) + ")";
}

MinimalModel::MinimalModel(int p, int q) : p_(p), q_(q) {
    if (p < 3 || q < 3) throw std::invalid_argument("MinimalModel: p,q >= 3 required");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("MinimalModel: p,q must be coprime");
    for (int r = 1; r <= p - 1; ++r)
        for (int s = 1; s <= q - 1; ++s) {
            KacLabel l{r, s};
            if (canonical(l) == l) labels_.push_back(l);
        }
    std::sort(labels_.begin(), labels_.end());
    if (labels_.size() != static_cast<size_t>((p - 1) * (q - 1) / 2))
        throw std::logic_error("MinimalModel: label count mismatch");
}

KacLabel MinimalModel::canonical(KacLabel l) const {
    if (!in_kac_table(l)) throw std::out_of_range("KacLabel outside Kac table");
    KacLabel m{p_ - l.r, q_ - l.s};
    if (m.r < l.r || (m.r == l.r && m.s < l.s)) return m;
    return l;
}

bool MinimalModel::in_kac_table(KacLabel l) const {
    return l.r >= 1 && l.r <= p_ - 1 && l.s >= 1 && l.s <= q_ - 1;
}

size_t MinimalModel::index_of(KacLabel l) const {
    KacLabel c = canonical(l);
    auto it = std::lower_bound(labels_.begin(), labels_.end(), c);
    return static_cast<size_t>(it - labels_.begin());
}

Rational MinimalModel::central_charge() const {
    // c = 1 - 6 (1-t)^2 / t, t = p/q
    Rational t(p_, q_);
    return 1 - 6 * (1 - t) * (1 - t) / t;
}

Rational MinimalModel::conformal_weight(KacLabel l) const {
    l = canonical(l);
    Rational t(p_, q_);
    Rational a = l.r - l.s * t;
    Rational b = 1 - t;
    return (a * a - b * b) / (4 * t);
}

int MinimalModel::fusion_coeff(KacLabel i, KacLabel j, KacLabel k) const {
    i = canonical(i);
    j = canonical(j);
    k = canonical(k);
    // BPZ fusion: doubly truncated su(2)-type ranges in both Kac indices.
    auto admissible = [](int a, int b, int c, int bound) {
        if ((a + b + c) % 2 == 0) return false; // a+b+c odd in each index
        if (c < std::abs(a - b) + 1 || c > a + b - 1) return false;
        if (a + b + c > 2 * bound - 1) return false;
        return true;
    };
    bool direct = admissible(i.r, j.r, k.r, p_) && admissible(i.s, j.s, k.s, q_);
    if (direct) return 1;
    KacLabel km{p_ - k.r, q_ - k.s};
    if (admissible(i.r, j.r, km.r, p_) && admissible(i.s, j.s, km.s, q_)) return 1;
    return 0;
}

std::vector<KacLabel> MinimalModel::fusion_product(KacLabel i, KacLabel j) const {
    std::vector<KacLabel> out;
    for (const auto& k : labels_)
        if (fusion_coeff(i, j, k)) out.push_back(k);
    return out;
}

bool MinimalModel::fusion_closed(const std::vector<KacLabel>& set) const {
    auto contains = [&](KacLabel l) {
        l = canonical(l);
        return std::find_if(set.begin(), set.end(), [&](KacLabel m) {
                   return canonical(m) == l;
               }) != set.end();
    };
    for (const auto& i : set)
        for (const auto& j : set)
            for (const auto& k : fusion_product(i, j))
                if (!contains(k)) return false;
    return true;
}

Real MinimalModel::s_matrix(KacLabel i, KacLabel j) const {
    i = canonical(i);
    j = canonical(j);
    // S_{(r,s),(x,y)} = sqrt(8/pq) (-1)^{1+ry+sx} sin(pi r x / t) sin(pi s y t)
    Real pi = real_pi();
    Real t = Real(p_) / Real(q_);
    int sign = ((1 + i.r * j.s + i.s * j.r) % 2 == 0) ? 1 : -1;
    return mp::sqrt(Real(8) / (Real(p_) * Real(q_))) * sign *
           mp::sin(pi * i.r * j.r / t) * mp::sin(pi * i.s * j.s * t);
}

Real MinimalModel::quantum_dim(KacLabel a) const {
    return s_matrix(a, vacuum()) / s_matrix(vacuum(), vacuum());
}

Real MinimalModel::global_dim(const std::vector<KacLabel>& set) const {
    Real acc(0);
    for (const auto& a : set) {
        Real d = quantum_dim(a);
        acc += d * d;
    }
    return acc;
}

std::vector<KacLabel> label_set_all(const MinimalModel& m) { return m.labels(); }

std::vector<KacLabel> label_set_first_row(const MinimalModel& m) {
    std::vector<KacLabel> out;
    for (int s = 1; s <= m.q() - 1; ++s) out.push_back(m.canonical({1, s}));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<KacLabel> label_set_z2(const MinimalModel& m) {
    return {m.vacuum(), m.canonical({1, m.q() - 1})};
}

} // namespace cftlat
