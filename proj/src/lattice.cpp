#include "cftlat/lattice.hpp"

#include "cftlat/anomaly.hpp"
#include "cftlat/blocks.hpp"

#include <cmath>
#include <stdexcept>

namespace cftlat {

LatticeSpec::LatticeSpec(int M, int N) : m_(M), n_(N) {
    if (M < 1 || N < 1) throw std::invalid_argument("LatticeSpec: M, N >= 1");
    for (int y = 0; y < n_; ++y)
        for (int x = 0; x < m_; ++x) {
            int up = 2 * (x + m_ * y);
            // U(x,y) - D(x,y): shared edge {(x+1,y),(x,y+1)}
            edges_.push_back({up, up + 1, site(x + 1, y), site(x, y + 1), 0, 0});
            // U(x,y) - D(x-1,y): shared edge {(x,y),(x,y+1)}
            int dxm = 2 * (((x - 1 + m_) % m_) + m_ * y) + 1;
            edges_.push_back({up, dxm, site(x, y), site(x, y + 1), (x == 0) ? -1 : 0, 0});
            // U(x,y) - D(x,y-1): shared edge {(x,y),(x+1,y)}
            int dym = 2 * (x + m_ * (((y - 1 + n_) % n_) % n_)) + 1;
            edges_.push_back({up, dym, site(x, y), site(x + 1, y), 0, (y == 0) ? -1 : 0});
        }
}

std::array<int, 3> LatticeSpec::face_sites(int t) const {
    int cell = t / 2;
    int x = cell % m_, y = cell / m_;
    if (t % 2 == 0) return {site(x, y), site(x + 1, y), site(x, y + 1)};
    return {site(x + 1, y), site(x + 1, y + 1), site(x, y + 1)};
}

double lattice_partition_brute(const LatticeSpec& lat, int n_heights,
                               const std::function<double(int, int, int)>& weight) {
    int sites = lat.n_sites();
    double total = 0;
    std::vector<int> phi(static_cast<size_t>(sites), 0);
    // precompute face site lists
    std::vector<std::array<int, 3>> faces;
    for (int t = 0; t < lat.n_triangles(); ++t) faces.push_back(lat.face_sites(t));
    uint64_t count = 1;
    for (int s = 0; s < sites; ++s) {
        count *= static_cast<uint64_t>(n_heights);
        if (count > (1ull << 34))
            throw std::overflow_error(
                "lattice_partition_brute: configuration space too large; "
                "use the transfer-matrix route");
    }
    for (uint64_t code = 0; code < count; ++code) {
        uint64_t c = code;
        for (int s = 0; s < sites; ++s) {
            phi[static_cast<size_t>(s)] = static_cast<int>(c % n_heights);
            c /= n_heights;
        }
        double w = 1;
        for (const auto& f : faces) {
            w *= weight(phi[f[0]], phi[f[1]], phi[f[2]]);
            if (w == 0) break;
        }
        total += w;
    }
    return total;
}

double lattice_partition_transfer(const LatticeSpec& lat, int n_heights,
                                  const std::function<double(int, int, int)>& weight) {
    // state: heights of one row (M sites); transfer over the N rows
    int M = lat.M(), N = lat.N();
    size_t dim = 1;
    for (int i = 0; i < M; ++i) {
        dim *= static_cast<size_t>(n_heights);
        if (dim > 4096) throw std::overflow_error("transfer matrix too large");
    }
    auto height = [&](size_t code, int x) {
        for (int i = 0; i < x; ++i) code /= static_cast<size_t>(n_heights);
        return static_cast<int>(code % n_heights);
    };
    std::vector<double> T(dim * dim, 0.0);
    for (size_t r0 = 0; r0 < dim; ++r0)
        for (size_t r1 = 0; r1 < dim; ++r1) {
            double w = 1;
            for (int x = 0; x < M; ++x) {
                int xp = (x + 1) % M;
                // up triangle: (x,y), (x+1,y), (x,y+1)
                w *= weight(height(r0, x), height(r0, xp), height(r1, x));
                if (w == 0) break;
                // down triangle: (x+1,y), (x+1,y+1), (x,y+1)
                w *= weight(height(r0, xp), height(r1, xp), height(r1, x));
                if (w == 0) break;
            }
            T[r0 * dim + r1] = w;
        }
    // Z = tr(T^N)
    std::vector<double> P(T), next(dim * dim);
    for (int step = 1; step < N; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t i = 0; i < dim; ++i)
            for (size_t k = 0; k < dim; ++k) {
                double v = P[i * dim + k];
                if (v == 0) continue;
                for (size_t j = 0; j < dim; ++j) next[i * dim + j] += v * T[k * dim + j];
            }
        P.swap(next);
    }
    double tr = 0;
    for (size_t i = 0; i < dim; ++i) tr += P[i * dim + i];
    return tr;
}

std::vector<LoopConfig> enumerate_loops(const LatticeSpec& lat) {
    const auto& edges = lat.hex_edges();
    int V = lat.n_triangles(), E = lat.n_edges();

    // spanning tree by BFS; remaining edges generate the cycle space
    std::vector<std::vector<int>> incident(static_cast<size_t>(V));
    for (int e = 0; e < E; ++e) {
        incident[static_cast<size_t>(edges[e].u)].push_back(e);
        incident[static_cast<size_t>(edges[e].v)].push_back(e);
    }
    std::vector<int> parent_edge(static_cast<size_t>(V), -1);
    std::vector<bool> seen(static_cast<size_t>(V), false);
    std::vector<int> order;
    seen[0] = true;
    order.push_back(0);
    for (size_t head = 0; head < order.size(); ++head) {
        int v = order[head];
        for (int e : incident[static_cast<size_t>(v)]) {
            int w = edges[e].u == v ? edges[e].v : edges[e].u;
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = true;
                parent_edge[static_cast<size_t>(w)] = e;
                order.push_back(w);
            }
        }
    }
    std::vector<int> nontree;
    {
        std::vector<bool> in_tree(static_cast<size_t>(E), false);
        for (int v = 1; v < V; ++v) in_tree[static_cast<size_t>(parent_edge[v])] = true;
        for (int e = 0; e < E; ++e)
            if (!in_tree[static_cast<size_t>(e)]) nontree.push_back(e);
    }
    // fundamental cycle of a non-tree edge as an edge bitset
    auto tree_path = [&](int v, std::vector<uint8_t>& mark) {
        while (v != 0) {
            int e = parent_edge[static_cast<size_t>(v)];
            mark[static_cast<size_t>(e)] ^= 1;
            v = edges[e].u == v ? edges[e].v : edges[e].u;
        }
    };
    std::vector<std::vector<uint8_t>> fund;
    for (int e : nontree) {
        std::vector<uint8_t> mark(static_cast<size_t>(E), 0);
        mark[static_cast<size_t>(e)] ^= 1;
        tree_path(edges[e].u, mark);
        tree_path(edges[e].v, mark);
        fund.push_back(std::move(mark));
    }

    std::vector<LoopConfig> out;
    size_t n_gen = fund.size();
    if (n_gen > 24) throw std::overflow_error("enumerate_loops: lattice too large");
    std::vector<uint8_t> sub(static_cast<size_t>(E));
    for (uint64_t mask = 0; mask < (1ull << n_gen); ++mask) {
        std::fill(sub.begin(), sub.end(), 0);
        for (size_t g = 0; g < n_gen; ++g)
            if (mask & (1ull << g))
                for (int e = 0; e < E; ++e) sub[static_cast<size_t>(e)] ^= fund[g][static_cast<size_t>(e)];
        // decompose into cycles and compute windings
        LoopConfig cfg;
        std::vector<int> wx_list, wy_list;
        std::vector<bool> used(static_cast<size_t>(E), false);
        for (int e0 = 0; e0 < E; ++e0) {
            if (!sub[static_cast<size_t>(e0)] || used[static_cast<size_t>(e0)]) continue;
            // walk the cycle through e0
            int wx = 0, wy = 0, len = 0;
            int e = e0, at = edges[e0].u;
            do {
                used[static_cast<size_t>(e)] = true;
                ++len;
                bool fwd = (edges[e].u == at);
                wx += fwd ? edges[e].wx : -edges[e].wx;
                wy += fwd ? edges[e].wy : -edges[e].wy;
                at = fwd ? edges[e].v : edges[e].u;
                // find the unique other marked edge at 'at'
                int nxt = -1;
                for (int cand : incident[static_cast<size_t>(at)])
                    if (cand != e && sub[static_cast<size_t>(cand)]) { nxt = cand; break; }
                if (nxt == -1) throw std::logic_error("enumerate_loops: open walk");
                e = nxt;
            } while (e != e0);
            cfg.edges += len;
            if (wx == 0 && wy == 0) {
                ++cfg.contractible;
            } else {
                for (size_t i = 0; i < wx_list.size(); ++i)
                    if (wx * wy_list[i] - wy * wx_list[i] != 0) cfg.parallel = false;
                wx_list.push_back(wx);
                wy_list.push_back(wy);
                ++cfg.winding;
            }
        }
        out.push_back(cfg);
    }
    return out;
}

double loop_partition(const LatticeSpec& lat, double x, double n_weight,
                      double ntilde_weight) {
    double total = 0;
    for (const auto& cfg : enumerate_loops(lat))
        total += std::pow(x, cfg.edges) * std::pow(n_weight, cfg.contractible) *
                 std::pow(ntilde_weight, cfg.winding);
    return total;
}

IsingMapResult ising_map(const MinimalModel& m, double ratio) {
    Rational hf;
    if (m.p() == 3 && m.q() == 4) hf = m.conformal_weight({1, 3});
    else if (m.p() == 4 && m.q() == 5) hf = m.conformal_weight({1, 4});
    else
        throw std::invalid_argument("ising_map: supported for M(3,4) and M(4,5) only");
    double hfd = to_double(to_real(hf));
    double t = t_of_ratio(ratio);
    double X = to_double(triangle_X_of_t(t));
    IsingMapResult r;
    r.x = std::pow(4.0 / (3.0 * std::sqrt(3.0) * X), 2 * hfd);
    r.beta = -0.5 * std::log(r.x);
    r.beta_min = 0.5 * hfd * std::log(27.0 / 16.0);
    r.beta_star = std::log(3.0) / 4.0;
    r.covers_critical = r.beta_min < r.beta_star;
    return r;
}

std::function<double(int, int, int)> ising_weights(double F, double x) {
    return [F, x](int a, int b, int c) {
        return (a == b && b == c) ? F : F * x;
    };
}

double ising_partition(const LatticeSpec& lat, double beta) {
    // spins on sites, product over triangular-lattice edges e^{beta s s'};
    // every edge is shared by two faces, so take the per-face half products
    int sites = lat.n_sites();
    if (sites > 30) throw std::overflow_error("ising_partition: too many sites");
    std::vector<std::array<int, 3>> faces;
    for (int t = 0; t < lat.n_triangles(); ++t) faces.push_back(lat.face_sites(t));
    double total = 0;
    for (uint64_t code = 0; code < (1ull << sites); ++code) {
        double en = 0;
        auto s = [&](int v) { return (code >> v) & 1 ? 1 : -1; };
        for (const auto& f : faces)
            en += 0.5 * (s(f[0]) * s(f[1]) + s(f[1]) * s(f[2]) + s(f[2]) * s(f[0]));
        total += std::exp(beta * en);
    }
    return total;
}

double RsosWeights::T(int a, int b, int c) const {
    auto adj = [&](int u, int v) { return std::abs(u - v) <= 1; };
    if (a < 1 || a > p || b < 1 || b > p || c < 1 || c > p) return 0;
    if (!(adj(a, b) && adj(b, c) && adj(a, c))) return 0;
    if (a == b && b == c) return F;
    // exactly two distinct heights; the odd one out carries the dim ratio
    int xh, yh;
    if (a == b) { xh = a; yh = c; }
    else if (b == c) { xh = b; yh = a; }
    else if (a == c) { xh = a; yh = b; }
    else return 0;
    if (std::abs(xh - yh) != 1) return 0;
    return F * x * std::pow(dim[static_cast<size_t>(yh - 1)] / dim[static_cast<size_t>(xh - 1)],
                            1.0 / 6.0);
}

RsosWeights rsos_weights(const MinimalModel& m, double t, double anomaly_tol) {
    if (m.q() != m.p() + 1)
        throw std::invalid_argument("rsos_weights: unitary models only");
    RsosWeights w;
    w.p = m.p();
    TriangleGeometry geom(t, 30, 256);
    double X = to_double(geom.X());
    double hf = to_double(to_real(m.conformal_weight({1, 2})));
    w.x = std::pow(4.0 / (3.0 * std::sqrt(3.0) * X), 2 * hf);
    double c = to_double(to_real(m.central_charge()));
    double A = triangle_anomaly_A(geom, c, to_double(geom.d()), anomaly_tol);
    KacLabel one = m.vacuum();
    double delta0 = std::pow(to_double(m.s_matrix(one, one)), 1.5);
    w.F = std::exp(A) * std::sqrt(delta0) *
          std::pow(to_double(m.s_matrix(one, one)), -0.25);
    for (int a = 1; a <= m.p(); ++a)
        w.dim.push_back(to_double(m.quantum_dim({1, a})));
    return w;
}

double loop_equivalence_residual(const MinimalModel& m, double t, const LatticeSpec& lat,
                                 double anomaly_tol) {
    RsosWeights w = rsos_weights(m, t, anomaly_tol);
    auto weight = [&](int a, int b, int c) { return w.T(a + 1, b + 1, c + 1); };
    double z_rsos = lattice_partition_brute(lat, w.p, weight);

    double dimf = to_double(m.quantum_dim({1, 2}));
    double z_loops = 0;
    auto loops = enumerate_loops(lat);
    for (int a = 1; a <= w.p; ++a) {
        double xi = std::cos(M_PI * a / (w.p + 1)) / std::cos(M_PI / (w.p + 1));
        for (const auto& cfg : loops)
            z_loops += std::pow(w.x, cfg.edges) * std::pow(dimf, cfg.contractible) *
                       std::pow(dimf * xi, cfg.winding);
    }
    z_loops *= std::pow(w.F, lat.n_triangles());
    return std::fabs(z_rsos - z_loops) / std::fabs(z_rsos);
}

PhasePoints phase_points(int p) {
    if (p < 3) throw std::invalid_argument("phase_points: p >= 3");
    PhasePoints out;
    double n = 2 * std::cos(M_PI / (p + 1));
    out.x_c = 1.0 / std::sqrt(2.0 + std::sqrt(2.0 - n));
    out.x_0 = 1.0 / std::sqrt(2.0 - std::sqrt(2.0 - n));
    out.x_max = std::pow(2.0 / std::pow(3.0, 0.75),
                         static_cast<double>(p - 2) / (p + 1));
    out.c_0 = 1 - Rational(6, p * (p + 1));
    out.c_c = 1 - Rational(6, (p + 1) * (p + 2));

    double hf = static_cast<double>(p - 2) / (4.0 * (p + 1));
    auto x_of_t = [&](double t) {
        return std::pow(4.0 / (3.0 * std::sqrt(3.0) * to_double(triangle_X_of_t(t))),
                        2 * hf);
    };
    auto solve = [&](double target) {
        double lo = 0.02, hi = 8.0;
        if (x_of_t(lo) > target || x_of_t(hi) < target)
            throw std::runtime_error("phase_points: root not bracketed");
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (x_of_t(mid) < target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    out.t_c = solve(out.x_c);
    out.t_0 = solve(out.x_0);
    out.R_c_over_d = 1.0 / (2.0 * std::cosh(M_PI * out.t_c));
    out.R_0_over_d = 1.0 / (2.0 * std::cosh(M_PI * out.t_0));
    return out;
}

} // namespace cftlat
