#pragma once

// Exact lattice-model side: the hexagonal/triangular torus, brute-force and
// transfer-matrix contractions of triangle weights, the Ising-lattice
// rewriting, the RSOS weights at lowest non-trivial cutoff, loop-model
// enumeration with winding bookkeeping, and the loop-model phase diagram.

#include "cftlat/minimal_model.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace cftlat {

// Doubly periodic triangular lattice (sites) with its dual hexagonal lattice
// (triangles = hex vertices, shared triangle edges = hex edges).
class LatticeSpec {
public:
    LatticeSpec(int M, int N);

    int M() const { return m_; }
    int N() const { return n_; }
    int n_sites() const { return m_ * n_; }       // hex faces
    int n_triangles() const { return 2 * m_ * n_; } // hex vertices
    int n_edges() const { return 3 * m_ * n_; }

    int site(int x, int y) const {
        x = ((x % m_) + m_) % m_;
        y = ((y % n_) + n_) % n_;
        return x + m_ * y;
    }
    // triangle index: 2*(x + M y) + (0 up / 1 down); vertices counter-clockwise
    std::array<int, 3> face_sites(int t) const;

    struct HexEdge {
        int u, v;            // hex vertices (triangles)
        int site_a, site_b;  // endpoints of the shared triangular edge
        int wx, wy;          // fundamental-domain crossing counts (u -> v)
    };
    const std::vector<HexEdge>& hex_edges() const { return edges_; }

private:
    int m_, n_;
    std::vector<HexEdge> edges_;
};

// Exact contraction of per-triangle weights over height configurations
// phi: sites -> {0..n_heights-1}. weight(t, h1, h2, h3) with ccw vertex
// heights. Brute force; feasible at desk scale.
double lattice_partition_brute(const LatticeSpec& lat, int n_heights,
                               const std::function<double(int, int, int)>& weight);

// Row-transfer-matrix route; must agree with brute force where both run.
double lattice_partition_transfer(const LatticeSpec& lat, int n_heights,
                                  const std::function<double(int, int, int)>& weight);

// Loop configurations on the hexagonal lattice: every even subgraph of the
// 3-regular dual, decomposed into disjoint cycles with homology winding.
struct LoopConfig {
    int edges = 0;        // |L|
    int contractible = 0; // d(L)
    int winding = 0;      // w(L)
    bool parallel = true; // all winding loops share one homology cycle
};

// Enumerate all loop configurations (cycle space of the hexagonal graph).
std::vector<LoopConfig> enumerate_loops(const LatticeSpec& lat);

// sum over loop configs of x^{|L|} n^{d(L)} ntilde^{w(L)}
double loop_partition(const LatticeSpec& lat, double x, double n_weight,
                      double ntilde_weight);

// --- Ising mapping (section on the Z2-symmetric cutoff model) -------------

struct IsingMapResult {
    double x = 0;         // x(R)
    double beta = 0;      // -log(x)/2
    double beta_min = 0;  // (h_f/2) log(27/16)
    double beta_star = 0; // log(3)/4, triangular-lattice critical point
    bool covers_critical = false;
};

// model must be M(3,4) or M(4,5); ratio = R/d in (0, 1/2)
IsingMapResult ising_map(const MinimalModel& m, double ratio);

// Z2-cutoff height-model weights: T_aaa = F, T_aab = F x; returns the weight
// function over heights {0,1} given the common factor F and x.
std::function<double(int, int, int)> ising_weights(double F, double x);

// exact Ising partition function on the triangular M x N torus
double ising_partition(const LatticeSpec& lat, double beta);

// --- RSOS / loop model at the first-row symmetry ---------------------------

struct RsosWeights {
    int p = 0;
    double F = 0; // overall factor F_{d,R} = e^A delta0^{1/2} S11^{-1/4}
    double x = 0; // x(R)
    std::vector<double> dim; // dim(1,a), a = 1..p
    // heights are 1..p; zero unless heights pairwise within distance 1
    double T(int a, int b, int c) const;
};

// t parametrizes R/d; anomaly enters through F_{d,R}
RsosWeights rsos_weights(const MinimalModel& m, double t, double anomaly_tol = 1e-6);

// |Z_RSOS - F^{|V|} sum_a sum_L x^{|L|} dim(f)^{d} (dim(f) xi_a)^{w}| / |Z_RSOS|
double loop_equivalence_residual(const MinimalModel& m, double t, const LatticeSpec& lat,
                                 double anomaly_tol = 1e-6);

// --- phase diagram ----------------------------------------------------------

struct PhasePoints {
    double x_c = 0, x_0 = 0, x_max = 0;
    Rational c_c, c_0;
    double R_c_over_d = 0, R_0_over_d = 0;
    double t_c = 0, t_0 = 0;
};

PhasePoints phase_points(int p);

} // namespace cftlat
