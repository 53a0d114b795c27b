#pragma once

// Cloaking boundary states, stability checks, torus one-point functions of
// vacuum descendants, and the one-hole torus partition function in the open
// and closed channels.

#include "cftlat/blocks.hpp"

#include <complex>
#include <vector>

namespace cftlat {

// {x : S_xj / S_x1 = S_1j / S_11 for all j in J}; J must close under fusion.
std::vector<KacLabel> tilde_set(const MinimalModel& m, const std::vector<KacLabel>& J);

struct CloakingBoundaryState {
    std::vector<KacLabel> symmetry;   // J
    Real delta0;
    std::vector<KacLabel> sectors;    // J-tilde
    std::vector<Real> coefficients;   // delta0 Dim(J) sqrt(S_x1) per sector
};

CloakingBoundaryState cloaking_boundary_state(const MinimalModel& m,
                                              const std::vector<KacLabel>& J,
                                              const Real& delta0);

struct StabilityVerdict {
    bool satisfied = false;
    std::vector<KacLabel> violators; // sectors with h <= 1 beyond the identity
};

// Unitary models only (q = p + 1): all sectors above the identity must be
// irrelevant, h > 1.
StabilityVerdict stability_check(const MinimalModel& m, const std::vector<KacLabel>& J);

// Chiral torus traces Tr_{R_lab} o(Gamma_cyl chi) q^{L0 - c/24} for chi in the
// vacuum module. The zero mode is built from the Borcherds iterate formula on
// the level-truncated irreducible modules; the cylinder dressing Gamma_cyl is
// the coordinate change z -> e^{2 pi i z} - 1.
class TorusOnePoint {
public:
    explicit TorusOnePoint(const MinimalModel& model, int chi_cutoff = 14,
                           int trace_level = 6);

    int chi_cutoff() const { return chi_cutoff_; }
    int trace_level() const { return trace_level_; }
    const TruncatedModule& vacuum_module() const { return *vac_; }

    // coefficients f[l], l = 0..trace_level, of q^{h_lab - c/24} sum f[l] q^l
    std::vector<cd> chiral_trace(KacLabel lab, const VState& chi_dressed) const;

    // Gamma_cyl applied to the vacuum ON state (level, alpha), with the
    // quotient lift cleared of 1-part words.
    VState dressed_vacuum_state(int level, int alpha) const;

    // A(T^2(1, tau); (chi x chi-bar)(0)) for chi the vacuum ON state.
    cd one_point(int level, int alpha, std::complex<double> tau) const;

    // torus partition function sum_i |chi_i|^2 at the same truncation
    double partition_function(std::complex<double> tau) const;

private:
    struct ModeMatrices; // per-target-module quotient data
    const ModeMatrices& target(KacLabel lab) const;

    MinimalModel model_;
    int chi_cutoff_, trace_level_, module_level_;
    std::unique_ptr<TruncatedModule> vac_;
    mutable std::map<KacLabel, std::shared_ptr<ModeMatrices>> targets_;
    mutable std::map<std::pair<size_t, size_t>,
                     std::map<KacLabel, std::vector<cd>>>
        word_trace_cache_; // (level, word) -> per-label trace coefficients
    mutable std::map<std::tuple<int, int, double, double>, cd> one_point_cache_;
    mutable std::mutex mu_;
};

struct OneHolePoint {
    double r_over_d = 0;
    double raw = 0;      // without anomaly factors
    double corrected = 0;// with anomaly factors
};

// Closed channel: sum over vacuum ON states chi of
// R^{2 h_chi - c/6} d^{-2 h_chi} A(T^2(1,tau); chi chibar). raw omits R^{-c/6}.
OneHolePoint one_hole_closed(const TorusOnePoint& top, double R, double d,
                             std::complex<double> tau, int weight_cutoff);

// Open channel: two clipped triangles contracted around the hole,
// sum_a delta0 dim(a) sum (T^{aaa})^2. raw omits e^{2A}.
OneHolePoint one_hole_open(const TriangleAmplitudes& amps, const Real& delta0);

// Exact R -> d/2 limit of the open channel without the anomaly factor: all
// descendants and non-vacuum sectors are suppressed, leaving
// sum_a delta0 dim(a) (N^{aaa}_{111} / dim(a)^{3/2})^2.
Real one_hole_open_touching_limit(const MinimalModel& m, const Real& delta0);

struct ChannelComparison {
    std::vector<OneHolePoint> open_points, closed_points;
    std::vector<double> r_over_d;
    std::vector<double> rel_diff_corrected; // |open-closed|/closed with anomaly
    std::vector<double> rel_diff_raw;       // same without anomaly factors
};

ChannelComparison channel_compare(const MinimalModel& model,
                                  const std::vector<double>& r_over_d_grid,
                                  std::complex<double> tau, int open_level_cutoff,
                                  int closed_weight_cutoff, double anomaly_tol = 1e-6);

enum class AppendixBCase {
    torus_from_sphere,
    cylinder_closed,
    cylinder_open,
    boundary_state_radius,
};

struct FixtureReport {
    bool pass = false;
    double residual = 0;
    std::string detail;
};

FixtureReport appendixB_fixture(const MinimalModel& m, AppendixBCase which,
                                int truncation);

} // namespace cftlat
