#pragma once

// Disc two- and three-point amplitudes of primaries, the recursive
// three-point block B on descendants, the N-constants, and the clipped
// triangle amplitude including the coordinate-change operator and the
// anomaly factor.

#include "cftlat/fsymbols.hpp"
#include "cftlat/uniformization.hpp"
#include "cftlat/virasoro.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace cftlat {

// Conformal 3-point block on the triangle frame (local coordinates
// sigma_s = e^{2 pi i s}(1 + i z), s = 0, 1/3, -1/3), normalized to
// B(primary, primary, primary) = 1. Values depend only on (c; h1, h2, h3)
// and the descendant words.
class ThreePointBlock {
public:
    static std::shared_ptr<ThreePointBlock> get(const Rational& c, const Rational& h1,
                                                const Rational& h2, const Rational& h3,
                                                int max_level);

    // u, v, w are Verma states of the legs (level <= max_level each)
    Cplx eval(const VState& u, const VState& v, const VState& w) const;

    const TruncatedModule& leg(int i) const { return *legs_[i]; }

private:
    ThreePointBlock(const Rational& c, const Rational& h1, const Rational& h2,
                    const Rational& h3, int max_level);

    Cplx word_block(const ModeWord& a, const ModeWord& b, const ModeWord& c) const;

    std::array<std::unique_ptr<TruncatedModule>, 3> legs_;
    Rational c_, h1_, h2_, h3_;
    int max_level_;
    mutable std::map<std::tuple<ModeWord, ModeWord, ModeWord>, Cplx> memo_;
    mutable std::recursive_mutex mu_;
};

// N^{abc}_{ijk} constants of the triangle amplitude.
Real n_constant(const MinimalModel& m, const FSymbols& F, KacLabel a, KacLabel b,
                KacLabel c, KacLabel i, KacLabel j, KacLabel k);

// Disc two-point amplitude with insertions at e^{i theta} and 1.
Real disc_2pt(const MinimalModel& m, const FSymbols& F, KacLabel a, KacLabel b,
              KacLabel i, const Real& theta);

// Disc three-point amplitude of primaries at the third roots of unity.
Real disc_3pt_primary(const MinimalModel& m, const FSymbols& F, KacLabel a, KacLabel b,
                      KacLabel c, KacLabel i, KacLabel j, KacLabel k);

// One basis state of the cloaking boundary space H_{gamma gamma}^{<= h_max}.
struct BoundaryState {
    KacLabel left, right; // boundary labels: kappa^{(left,right)}
    KacLabel rep;         // representation i
    int level = 0;
    int alpha = 0; // ON index within the level
    Rational h;    // h_rep + level
};

// The clipped-triangle amplitude machinery for one model and geometry.
class TriangleAmplitudes {
public:
    TriangleAmplitudes(const MinimalModel& model, std::shared_ptr<const FSymbols> F,
                       const TriangleGeometry& geom, double d_phys, int level_cutoff,
                       double anomaly_tol = 1e-7);

    const MinimalModel& model() const { return model_; }
    const FSymbols& fsymbols() const { return *F_; }
    double anomaly_A() const { return A_; } // for this model's central charge

    // B(Gamma u, Gamma v, Gamma w) tensor over twisted-ON states of the three
    // modules (i, j, k), levels <= cutoff. Entry order follows the module ON
    // bases, flattened level by level.
    struct BlockTensor {
        std::vector<int> dim; // per leg
        std::vector<Cplx> val;
        Cplx at(int x, int y, int z) const {
            return val[(static_cast<size_t>(x) * dim[1] + y) * dim[2] + z];
        }
    };
    BlockTensor gamma_block_tensor(KacLabel i, KacLabel j, KacLabel k) const;

    // T^{abc} on twisted-ON states, with or without e^A.
    Real triangle_amplitude(KacLabel a, KacLabel b, KacLabel c, KacLabel i, KacLabel j,
                            KacLabel k, int alpha, int beta, int gamma_idx, int li,
                            int lj, int lk, bool with_anomaly) const;

    // modules cache (level-truncated, per representation)
    const TruncatedModule& module_of(KacLabel rep) const;

    int level_cutoff() const { return cutoff_; }
    const Real& X() const { return X_; }

private:
    VState gamma_on_state(const TruncatedModule& mod, int level, int alpha) const;

    MinimalModel model_;
    std::shared_ptr<const FSymbols> F_;
    Real X_;
    double A_;
    int cutoff_;
    std::vector<Cplx> gamma_series_;
    mutable std::map<KacLabel, std::shared_ptr<const TruncatedModule>> modules_;
    mutable std::mutex mu_;
};

// Basis of H_{gamma gamma} below an h cutoff for a fusion-closed label set.
std::vector<BoundaryState> truncated_boundary_basis(const MinimalModel& m,
                                                    const std::vector<KacLabel>& symmetry,
                                                    const Rational& h_max);

// Cloaking triangle amplitude table over that basis.
struct TriangleAmplitudeTable {
    std::vector<BoundaryState> basis;
    std::vector<Real> value; // flattened cube over basis indices
    Real at(size_t x, size_t y, size_t z) const {
        return value[(x * basis.size() + y) * basis.size() + z];
    }
};

TriangleAmplitudeTable cloaking_triangle_table(const TriangleAmplitudes& amps,
                                               const std::vector<KacLabel>& symmetry,
                                               const Real& delta0, const Rational& h_max);

} // namespace cftlat
