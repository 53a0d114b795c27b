#pragma once

// Level-truncated Virasoro modules: Verma bases with memoized mode action,
// Shapovalov Gram matrices, null quotients with orthonormal bases, the
// (-1)^m-twisted bilinear pairing used for boundary fields, and the local
// coordinate change operators Gamma_G.

#include "cftlat/linalg.hpp"
#include "cftlat/minimal_model.hpp"
#include "cftlat/prec.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace cftlat {

// L_{-parts[0]} ... L_{-parts.back()} |h>, parts descending, level = sum.
struct ModeWord {
    std::vector<int> parts;
    int level() const {
        int s = 0;
        for (int p : parts) s += p;
        return s;
    }
    friend bool operator==(const ModeWord&, const ModeWord&) = default;
    friend auto operator<=>(const ModeWord&, const ModeWord&) = default;
};

std::vector<ModeWord> partitions_of(int n);

// A vector in the Verma module: per-level dense coefficients over the word
// basis, complex at working precision.
struct VState {
    std::map<int, std::vector<Cplx>> comp; // level -> coefficients

    bool empty() const;
    void add(int level, size_t widx, const Cplx& coeff);
    void prune(const Real& tol = Real("1e-70"));
};

class TruncatedModule {
public:
    // Generic module (no null quotient assumptions; rank decided numerically).
    TruncatedModule(Rational c, Rational h, int max_level);
    static TruncatedModule for_label(const MinimalModel& model, KacLabel label,
                                     int max_level);

    int max_level() const { return max_level_; }
    Rational c_rat() const { return c_; }
    Rational h_rat() const { return h_; }
    const Real& c_real() const { return c_real_; }
    const Real& h_real() const { return h_real_; }

    int verma_dim(int n) const;
    const std::vector<ModeWord>& words(int n) const;
    size_t word_index(const ModeWord& w) const;

    // Standard Shapovalov Gram matrix at level n (L_m^dag = L_{-m}).
    const RMat& gram(int n) const;

    // Quotient data: rank, ON basis columns (real), and the sign of the
    // Shapovalov norm of each ON vector (all +1 for unitary models). The
    // twisted (-1)^m pairing differs from the standard one by (-1)^level,
    // handled by i^level dressing where the twisted ON basis is required.
    int dim(int n) const;
    int dim_up_to(int n) const;
    const RMat& on_basis(int n) const;
    const std::vector<int>& on_signs(int n) const;

    // Apply L_m (any sign) to a state; truncates levels above max_level.
    VState apply_mode(int m, const VState& v) const;
    // Sparse action on a single basis word (memoized, thread safe).
    std::vector<std::pair<size_t, Real>> mode_on_word(int m, int level,
                                                      size_t widx) const;

    // Standard Shapovalov pairing <u|v> (finite due to level grading).
    Cplx pairing(const VState& u, const VState& v) const;
    // Twisted bilinear pairing with <L_m u|v> = (-1)^m <u|L_{-m} v>.
    Cplx twisted_pairing(const VState& u, const VState& v) const;

    // ON vector alpha at level n, as a Verma state (standard normalization).
    VState on_state(int n, int alpha) const;

    // chi(q) = q^(h - c/24) * sum_n dim(n) q^n, truncated at max_level.
    Cplx graded_character(const Cplx& nome) const;

private:
    void build_level(int n) const;

    Rational c_, h_;
    Real c_real_, h_real_;
    int max_level_;
    std::vector<std::vector<ModeWord>> words_;
    mutable std::vector<std::unique_ptr<RMat>> gram_;
    mutable std::vector<std::unique_ptr<RMat>> on_;
    mutable std::vector<std::vector<int>> signs_;
    const std::vector<std::pair<size_t, Real>>& mode_on_word_impl(int m, int level,
                                                                  size_t widx) const;

    mutable std::map<std::tuple<int, int, size_t>,
                     std::vector<std::pair<size_t, Real>>>
        mode_cache_;
    mutable std::recursive_mutex mu_;
};

// Shared module registry: modules are immutable after lazy level builds and
// expensive to construct, so reuse them process-wide.
std::shared_ptr<const TruncatedModule> module_registry(const Rational& c,
                                                       const Rational& h, int max_level);
std::shared_ptr<const TruncatedModule> module_registry(const MinimalModel& m,
                                                       KacLabel label, int max_level);

// Graded dimension of the irreducible M(p,q) module (r,s) at level n, from
// the embedding-diagram (double alternating sum) character formula. Used as
// the independent check on Gram-rank counting.
int irreducible_graded_dim(int p, int q, KacLabel label, int n);

// Local coordinate change operator Gamma_G for G(z) = a1 z + a2 z^2 + ...,
// acting on truncated modules as (1 + c2 L1 + ...) a1^{L0}.
class CoordMapOperator {
public:
    // series[k] = a_{k+1}; series[0] = a1 must be nonzero.
    CoordMapOperator(std::vector<Cplx> series, int max_level);

    // Gamma applied to a state of the given module.
    VState apply(const TruncatedModule& mod, const VState& v) const;

    const std::vector<Cplx>& peeled() const { return eps_; } // eps_[k] scales L_k

private:
    std::vector<Cplx> eps_; // eps_[k] for k >= 1 (L_k coefficient chain)
    Cplx a1_;
    int max_level_;
};

} // namespace cftlat
