#pragma once

// F-symbols of the A-series minimal model M(p,q) in the normalization where
// they coincide with the boundary OPE constants, C^{(abc)k}_{ij} =
// F_{bk}[a c; i j].
//
// Construction: F_{bk}[a c; i j] is the crossing-matrix element, from the
// s-channel b to the t-channel k, of the four-point conformal block family
// <a(inf) i(1) j(x) c(0)> with every block normalized to unit leading
// coefficient. When j is one of the level-2 degenerate labels (1,2) or (2,1)
// the blocks are hypergeometric and the matrix is a closed-form ratio of
// Gamma functions ("seed"). All other entries follow from the pentagon
// identity, solved label by label outward from the seeds.

#include "cftlat/minimal_model.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <unordered_map>

namespace cftlat {

struct FKey {
    // canonical label indices, order (b,k,a,c,i,j)
    uint8_t v[6];
    friend bool operator==(const FKey&, const FKey&) = default;
};

struct FKeyHash {
    size_t operator()(const FKey& k) const {
        uint64_t x = 0;
        for (int i = 0; i < 6; ++i) x = x * 37 + k.v[i];
        return std::hash<uint64_t>()(x);
    }
};

class FSymbols {
public:
    explicit FSymbols(MinimalModel model);

    const MinimalModel& model() const { return model_; }

    // F_{bk}[a c; i j]; 0 for non-admissible tuples.
    Real f(KacLabel b, KacLabel k, KacLabel a, KacLabel c, KacLabel i, KacLabel j) const;

    bool admissible(KacLabel b, KacLabel k, KacLabel a, KacLabel c, KacLabel i,
                    KacLabel j) const;

    Real seed_crossing(KacLabel a, KacLabel i, KacLabel j, KacLabel c, KacLabel b,
                       KacLabel k) const;

    // Worst-case residuals of the defining identities over all admissible
    // tuples (used by tests and the acceptance suite).
    Real pentagon_residual() const;
    Real s_relation_residual() const;       // F_{b1}[aa;ii] S_{a1} = F_{a1}[bb;ii] S_{b1}
    Real triple_identity_residual() const;  // F_{bk}[ca;ji] F_{c1}[aa;kk] = F_{ci}[ab;kj] F_{b1}[aa;ii]

    size_t size() const { return table_.size(); }
    const std::unordered_map<FKey, Real, FKeyHash>& table() const { return table_; }

    // Cache file: one line per symbol "p q b k a c i j value precision",
    // labels as r,s pairs, sorted by key.
    void save(const std::filesystem::path& file) const;
    static std::optional<FSymbols> load(const MinimalModel& model,
                                        const std::filesystem::path& file);

    // Compute-or-load through the on-disk cache (keyed by p, q, precision).
    static std::shared_ptr<const FSymbols> cached(const MinimalModel& model);

private:
    struct LoadTag {};
    FSymbols(MinimalModel model, LoadTag) : model_(std::move(model)) {}

    void bootstrap();
    void insert_checked(const FKey& key, const Real& value);
    FKey make_key(KacLabel b, KacLabel k, KacLabel a, KacLabel c, KacLabel i,
                  KacLabel j) const;

    MinimalModel model_;
    std::unordered_map<FKey, Real, FKeyHash> table_;
};

// Cache directory: $CFTLAT_CACHE_DIR if set, else ./cftlat-cache.
std::filesystem::path cache_dir();

struct CacheStats {
    size_t f_hits = 0, f_misses = 0;
    size_t anomaly_hits = 0, anomaly_misses = 0;
};
CacheStats& cache_stats();

// Crossing matrix of <a(inf) i(1) j(x) c(0)> for degenerate j in {(1,2),(2,1)},
// from the classical 2F1 connection coefficients (Gamma ratios, exact rational
// parameter bookkeeping). s-channel b pairs (j,c), t-channel k pairs (i,j).
Real degenerate_crossing(const MinimalModel& m, KacLabel a, KacLabel i, KacLabel j,
                         KacLabel c, KacLabel b, KacLabel k);

} // namespace cftlat
