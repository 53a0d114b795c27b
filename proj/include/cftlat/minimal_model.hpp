#pragma once

// Chiral data of the A-series Virasoro minimal model M(p,q): Kac labels with
// their identification, exact conformal weights, fusion rules, the modular
// S-matrix and quantum dimensions.

#include "cftlat/prec.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cftlat {

struct KacLabel {
    int r = 1, s = 1;

    friend bool operator==(const KacLabel&, const KacLabel&) = default;
    friend auto operator<=>(const KacLabel&, const KacLabel&) = default;
};

std::string to_string(const KacLabel& l);

class MinimalModel {
public:
    MinimalModel(int p, int q);

    int p() const { return p_; }
    int q() const { return q_; }
    Rational t_ratio() const { return Rational(p_, q_); }

    // Canonical representative of (r,s) ~ (p-r,q-s): smaller r, ties by s.
    KacLabel canonical(KacLabel l) const;
    bool in_kac_table(KacLabel l) const;

    const std::vector<KacLabel>& labels() const { return labels_; }
    size_t num_labels() const { return labels_.size(); }
    size_t index_of(KacLabel l) const;
    KacLabel label_at(size_t i) const { return labels_[i]; }
    KacLabel vacuum() const { return KacLabel{1, 1}; }

    Rational central_charge() const;
    Rational conformal_weight(KacLabel l) const;

    // Fusion multiplicity N_{ij}^k in {0,1}.
    int fusion_coeff(KacLabel i, KacLabel j, KacLabel k) const;
    std::vector<KacLabel> fusion_product(KacLabel i, KacLabel j) const;
    bool fusion_closed(const std::vector<KacLabel>& set) const;

    Real s_matrix(KacLabel i, KacLabel j) const;
    Real quantum_dim(KacLabel a) const;

    // Sum of dim(a)^2 over a set of labels.
    Real global_dim(const std::vector<KacLabel>& set) const;

private:
    int p_, q_;
    std::vector<KacLabel> labels_;
};

// Named symmetry presets from the Kac table.
std::vector<KacLabel> label_set_all(const MinimalModel& m);
std::vector<KacLabel> label_set_first_row(const MinimalModel& m); // (1,s)
std::vector<KacLabel> label_set_z2(const MinimalModel& m);        // {1, (1,q-1)}

} // namespace cftlat
