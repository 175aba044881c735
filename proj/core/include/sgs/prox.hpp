#pragma once

#include "sgs/partition.hpp"
#include "sgs/types.hpp"

namespace sgs {

/// Non-negative, non-increasing weight vector (v of length p or w of length m).
class SortedWeights {
public:
    SortedWeights() = default;

    /// Throws WeightOrderViolation if `values` is not non-increasing and
    /// non-negative.
    explicit SortedWeights(Vector values);

    static SortedWeights zeros(Index k) { return SortedWeights(Vector::Zero(k)); }
    static SortedWeights constant(Index k, double value);

    const Vector& values() const noexcept { return values_; }
    Index size() const noexcept { return values_.size(); }
    double operator[](Index i) const { return values_[i]; }

    SortedWeights scaled(double factor) const;

private:
    Vector values_;
};

/// Diagonal D with entry sqrt(p_g) for every variable of group g.
class GroupScaling {
public:
    explicit GroupScaling(const GroupPartition& partition);

    const Vector& diag() const noexcept { return diag_; }

private:
    Vector diag_;
};

/// Sorted-L1 penalty sum_i weights_i |x|_(i).
double sorted_l1_norm(const Eigen::Ref<const Vector>& x, const SortedWeights& weights);

/// argmin_z 1/2 ||z - x||^2 + sum_i weights_i |z|_(i).
///
/// Stack-based pool-adjacent-violators on |x| sorted descending minus the
/// weights, clipped at zero; O(k log k). Ties in |x| keep original index order.
Vector prox_slope(const Eigen::Ref<const Vector>& x, const SortedWeights& weights);

/// argmin_z 1/2 ||z - x||^2 + sum_g weights_(g) ||z^(g)||_2, with weights
/// matched to groups by decreasing group norm. Computed as prox_slope on the
/// group norms followed by a per-group rescale (zero-norm groups stay zero).
Vector prox_gslope(const Eigen::Ref<const Vector>& x, const SortedWeights& weights,
                   const GroupPartition& partition);

/// D^-1 prox_gslope(D b + D^-1 gamma u; gamma w): the gSLOPE step of the
/// three-operator splitting, carried out in the c = D b coordinates.
Vector prox_gslope_transformed(const Eigen::Ref<const Vector>& b, const Eigen::Ref<const Vector>& u,
                               double gamma, const SortedWeights& weights,
                               const GroupScaling& scaling, const GroupPartition& partition);

} // namespace sgs
