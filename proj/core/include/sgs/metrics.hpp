#pragma once

#include <cstddef>

#include "sgs/partition.hpp"
#include "sgs/types.hpp"

namespace sgs {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    std::size_t selected() const noexcept { return tp + fp; }
    /// fp / max(tp + fp, 1)
    double fdr() const noexcept;
    /// tp / max(tp + fn, 1)
    double sensitivity() const noexcept;
    /// tp / max(tp + fp, 1)
    double precision() const noexcept;
    /// 2 tp / max(2 tp + fp + fn, 1)
    double f1() const noexcept;
    /// (tp + tn) / max(total, 1)
    double accuracy() const noexcept;
    /// fp / max(fp + tn, 1)
    double type1_error() const noexcept;
};

/// Truth/selection comparison: entry i counts as positive when non-zero.
ConfusionCounts confusion(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& estimate);

struct SelectionMetrics {
    ConfusionCounts variable;
    ConfusionCounts group;
    double mse = 0.0; ///< mean squared coefficient error
    double mae = 0.0; ///< mean absolute coefficient error
};

/// Group truth: a group is active iff its coefficient block is non-zero.
SelectionMetrics compute_metrics(const Vector& true_beta, const Vector& estimate, const GroupPartition& partition);

} // namespace sgs
