#include "sgs/metrics.hpp"

#include <algorithm>

#include "sgs/error.hpp"

namespace sgs {
namespace {

double ratio(std::size_t num, std::size_t den) noexcept
{
    return double(num) / double(std::max<std::size_t>(den, 1));
}

void tally(ConfusionCounts& c, bool truth, bool selected) noexcept
{
    if (truth)
        ++(selected ? c.tp : c.fn);
    else
        ++(selected ? c.fp : c.tn);
}

} // namespace

double ConfusionCounts::fdr() const noexcept { return ratio(fp, tp + fp); }
double ConfusionCounts::sensitivity() const noexcept { return ratio(tp, tp + fn); }
double ConfusionCounts::precision() const noexcept { return ratio(tp, tp + fp); }
double ConfusionCounts::f1() const noexcept { return ratio(2 * tp, 2 * tp + fp + fn); }
double ConfusionCounts::accuracy() const noexcept { return ratio(tp + tn, total()); }
double ConfusionCounts::type1_error() const noexcept { return ratio(fp, fp + tn); }

ConfusionCounts confusion(const Eigen::Ref<const Vector>& truth, const Eigen::Ref<const Vector>& estimate)
{
    require(truth.size() == estimate.size(), ErrorKind::DimensionMismatch,
            "truth and estimate must have the same length");
    ConfusionCounts c;
    for (Index i = 0; i < truth.size(); ++i) tally(c, truth[i] != 0.0, estimate[i] != 0.0);
    return c;
}

SelectionMetrics compute_metrics(const Vector& true_beta, const Vector& estimate, const GroupPartition& partition)
{
    require(true_beta.size() == Index(partition.p()) && estimate.size() == Index(partition.p()),
            ErrorKind::DimensionMismatch, "coefficient vectors must have length p");
    SelectionMetrics out;
    out.variable = confusion(true_beta, estimate);
    out.group = confusion(partition.group_norms(true_beta), partition.group_norms(estimate));
    const Vector diff = estimate - true_beta;
    const double p = double(std::max<Index>(diff.size(), 1));
    out.mse = diff.squaredNorm() / p;
    out.mae = diff.cwiseAbs().sum() / p;
    return out;
}

} // namespace sgs
