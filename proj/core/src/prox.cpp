#include "sgs/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sgs/error.hpp"

namespace sgs {
namespace {

std::vector<Index> order_by_magnitude(const Eigen::Ref<const Vector>& x)
{
    std::vector<Index> order(static_cast<std::size_t>(x.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return std::abs(x[a]) > std::abs(x[b]); });
    return order;
}

} // namespace

SortedWeights::SortedWeights(Vector values) : values_(std::move(values))
{
    for (Index i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
            fail(ErrorKind::WeightOrderViolation,
                 "weight " + std::to_string(i) + " is negative or not finite");
        }
        if (i > 0 && values_[i] > values_[i - 1]) {
            fail(ErrorKind::WeightOrderViolation,
                 "weights increase at position " + std::to_string(i));
        }
    }
}

SortedWeights SortedWeights::constant(Index k, double value)
{
    return SortedWeights(Vector::Constant(k, value));
}

SortedWeights SortedWeights::scaled(double factor) const
{
    require(factor >= 0.0, ErrorKind::InvalidArgument, "weight scale must be non-negative");
    return SortedWeights(values_ * factor);
}

GroupScaling::GroupScaling(const GroupPartition& partition)
    : diag_(static_cast<Index>(partition.p()))
{
    for (std::size_t i = 0; i < partition.p(); ++i) {
        diag_[static_cast<Index>(i)] = std::sqrt(double(partition.size(partition.group_of(i))));
    }
}

double sorted_l1_norm(const Eigen::Ref<const Vector>& x, const SortedWeights& weights)
{
    require(x.size() == weights.size(), ErrorKind::LengthMismatch,
            "sorted-L1 norm: vector and weights differ in length");
    const auto order = order_by_magnitude(x);
    double total = 0.0;
    for (std::size_t r = 0; r < order.size(); ++r) {
        total += weights[Index(r)] * std::abs(x[order[r]]);
    }
    return total;
}

Vector prox_slope(const Eigen::Ref<const Vector>& x, const SortedWeights& weights)
{
    const Index k = x.size();
    require(k == weights.size(), ErrorKind::LengthMismatch,
            "prox_slope: input has length " + std::to_string(k) + " but weights have length " +
                std::to_string(weights.size()));
    if (k == 0) return Vector();

    const auto order = order_by_magnitude(x);

    // Blocks of the isotonic fit to (|x|_(i) - weights_i), merged while the
    // running block average fails to decrease.
    struct Block {
        Index start;
        Index end;
        double sum;
    };
    std::vector<Block> stack;
    stack.reserve(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        stack.push_back({i, i, std::abs(x[order[std::size_t(i)]]) - weights[i]});
        while (stack.size() > 1) {
            const Block& top = stack.back();
            const Block& prev = stack[stack.size() - 2];
            const double top_avg = top.sum / double(top.end - top.start + 1);
            const double prev_avg = prev.sum / double(prev.end - prev.start + 1);
            if (prev_avg > top_avg) break;
            Block merged{prev.start, top.end, prev.sum + top.sum};
            stack.pop_back();
            stack.back() = merged;
        }
    }

    Vector out(k);
    for (const auto& block : stack) {
        const double value = std::max(block.sum / double(block.end - block.start + 1), 0.0);
        for (Index i = block.start; i <= block.end; ++i) {
            const Index src = order[std::size_t(i)];
            out[src] = std::copysign(value, x[src]);
            if (value == 0.0) out[src] = 0.0;
        }
    }
    return out;
}

Vector prox_gslope(const Eigen::Ref<const Vector>& x, const SortedWeights& weights,
                   const GroupPartition& partition)
{
    require(static_cast<std::size_t>(x.size()) == partition.p(), ErrorKind::LengthMismatch,
            "prox_gslope: input length does not match partition");
    require(static_cast<std::size_t>(weights.size()) == partition.m(), ErrorKind::LengthMismatch,
            "prox_gslope: need one weight per group");

    const Vector norms = partition.group_norms(x);
    const Vector shrunk = prox_slope(norms, weights);

    Vector out(x.size());
    for (std::size_t g = 0; g < partition.m(); ++g) {
        const double n = norms[Index(g)];
        const double factor = n > 0.0 ? shrunk[Index(g)] / n : 0.0;
        for (auto i : partition.members(g)) out[Index(i)] = factor * x[Index(i)];
    }
    return out;
}

Vector prox_gslope_transformed(const Eigen::Ref<const Vector>& b, const Eigen::Ref<const Vector>& u,
                               double gamma, const SortedWeights& weights,
                               const GroupScaling& scaling, const GroupPartition& partition)
{
    require(gamma > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
    const Vector& d = scaling.diag();
    require(b.size() == d.size() && u.size() == d.size(), ErrorKind::LengthMismatch,
            "prox_gslope_transformed: length mismatch");
    const Vector m = d.cwiseProduct(b) + gamma * u.cwiseQuotient(d);
    return prox_gslope(m, weights.scaled(gamma), partition).cwiseQuotient(d);
}

} // namespace sgs
