#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sgs/types.hpp"

namespace sgs {

/// A strict m-partition of the variable indices {0, ..., p-1}.
///
/// Groups are disjoint, non-empty and cover every variable exactly once.
/// Members of each group are stored in ascending index order.
class GroupPartition {
public:
    GroupPartition() = default;

    /// `group_of[i]` is the group label of variable i. Labels must be exactly
    /// {0, ..., m-1}; an unused label means an empty group and is rejected.
    static GroupPartition from_labels(std::vector<std::size_t> group_of);

    /// Explicit member lists over the domain {0, ..., p-1}.
    static GroupPartition from_members(const std::vector<std::vector<std::size_t>>& members,
                                       std::size_t p);

    /// Consecutive blocks: the first sizes[0] variables form group 0, etc.
    static GroupPartition from_sizes(std::span<const std::size_t> sizes);

    static GroupPartition singletons(std::size_t p);

    std::size_t p() const noexcept { return group_of_.size(); }
    std::size_t m() const noexcept { return members_.size(); }

    std::size_t group_of(std::size_t variable) const { return group_of_.at(variable); }
    const std::vector<std::size_t>& labels() const noexcept { return group_of_; }
    std::span<const std::size_t> members(std::size_t group) const { return members_.at(group); }
    std::size_t size(std::size_t group) const { return members_.at(group).size(); }
    const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    std::size_t max_size() const noexcept;

    /// Euclidean norm of each group's block of `x`.
    Vector group_norms(const Eigen::Ref<const Vector>& x) const;

    bool operator==(const GroupPartition&) const = default;

private:
    std::vector<std::size_t> group_of_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::size_t> sizes_;
};

} // namespace sgs
