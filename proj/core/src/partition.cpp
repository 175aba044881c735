#include "sgs/partition.hpp"

#include <algorithm>
#include <string>

#include "sgs/error.hpp"

namespace sgs {

GroupPartition GroupPartition::from_labels(std::vector<std::size_t> group_of)
{
    require(!group_of.empty(), ErrorKind::InvalidPartition, "partition has no variables");
    const std::size_t m = *std::max_element(group_of.begin(), group_of.end()) + 1;
    require(m <= group_of.size(), ErrorKind::InvalidPartition,
            "group labels exceed the number of variables");

    GroupPartition out;
    out.members_.resize(m);
    for (std::size_t i = 0; i < group_of.size(); ++i) {
        out.members_[group_of[i]].push_back(i);
    }
    out.sizes_.resize(m);
    for (std::size_t g = 0; g < m; ++g) {
        require(!out.members_[g].empty(), ErrorKind::InvalidPartition,
                "group " + std::to_string(g) + " is empty");
        out.sizes_[g] = out.members_[g].size();
    }
    out.group_of_ = std::move(group_of);
    return out;
}

GroupPartition GroupPartition::from_members(const std::vector<std::vector<std::size_t>>& members,
                                            std::size_t p)
{
    require(p > 0, ErrorKind::InvalidPartition, "partition has no variables");
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> labels(p, unset);
    for (std::size_t g = 0; g < members.size(); ++g) {
        require(!members[g].empty(), ErrorKind::InvalidPartition,
                "group " + std::to_string(g) + " is empty");
        for (auto i : members[g]) {
            require(i < p, ErrorKind::InvalidPartition,
                    "variable " + std::to_string(i) + " outside domain of size " + std::to_string(p));
            require(labels[i] == unset, ErrorKind::InvalidPartition,
                    "variable " + std::to_string(i) + " belongs to more than one group");
            labels[i] = g;
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        require(labels[i] != unset, ErrorKind::InvalidPartition,
                "variable " + std::to_string(i) + " is not assigned to any group");
    }
    return from_labels(std::move(labels));
}

GroupPartition GroupPartition::from_sizes(std::span<const std::size_t> sizes)
{
    std::vector<std::size_t> labels;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        require(sizes[g] > 0, ErrorKind::InvalidPartition,
                "group " + std::to_string(g) + " has size zero");
        labels.insert(labels.end(), sizes[g], g);
    }
    return from_labels(std::move(labels));
}

GroupPartition GroupPartition::singletons(std::size_t p)
{
    std::vector<std::size_t> labels(p);
    for (std::size_t i = 0; i < p; ++i) labels[i] = i;
    return from_labels(std::move(labels));
}

std::size_t GroupPartition::max_size() const noexcept
{
    return sizes_.empty() ? 0 : *std::max_element(sizes_.begin(), sizes_.end());
}

Vector GroupPartition::group_norms(const Eigen::Ref<const Vector>& x) const
{
    require(static_cast<std::size_t>(x.size()) == p(), ErrorKind::LengthMismatch,
            "vector length does not match partition domain");
    Vector norms = Vector::Zero(static_cast<Index>(m()));
    for (std::size_t i = 0; i < p(); ++i) {
        const double v = x[static_cast<Index>(i)];
        norms[static_cast<Index>(group_of_[i])] += v * v;
    }
    return norms.cwiseSqrt();
}

} // namespace sgs
