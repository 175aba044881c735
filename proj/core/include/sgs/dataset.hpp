#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgs/partition.hpp"
#include "sgs/types.hpp"

namespace sgs {

/// A grouped regression problem: design, response, grouping and family.
/// Validated on construction and immutable afterwards.
class GroupedDataset {
public:
    GroupedDataset(Matrix X, Vector y, GroupPartition partition, Family family = Family::Gaussian);

    const Matrix& X() const noexcept { return X_; }
    const Vector& y() const noexcept { return y_; }
    const GroupPartition& partition() const noexcept { return partition_; }
    Family family() const noexcept { return family_; }

    Index n() const noexcept { return X_.rows(); }
    Index p() const noexcept { return X_.cols(); }

    /// Rows selected by index, in the given order; partition and family shared.
    GroupedDataset rows(std::span<const Index> row_indices) const;

private:
    Matrix X_;
    Vector y_;
    GroupPartition partition_;
    Family family_;
};

/// Column scaling convention used by `standardize`.
enum class ScaleConvention {
    UnitNorm, ///< centred columns scaled to l2 norm 1
    SqrtN,    ///< centred columns scaled to l2 norm sqrt(n)
};

struct StandardizationRecord {
    Vector column_centers;
    Vector column_scales;
    double response_center = 0.0; ///< zero for the Binomial family
};

struct StandardizedData {
    GroupedDataset data;
    StandardizationRecord record;
};

/// Centre every column and scale it to the requested norm; centre the
/// response for the Gaussian family. Throws ConstantColumn(index).
StandardizedData standardize(const GroupedDataset& data,
                             ScaleConvention convention = ScaleConvention::UnitNorm);

/// Apply an existing record to new rows (e.g. a validation fold).
Matrix apply_standardization(const Matrix& X, const StandardizationRecord& record);

struct Coefficients {
    Vector beta;
    double intercept = 0.0;
};

/// Map a fit on standardized data back to the original scale so that
/// X * beta + intercept reproduces the standardized-scale predictions.
Coefficients unstandardize_coefficients(const Vector& beta_std, double intercept_std,
                                        const StandardizationRecord& record);

struct TrainTestSplit {
    GroupedDataset train;
    GroupedDataset test;
    std::vector<Index> train_rows;
    std::vector<Index> test_rows;
};

/// Seeded random row split. The test set receives round(test_fraction * n) rows.
TrainTestSplit split(const GroupedDataset& data, double test_fraction, std::uint64_t seed);

} // namespace sgs
