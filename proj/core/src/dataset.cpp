#include "sgs/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sgs/error.hpp"
#include "sgs/rng.hpp"

namespace sgs {

GroupedDataset::GroupedDataset(Matrix X, Vector y, GroupPartition partition, Family family)
    : X_(std::move(X)), y_(std::move(y)), partition_(std::move(partition)), family_(family)
{
    require(X_.rows() == y_.size(), ErrorKind::DimensionMismatch,
            "design has " + std::to_string(X_.rows()) + " rows but response has " +
                std::to_string(y_.size()) + " entries");
    require(static_cast<std::size_t>(X_.cols()) == partition_.p(), ErrorKind::DimensionMismatch,
            "design has " + std::to_string(X_.cols()) + " columns but partition covers " +
                std::to_string(partition_.p()) + " variables");
    if (family_ == Family::Binomial) {
        for (Index i = 0; i < y_.size(); ++i) {
            require(y_[i] == 0.0 || y_[i] == 1.0, ErrorKind::InvalidArgument,
                    "binomial response must be 0/1 (row " + std::to_string(i) + ")");
        }
    }
}

GroupedDataset GroupedDataset::rows(std::span<const Index> row_indices) const
{
    const auto k = static_cast<Index>(row_indices.size());
    Matrix Xs(k, p());
    Vector ys(k);
    for (Index r = 0; r < k; ++r) {
        const Index src = row_indices[static_cast<std::size_t>(r)];
        require(src >= 0 && src < n(), ErrorKind::InvalidArgument, "row index out of range");
        Xs.row(r) = X_.row(src);
        ys[r] = y_[src];
    }
    return GroupedDataset(std::move(Xs), std::move(ys), partition_, family_);
}

StandardizedData standardize(const GroupedDataset& data, ScaleConvention convention)
{
    require(data.n() >= 2, ErrorKind::TooFewRows, "standardization needs at least two rows");
    const Index n = data.n();
    const Index p = data.p();

    StandardizationRecord rec;
    rec.column_centers = data.X().colwise().mean().transpose();
    rec.column_scales.resize(p);

    Matrix X = data.X().rowwise() - rec.column_centers.transpose();
    const double target = convention == ScaleConvention::UnitNorm ? 1.0 : std::sqrt(double(n));
    for (Index j = 0; j < p; ++j) {
        const double norm = X.col(j).norm();
        const double mag = data.X().col(j).cwiseAbs().maxCoeff();
        if (!(norm > 1e-12 * std::max(1.0, mag))) {
            fail(ErrorKind::ConstantColumn, "column " + std::to_string(j) + " has zero variance");
        }
        rec.column_scales[j] = norm / target;
        X.col(j) /= rec.column_scales[j];
    }

    Vector y = data.y();
    if (data.family() == Family::Gaussian) {
        rec.response_center = y.mean();
        y.array() -= rec.response_center;
    }
    return {GroupedDataset(std::move(X), std::move(y), data.partition(), data.family()),
            std::move(rec)};
}

Matrix apply_standardization(const Matrix& X, const StandardizationRecord& record)
{
    require(X.cols() == record.column_centers.size(), ErrorKind::DimensionMismatch,
            "column count does not match standardization record");
    Matrix out = X.rowwise() - record.column_centers.transpose();
    out.array().rowwise() /= record.column_scales.transpose().array();
    return out;
}

Coefficients unstandardize_coefficients(const Vector& beta_std, double intercept_std,
                                        const StandardizationRecord& record)
{
    require(beta_std.size() == record.column_scales.size() &&
                record.column_centers.size() == record.column_scales.size(),
            ErrorKind::DimensionMismatch, "coefficient length does not match standardization record");
    Coefficients out;
    out.beta = beta_std.cwiseQuotient(record.column_scales);
    out.intercept = intercept_std + record.response_center - record.column_centers.dot(out.beta);
    return out;
}

TrainTestSplit split(const GroupedDataset& data, double test_fraction, std::uint64_t seed)
{
    require(test_fraction > 0.0 && test_fraction < 1.0, ErrorKind::InvalidArgument,
            "test fraction must lie in (0, 1)");
    const Index n = data.n();
    const auto n_test = static_cast<Index>(std::llround(test_fraction * double(n)));
    const Index n_train = n - n_test;
    require(n_train >= 2 && n_test >= 1, ErrorKind::TooFewRows,
            "split leaves " + std::to_string(n_train) + " training and " + std::to_string(n_test) +
                " test rows");

    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    Engine eng(seed);
    std::shuffle(perm.begin(), perm.end(), eng);

    std::vector<Index> train(perm.begin(), perm.begin() + n_train);
    std::vector<Index> test(perm.begin() + n_train, perm.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {data.rows(train), data.rows(test), std::move(train), std::move(test)};
}

} // namespace sgs
