#pragma once

#include "sgs/types.hpp"

namespace sgs {

/// Smooth part of the SGS objective.
///
/// Gaussian: ||y - X b||^2 / (2n).
/// Binomial: (1/n) sum_i [log(1 + exp(eta_i)) - y_i eta_i], eta = X b (+ b0).
///
/// With `intercept_coordinate` (Binomial only) the parameter vector has
/// length p + 1 and its last entry is the unpenalized intercept. The loss
/// keeps references to X and y; they must outlive it.
class Loss {
public:
    Loss(const Matrix& X, const Vector& y, Family family, bool intercept_coordinate = false);

    Family family() const noexcept { return family_; }
    bool has_intercept_coordinate() const noexcept { return intercept_; }
    /// Length of the parameter vector: p, or p + 1 with an intercept coordinate.
    Index dim() const noexcept { return X_.cols() + (intercept_ ? 1 : 0); }
    Index n() const noexcept { return X_.rows(); }

    Vector linear_predictor(const Vector& theta) const;
    double value(const Vector& theta) const;
    Vector gradient(const Vector& theta) const;
    /// Value and gradient sharing one pass over X.
    double value_and_gradient(const Vector& theta, Vector& grad) const;

    /// Power-iteration estimate of the gradient's Lipschitz constant.
    double lipschitz_estimate(int iterations = 60) const;

private:
    const Matrix& X_;
    const Vector& y_;
    Family family_;
    bool intercept_;
};

/// log(1 + exp(x)) without overflow.
double softplus(double x) noexcept;
double sigmoid(double x) noexcept;

} // namespace sgs
