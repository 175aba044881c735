#include "sgs/loss.hpp"

#include <cmath>

#include "sgs/error.hpp"

namespace sgs {

double softplus(double x) noexcept
{
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) noexcept
{
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Loss::Loss(const Matrix& X, const Vector& y, Family family, bool intercept_coordinate)
    : X_(X), y_(y), family_(family), intercept_(intercept_coordinate)
{
    require(X.rows() == y.size(), ErrorKind::DimensionMismatch, "X rows must equal the length of y");
    require(X.rows() >= 1, ErrorKind::TooFewRows, "loss needs at least one observation");
    require(!(intercept_coordinate && family == Family::Gaussian), ErrorKind::InvalidArgument,
            "the Gaussian loss handles its intercept by centring");
}

Vector Loss::linear_predictor(const Vector& theta) const
{
    require(theta.size() == dim(), ErrorKind::DimensionMismatch, "parameter length does not match the loss");
    Vector eta = X_ * theta.head(X_.cols());
    if (intercept_) eta.array() += theta[X_.cols()];
    return eta;
}

double Loss::value(const Vector& theta) const
{
    const Vector eta = linear_predictor(theta);
    const double n = double(X_.rows());
    double out = 0.0;
    if (family_ == Family::Gaussian) {
        out = (y_ - eta).squaredNorm() / (2.0 * n);
    } else {
        for (Index i = 0; i < eta.size(); ++i) out += softplus(eta[i]) - y_[i] * eta[i];
        out /= n;
    }
    return out;
}

double Loss::value_and_gradient(const Vector& theta, Vector& grad) const
{
    const Vector eta = linear_predictor(theta);
    const double n = double(X_.rows());
    const Index p = X_.cols();
    Vector r(eta.size()); // d loss_i / d eta_i, times n
    double out = 0.0;
    if (family_ == Family::Gaussian) {
        r = eta - y_;
        out = r.squaredNorm() / (2.0 * n);
    } else {
        for (Index i = 0; i < eta.size(); ++i) {
            out += softplus(eta[i]) - y_[i] * eta[i];
            r[i] = sigmoid(eta[i]) - y_[i];
        }
        out /= n;
    }
    grad.resize(dim());
    grad.head(p).noalias() = X_.transpose() * r / n;
    if (intercept_) grad[p] = r.sum() / n;
    return out;
}

Vector Loss::gradient(const Vector& theta) const
{
    Vector g;
    value_and_gradient(theta, g);
    return g;
}

double Loss::lipschitz_estimate(int iterations) const
{
    const Index p = X_.cols();
    const Index d = dim();
    const double n = double(X_.rows());
    // Deterministic, non-degenerate start.
    Vector x(d);
    for (Index j = 0; j < d; ++j) x[j] = 1.0 + 0.01 * double(j % 7);
    x.normalize();
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Vector Xv = X_ * x.head(p);
        if (intercept_) Xv.array() += x[p];
        Vector next(d);
        next.head(p).noalias() = X_.transpose() * Xv;
        if (intercept_) next[p] = Xv.sum();
        const double norm = next.norm();
        if (norm == 0.0) break;
        const double prev = estimate;
        estimate = norm;
        x = next / norm;
        if (it > 5 && std::abs(estimate - prev) <= 1e-10 * estimate) break;
    }
    estimate /= n;
    if (family_ == Family::Binomial) estimate /= 4.0;
    return estimate;
}

} // namespace sgs
