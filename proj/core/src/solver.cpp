#include "sgs/solver.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "sgs/error.hpp"
#include "sgs/prox.hpp"

namespace sgs {

void SolverConfig::validate() const
{
    require(eta > 0.0 && eta < 1.0, ErrorKind::InvalidArgument, "eta must lie in (0, 1)");
    require(tolerance > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
    require(max_iterations >= 1, ErrorKind::InvalidArgument, "max_iterations must be at least 1");
    require(max_backtracks >= 1, ErrorKind::InvalidArgument, "max_backtracks must be at least 1");
    require(step_init != StepInit::Fixed || (gamma0 > 0.0 && std::isfinite(gamma0)),
            ErrorKind::InvalidArgument, "gamma0 must be positive");
}

double auto_initial_step(const Loss& loss, const Vector& z0)
{
    Vector grad;
    const double f0 = loss.value_and_gradient(z0, grad);
    const double g2 = grad.squaredNorm();
    require(g2 > 0.0, ErrorKind::ZeroGradient, "gradient vanishes at the starting point");
    double eps = 1e-3;
    Vector probe = z0 - eps * grad;
    double fp = loss.value(probe);
    for (int k = 0; k < 60 && !(fp <= f0); ++k) {
        eps *= 0.1;
        probe = z0 - eps * grad;
        fp = loss.value(probe);
    }
    const double gamma = 4.0 * (f0 - fp) / g2;
    require(gamma > 0.0 && std::isfinite(gamma), ErrorKind::ZeroGradient,
            "probe step produced no decrease");
    return gamma;
}

std::vector<std::size_t> support_of(const Vector& beta)
{
    std::vector<std::size_t> out;
    for (Index i = 0; i < beta.size(); ++i)
        if (beta[i] != 0.0) out.push_back(std::size_t(i));
    return out;
}

std::vector<std::size_t> group_support_of(const Vector& beta, const GroupPartition& partition)
{
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < partition.m(); ++g) {
        for (auto i : partition.members(g)) {
            if (beta[Index(i)] != 0.0) {
                out.push_back(g);
                break;
            }
        }
    }
    return out;
}

double objective_value(const GroupedDataset& data, const PenaltySpec& spec, const Vector& beta, double intercept)
{
    require(beta.size() == data.p(), ErrorKind::DimensionMismatch, "beta length must equal p");
    const Index p = data.p();
    Vector theta;
    double loss_value = 0.0;
    if (data.family() == Family::Gaussian) {
        Vector r = data.y() - data.X() * beta;
        r.array() -= intercept;
        loss_value = r.squaredNorm() / (2.0 * double(data.n()));
    } else {
        theta.resize(p + 1);
        theta.head(p) = beta;
        theta[p] = intercept;
        loss_value = Loss(data.X(), data.y(), data.family(), true).value(theta);
    }
    return loss_value + penalty_value(beta, spec, data.partition());
}

namespace {

bool is_centred(const Matrix& X, const Vector& y)
{
    const double scale = 1.0 + X.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * scale * std::sqrt(double(X.rows()));
    if (std::abs(y.mean()) > 1e-12 * (1.0 + y.cwiseAbs().maxCoeff())) return false;
    return (X.colwise().mean().cwiseAbs().array() <= tol).all();
}

} // namespace

SgsSolution atos_fit(const GroupedDataset& data, const PenaltySpec& spec, const SolverConfig& config,
                     const AtosState* warm)
{
    config.validate();
    const GroupPartition& partition = data.partition();
    const Index p = data.p();
    require(spec.v.size() == p, ErrorKind::LengthMismatch, "variable weights must have length p");
    require(spec.w.size() == Index(partition.m()), ErrorKind::LengthMismatch,
            "group weights must have one entry per group");

    const bool gaussian = data.family() == Family::Gaussian;
    const bool binomial_intercept = !gaussian && config.fit_intercept;

    // Gaussian intercept: fit on centred copies unless the data already is.
    std::optional<Matrix> Xc;
    std::optional<Vector> yc;
    Vector x_means = Vector::Zero(p);
    double y_mean = 0.0;
    if (gaussian && config.fit_intercept && !is_centred(data.X(), data.y())) {
        x_means = data.X().colwise().mean().transpose();
        y_mean = data.y().mean();
        Xc = data.X().rowwise() - x_means.transpose();
        yc = data.y().array() - y_mean;
    }
    const Matrix& X = Xc ? *Xc : data.X();
    const Vector& y = yc ? *yc : data.y();
    const Loss loss(X, y, data.family(), binomial_intercept);
    const Index d = loss.dim();

    const SortedWeights v_weights = spec.variable_weights();
    const SortedWeights w_weights = spec.group_weights();
    const GroupScaling scaling(partition);

    Vector z = Vector::Zero(d);
    Vector u = Vector::Zero(d);
    if (warm) {
        require(warm->z.size() == d && warm->u.size() == d, ErrorKind::DimensionMismatch,
                "warm start has the wrong dimension");
        z = warm->z;
        u = warm->u;
    }

    double gamma = 1.0;
    switch (config.step_init) {
    case StepInit::Fixed:
        gamma = config.gamma0;
        break;
    case StepInit::Probe:
        try {
            gamma = auto_initial_step(loss, z);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ZeroGradient) throw;
            gamma = 1.0;
        }
        break;
    case StepInit::Lipschitz: {
        const double L = loss.lipschitz_estimate();
        gamma = L > 0.0 ? 1.0 / L : 1.0;
        break;
    }
    }

    SgsSolution sol;
    Vector grad(d);
    Vector b(d);
    Vector z_new(d);
    double residual = std::numeric_limits<double>::infinity();
    int t = 0;
    for (; t < config.max_iterations; ++t) {
        const double fz = loss.value_and_gradient(z, grad);
        require(std::isfinite(fz), ErrorKind::NumericalOverflow, "loss is not finite at the current iterate");

        bool accepted = false;
        for (int k = 0; k < config.max_backtracks; ++k) {
            const Vector step = z - gamma * u - gamma * grad;
            b.head(p) = prox_slope(step.head(p), v_weights.scaled(gamma));
            if (binomial_intercept) b[p] = step[p];
            const Vector diff = b - z;
            const double fb = loss.value(b);
            const double q = fz + grad.dot(diff) + diff.squaredNorm() / (2.0 * gamma);
            if (std::isfinite(fb) && fb <= q + 1e-14 * std::abs(fz)) {
                accepted = true;
                break;
            }
            gamma *= config.eta;
        }
        if (!accepted) {
            sol.backtracking_exhausted = true;
            break;
        }

        z_new.head(p) = prox_gslope_transformed(b.head(p), u.head(p), gamma, w_weights, scaling, partition);
        if (binomial_intercept) z_new[p] = b[p] + gamma * u[p];
        u += (b - z_new) / gamma;
        residual = (b - z).norm();
        z.swap(z_new);
        if (residual <= config.tolerance) {
            sol.converged = true;
            ++t;
            break;
        }
    }

    // b carries the variable zeros, z the group zeros.
    Vector beta = b.head(p);
    for (Index i = 0; i < p; ++i)
        if (z[i] == 0.0) beta[i] = 0.0;

    sol.iterations = t;
    sol.final_residual = residual;
    sol.state = AtosState{z, u, gamma};
    if (gaussian) {
        sol.intercept = config.fit_intercept ? y_mean - x_means.dot(beta) : 0.0;
    } else {
        sol.intercept = binomial_intercept ? b[p] : 0.0;
    }
    sol.beta = std::move(beta);
    sol.selected_variables = support_of(sol.beta);
    sol.selected_groups = group_support_of(sol.beta, partition);
    sol.objective = objective_value(data, spec, sol.beta, sol.intercept);
    return sol;
}

Vector predict(const SgsSolution& solution, const Matrix& X_new, Family family)
{
    require(X_new.cols() == solution.beta.size(), ErrorKind::DimensionMismatch,
            "new data has the wrong number of columns");
    Vector eta = X_new * solution.beta;
    eta.array() += solution.intercept;
    if (family == Family::Binomial)
        for (Index i = 0; i < eta.size(); ++i) eta[i] = sigmoid(eta[i]);
    return eta;
}

std::vector<int> predict_labels(const SgsSolution& solution, const Matrix& X_new)
{
    const Vector prob = predict(solution, X_new, Family::Binomial);
    std::vector<int> out(static_cast<std::size_t>(prob.size()));
    for (Index i = 0; i < prob.size(); ++i) out[std::size_t(i)] = prob[i] >= 0.5 ? 1 : 0;
    return out;
}

} // namespace sgs
