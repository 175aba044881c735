#pragma once

#include <cstddef>
#include <vector>

#include "sgs/dataset.hpp"
#include "sgs/loss.hpp"
#include "sgs/penalty.hpp"

namespace sgs {

/// How the first step-size of a fit is chosen.
enum class StepInit {
    Lipschitz, ///< 1 / L with L from power iteration on the loss Hessian bound
    Probe,     ///< finite-difference probe (see auto_initial_step)
    Fixed,     ///< SolverConfig::gamma0
};

struct SolverConfig {
    StepInit step_init = StepInit::Lipschitz;
    double gamma0 = 1.0;
    double eta = 0.7;
    double tolerance = 1e-4;
    int max_iterations = 1000;
    int max_backtracks = 200;
    bool fit_intercept = true;

    void validate() const;
};

/// Iterate state, enough to warm-start another fit.
struct AtosState {
    Vector z;
    Vector u;
    double gamma = 0.0;
};

struct SgsSolution {
    Vector beta;
    double intercept = 0.0;
    std::vector<std::size_t> selected_variables;
    std::vector<std::size_t> selected_groups;
    int iterations = 0;
    bool converged = false;
    bool backtracking_exhausted = false;
    double final_residual = 0.0;
    double objective = 0.0;
    AtosState state; ///< (z, u, gamma) after the last iteration, in fitting coordinates
};

/// gamma_0 = 4 (f(z0) - f(z~)) / ||grad f(z0)||^2 with z~ = z0 - eps grad f(z0),
/// eps starting at 1e-3 and shrinking tenfold until f(z~) <= f(z0).
/// Throws ZeroGradient when grad f(z0) = 0.
double auto_initial_step(const Loss& loss, const Vector& z0);

/// Fit the SGS objective at spec.lambda by adaptive three-operator splitting.
/// `warm` supplies starting (z, u); its length must match the fitting dimension
/// (p, or p + 1 for a Binomial fit with intercept).
SgsSolution atos_fit(const GroupedDataset& data, const PenaltySpec& spec, const SolverConfig& config,
                     const AtosState* warm = nullptr);

/// Full objective (loss + penalty) at (beta, intercept) on the given data.
/// For the Gaussian family the intercept enters the residual directly.
double objective_value(const GroupedDataset& data, const PenaltySpec& spec, const Vector& beta,
                       double intercept);

/// Gaussian: X beta + intercept. Binomial: class-1 probabilities.
Vector predict(const SgsSolution& solution, const Matrix& X_new, Family family);

/// Hard labels at threshold 0.5 (Binomial).
std::vector<int> predict_labels(const SgsSolution& solution, const Matrix& X_new);

/// Indices of non-zero entries and of groups with a non-zero entry.
std::vector<std::size_t> support_of(const Vector& beta);
std::vector<std::size_t> group_support_of(const Vector& beta, const GroupPartition& partition);

} // namespace sgs
