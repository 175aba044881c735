#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgs/solver.hpp"

namespace sgs {

/// Log-linear grid from lambda_max down to min_ratio * lambda_max.
std::vector<double> log_linear_path(double lambda_max, int path_length, double min_ratio);

/// Smallest lambda (to about 0.1% relative) at which the fit is the null
/// model. Starts from the dual-norm bound min(J_v*(g)/alpha, J_w*(g)/(1-alpha))
/// of the gradient g at the null fit, which certifies optimality of zero, and
/// narrows it by log-scale bisection using actual fits.
double lambda_max(const GroupedDataset& data, const PenaltySpec& base, const SolverConfig& config);

/// Dual-norm bound alone (no fits).
double lambda_max_bound(const GroupedDataset& data, const PenaltySpec& base, bool fit_intercept);

struct PathFit {
    double lambda = 0.0;
    SgsSolution solution;
};

struct PathResult {
    double lambda_max = 0.0;
    std::vector<PathFit> fits;
    /// Path positions where the support shrank (logged, not fatal).
    std::vector<std::string> diagnostics;
};

/// Warm-started fits along the log-linear path. The weight sequences of
/// `base` are held fixed; only the objective lambda changes.
PathResult fit_path(const GroupedDataset& data, const PenaltySpec& base, int path_length, double min_ratio,
                    const SolverConfig& config, std::optional<double> lambda_max_override = std::nullopt);

/// Fit along an explicit, decreasing lambda grid.
PathResult fit_path_at(const GroupedDataset& data, const PenaltySpec& base, const std::vector<double>& lambdas,
                       const SolverConfig& config);

} // namespace sgs
