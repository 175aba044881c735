#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgs/path.hpp"

namespace sgs {

struct CvSettings {
    int folds = 10;
    int path_length = 20;
    double min_ratio = 0.1;
    std::uint64_t seed = 0;
    unsigned threads = 0; ///< 0: hardware concurrency
    bool standardize = true;
};

struct CvResult {
    std::vector<double> lambdas;
    std::vector<std::size_t> fold_of;  ///< validation fold of every row
    Matrix fold_errors;                ///< path position x fold (MSE or mean deviance)
    Matrix fold_misclassification;    ///< Binomial only; empty otherwise
    Vector mean_error;
    Vector std_error;                  ///< sample sd over folds / sqrt(folds)
    Vector mean_misclassification;     ///< Binomial only
    std::size_t lambda_min_index = 0;
    std::size_t lambda_1se_index = 0;
    std::vector<std::string> fold_failures;
    double chosen_lambda = 0.0;
    SgsSolution chosen; ///< refit on all rows, original scale
};

/// Seeded fold labels: a permutation of the rows, fold = position mod folds.
std::vector<std::size_t> assign_folds(Index n, int folds, std::uint64_t seed);

/// K-fold cross-validation on a shared lambda path with the one-standard-error
/// rule, followed by a refit on the full data at the chosen lambda.
CvResult cross_validate(const GroupedDataset& data, const PenaltySpec& base, const SolverConfig& config,
                        const CvSettings& settings);

/// Index of the largest lambda (smallest path position) whose mean error is
/// within one standard error of the minimum.
std::size_t one_se_index(const Vector& mean_error, const Vector& std_error, std::size_t min_index);

struct NoiseSettings {
    int max_rounds = 100;
    double tolerance = 1e-6; ///< relative change in sigma (scaled SGS)
    bool standardize = true;
    /// AS-SGS only: resolve the vMax/gMax pair to a fixed point each round
    /// instead of the single pass v0 -> w -> v.
    bool fixed_point_sequences = true;
};

struct NoiseEstimate {
    double lambda_hat = 0.0;          ///< objective lambda of the returned fit
    double noise_hat = 0.0;           ///< sigma (scaled SGS) or RSS / (n - |S| - 1) (AS-SGS)
    std::vector<std::size_t> support;
    int iterations = 0;
    bool converged = false;
    bool cycle_detected = false;
    std::vector<double> history;       ///< noise estimate per round
};

struct NoiseResult {
    NoiseEstimate estimate;
    SgsSolution solution; ///< original scale
    PenaltySpec spec;     ///< spec of the returned fit (on the fitting scale)
};

/// Alternate sigma^2 = RSS / n and lambda = sigma / n with the weight
/// sequences of `base` held fixed. Gaussian only.
NoiseResult scaled_sgs(const GroupedDataset& data, const PenaltySpec& base, const SolverConfig& config,
                       const NoiseSettings& settings = {});

/// Adaptively scaled SGS: starting from the empty support, set
/// lambda_hat = RSS_OLS(S) / (n - |S| - 1), regenerate vMax/gMax at lambda_hat,
/// refit, and repeat until the support stops changing. Gaussian only.
NoiseResult adaptively_scaled_sgs(const GroupedDataset& data, double alpha, double q_v, double q_g,
                                  const SolverConfig& config, const NoiseSettings& settings = {});

/// Residual sum of squares of least squares with intercept on the columns in `support`.
double ols_rss(const Matrix& X, const Vector& y, const std::vector<std::size_t>& support);

} // namespace sgs
