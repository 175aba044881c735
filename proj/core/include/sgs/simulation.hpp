#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgs/metrics.hpp"
#include "sgs/rng.hpp"
#include "sgs/selection.hpp"

namespace sgs {

/// `count` groups of equal `size`.
std::vector<std::size_t> even_group_sizes(std::size_t count, std::size_t size);
/// `count` groups whose sizes cycle through min_size, ..., max_size.
std::vector<std::size_t> cycling_group_sizes(std::size_t min_size, std::size_t max_size, std::size_t count);

struct SimulatedData {
    GroupedDataset data;
    Vector true_beta;
    double sigma = 1.0;
};

/// Identity design, y = beta + N(0, 1) noise.
struct OrthogonalScenario {
    std::vector<std::size_t> group_sizes = even_group_sizes(200, 5);
    double group_sparsity = 0.9;          ///< proportion of inactive groups
    double within_active_fraction = 0.6;  ///< active share inside an active group
    double signal_scale = 5.0;            ///< beta_i = scale * delta * sqrt(2 log p)
    bool stratify_by_size = true;
    std::uint64_t seed = 0;

    std::size_t p() const;
};

enum class SignalKind {
    Fixed,        ///< every active coefficient equals signal_value
    RandomNormal, ///< N(0, signal_value^2)
};

/// Rows i.i.d. N(0, Sigma), Sigma block-diagonal with within-group correlation rho.
struct CorrelatedScenario {
    Index n = 200;
    std::vector<std::size_t> group_sizes = cycling_group_sizes(3, 7, 160);
    double rho = 0.3;
    SignalKind signal = SignalKind::Fixed;
    double signal_value = 5.0;
    double snr = 6.0;
    double group_sparsity = 0.92;
    double within_active_fraction = 0.6;
    bool stratify_by_size = true;
    std::uint64_t seed = 0;

    std::size_t p() const;
};

/// Active-variable mask: round((1 - group_sparsity) m) active groups, each with
/// max(1, floor(fraction * p_g)) active members. With stratification the active
/// groups are spread over the distinct group sizes in proportion to their counts.
std::vector<bool> draw_active_mask(const GroupPartition& partition, double group_sparsity, double fraction,
                                   bool stratify_by_size, Engine& rng);

SimulatedData generate_orthogonal(const OrthogonalScenario& scenario);
SimulatedData generate_correlated(const CorrelatedScenario& scenario);

struct MetricSummary {
    double mean = 0.0;
    double se = 0.0; ///< sample sd / sqrt(count)
};

MetricSummary summarize(const std::vector<double>& values);

/// Names of the per-replicate metrics, in output order.
const std::vector<std::string>& metric_names();
/// Values in the order of metric_names().
std::vector<double> metric_values(const SelectionMetrics& m);

struct ReplicateRecord {
    std::string model;
    std::size_t point = 0;     ///< index into SimulationReport::points
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    bool ok = true;            ///< false if the fit threw
    std::string failure;
    bool converged = true;
    SelectionMetrics metrics;
    std::size_t p0 = 0;        ///< inactive variables in the truth
    std::size_t m0 = 0;        ///< inactive groups in the truth
};

struct PointSummary {
    std::string model;
    double q = 0.0;
    double group_sparsity = 0.0;
    double variable_sparsity = 0.0;
    std::size_t replicates = 0;
    std::size_t failures = 0;
    std::vector<MetricSummary> metrics; ///< aligned with metric_names()
    double vfdr_bound = 0.0;            ///< q_v * mean(p0) / p
    double gfdr_bound = 0.0;            ///< q_g * mean(m0) / m
};

struct SimulationReport {
    std::string kind;
    std::uint64_t seed = 0;
    std::vector<PointSummary> points;
    std::vector<ReplicateRecord> replicates;

    const MetricSummary& metric(std::size_t point, const std::string& name) const;
};

struct FdrExperimentConfig {
    OrthogonalScenario scenario;
    std::vector<double> group_sparsities{1.0, 0.9, 0.75, 0.59};
    std::vector<double> q_levels{0.1};
    VariableSequence variable_kind = VariableSequence::VMax;
    GroupSequence group_kind = GroupSequence::GMax;
    double alpha = 0.6;
    int replicates = 100;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    SolverConfig solver;
};

/// Orthogonal experiment at lambda = 1/n; one point per (q, sparsity) pair.
/// Data for a given (sparsity, replicate) pair is shared across q levels.
SimulationReport run_fdr_experiment(const FdrExperimentConfig& config);

enum class SelectionMethod { FixedLambda, CvOneSe, Scaled, AdaptivelyScaled };

struct ModelConfig {
    std::string name = "sgs";
    double alpha = 0.95;
    double q_v = 0.1;
    double q_g = 0.1;
    VariableSequence variable_kind = VariableSequence::VMean;
    GroupSequence group_kind = GroupSequence::GSlopeMean;
    SelectionMethod method = SelectionMethod::CvOneSe;
    double lambda = 0.0; ///< FixedLambda only; 0 means 1/n
    CvSettings cv;
    NoiseSettings noise;
    SolverConfig solver;
};

struct SelectionStudyConfig {
    CorrelatedScenario scenario;
    std::vector<ModelConfig> models;
    int replicates = 50;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

/// Every model is fitted to the same replicate datasets.
SimulationReport run_selection_study(const SelectionStudyConfig& config);

/// Fit one model configuration to a dataset (used by the selection study).
SgsSolution fit_model(const ModelConfig& model, const GroupedDataset& data, std::uint64_t seed);

} // namespace sgs
