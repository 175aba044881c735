#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <sgs/penalty.hpp>
#include <sgs/types.hpp>

namespace sgs::cli {

struct ProblemOptions {
    std::string x, y, groups;
    Family family = Family::Gaussian;
    double alpha = 0.95;
    double q_v = 0.1;
    double q_g = 0.1;
    VariableSequence vkind = VariableSequence::VMean;
    GroupSequence gkind = GroupSequence::GSlopeMean;
    double lambda = 0.0; ///< 0: 1/n
    double tolerance = 1e-4;
    int max_iterations = 1000;
    bool no_standardize = false;
    bool no_intercept = false;
    unsigned threads = 0;
    std::uint64_t seed = 0;
};

struct PathOptions {
    int length = 20;
    double min_ratio = 0.1;
};

struct CvOptions {
    int folds = 10;
};

enum class NoiseMethod { Scaled, Adaptive };

struct NoiseOptions {
    NoiseMethod method = NoiseMethod::Adaptive;
    int max_rounds = 100;
    double tolerance = 1e-6;
    bool one_pass = false; ///< adaptive: single-pass sequence pairing
};

enum class PenaltyKind { BH, GSlopeMax, GSlopeMean, VMax, VMean, GMax, GMean };

struct PenaltyCliOptions {
    PenaltyKind kind = PenaltyKind::VMean;
    std::size_t p = 0; ///< 0: taken from the group layout
    std::string groups;
    double alpha = 0.95;
    double q = 0.0;    ///< sets both levels when positive
    double q_v = 0.1;
    double q_g = 0.1;
    VariableSequence vkind = VariableSequence::VMean;
    GroupSequence gkind = GroupSequence::GSlopeMean;
    double sequence_lambda = 1.0;
    bool fixed_point = false;
    GMeanDenominator gmean_denominator = GMeanDenominator::Groups;
};

struct SimulateOptions {
    std::string preset;
    int replicates = 0; ///< 0: preset default
    double q = 0.1;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

void run_fit(const ProblemOptions& opt, const std::filesystem::path& out);
void run_path(const ProblemOptions& opt, const PathOptions& path, const std::filesystem::path& out);
void run_cv(const ProblemOptions& opt, const PathOptions& path, const CvOptions& cv,
            const std::filesystem::path& out);
void run_noise(const ProblemOptions& opt, const NoiseOptions& noise, const std::filesystem::path& out);
void run_penalties(const PenaltyCliOptions& opt, const std::filesystem::path& out);
void run_simulate(const SimulateOptions& opt, const std::filesystem::path& out);

/// Names accepted by `simulate --preset`.
const std::vector<std::string>& simulation_presets();

/// `evenSxM`, `unevenAtoBxM`, or empty when `spec` is not a layout name.
std::vector<std::size_t> parse_group_layout(const std::string& spec);

} // namespace sgs::cli
