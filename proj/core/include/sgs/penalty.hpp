#pragma once

#include <cstddef>

#include "sgs/distributions.hpp"
#include "sgs/partition.hpp"
#include "sgs/prox.hpp"

namespace sgs {

enum class VariableSequence { BH, VMax, VMean };
enum class GroupSequence { GSlopeMax, GSlopeMean, GMax, GMean };

/// Which count divides q_g i in the gMean quantile argument.
enum class GMeanDenominator { Groups, Variables };

/// Everything the SGS penalty needs:
///   lambda * alpha * sum_i v_i |b|_(i) + lambda * (1 - alpha) * sum_g w_g sqrt(p_g) ||b^(g)||.
/// `sequence_lambda` is the lambda at which the lambda-dependent sequences
/// (vMax, gMax, vMean, gMean) were generated; 1 gives the unscaled forms.
struct PenaltySpec {
    double alpha = 0.95;
    double lambda = 1.0;
    double sequence_lambda = 1.0;
    double q_v = 0.1;
    double q_g = 0.1;
    VariableSequence variable_kind = VariableSequence::VMean;
    GroupSequence group_kind = GroupSequence::GSlopeMean;
    SortedWeights v;
    SortedWeights w;

    /// Variable weights as seen by the SLOPE prox: lambda * alpha * v.
    SortedWeights variable_weights() const { return v.scaled(lambda * alpha); }
    /// Group weights as seen by the gSLOPE prox: lambda * (1 - alpha) * w.
    SortedWeights group_weights() const { return w.scaled(lambda * (1.0 - alpha)); }

    PenaltySpec with_lambda(double new_lambda) const;
};

struct PenaltyOptions {
    double sequence_lambda = 1.0;
    /// Alternate gMax/vMax (or the mean forms) until the sequences stop moving
    /// instead of the single pass v0 -> w -> v.
    bool fixed_point = false;
    int fixed_point_rounds = 20;
    double fixed_point_tolerance = 1e-8;
    GMeanDenominator gmean_denominator = GMeanDenominator::Groups;
    const DistributionOracles* oracles = nullptr; ///< nullptr: standard oracles
};

/// Estimated number of active variables in an active group: max(1, floor(alpha * p_j)).
std::size_t active_count_estimate(double alpha, std::size_t group_size);

/// v_i = F_N^-1(1 - q_v i / 2p).
SortedWeights slope_bh_sequence(std::size_t p, double q_v,
                                const DistributionOracles& oracles = DistributionOracles::standard());

/// w_i = max_j F_chi(p_j)^-1(1 - q_g i / m) / sqrt(p_j).
SortedWeights gslope_max_sequence(const GroupPartition& partition, double q_g,
                                  const DistributionOracles& oracles = DistributionOracles::standard());

/// w_i solves (1/m) sum_j F_chi(p_j)(sqrt(p_j) w_i) = 1 - q_g i / m.
SortedWeights gslope_mean_sequence(const GroupPartition& partition, double q_g,
                                   const DistributionOracles& oracles = DistributionOracles::standard());

/// v_i = max_j (F_N^-1(1 - q_v i/2p) - (1/3)(1 - alpha) lambda a_j w_j) / (alpha lambda), clipped at 0.
SortedWeights sgs_vmax_sequence(const GroupPartition& partition, double alpha, double lambda, double q_v,
                                const SortedWeights& w,
                                const DistributionOracles& oracles = DistributionOracles::standard());

/// w_i = max_j (F_FN(p_j)^-1(1 - q_g i/m) - alpha lambda sum_{k <= p_j} v_k) / ((1 - alpha) lambda p_j),
/// clipped at 0.
SortedWeights sgs_gmax_sequence(const GroupPartition& partition, double alpha, double lambda, double q_g,
                                const SortedWeights& v,
                                const DistributionOracles& oracles = DistributionOracles::standard());

/// v_i solves (1/m) sum_j F_N(alpha lambda v_i + (1/3)(1 - alpha) lambda a_j w_j) = 1 - q_v i / 2p.
SortedWeights sgs_vmean_sequence(const GroupPartition& partition, double alpha, double lambda, double q_v,
                                 const SortedWeights& w,
                                 const DistributionOracles& oracles = DistributionOracles::standard());

/// w_i solves (1/m) sum_j F_FN(p_j)((1 - alpha) lambda p_j w_i + alpha lambda sum_{k <= p_j} v_k)
///   = 1 - q_g i / d, with d = m (default) or p.
SortedWeights sgs_gmean_sequence(const GroupPartition& partition, double alpha, double lambda, double q_g,
                                 const SortedWeights& v,
                                 GMeanDenominator denominator = GMeanDenominator::Groups,
                                 const DistributionOracles& oracles = DistributionOracles::standard());

/// Generate v and w for the requested pairing. Mutually dependent kinds are
/// resolved in the fixed order v0 = BH / lambda_s, w = group(v0), v = variable(w).
PenaltySpec build_penalty_spec(const GroupPartition& partition, double alpha, double lambda,
                               double q_v, double q_g, VariableSequence variable_kind,
                               GroupSequence group_kind, const PenaltyOptions& options = {});

/// Value of the SGS penalty at `beta` (including the lambda factor).
double penalty_value(const Eigen::Ref<const Vector>& beta, const PenaltySpec& spec,
                     const GroupPartition& partition);

} // namespace sgs
