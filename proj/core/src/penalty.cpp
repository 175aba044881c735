#include "sgs/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sgs/error.hpp"

namespace sgs {
namespace {

void check_q(double q, const char* name)
{
    require(q > 0.0 && q < 1.0 && std::isfinite(q), ErrorKind::InvalidFdrLevel,
            std::string(name) + " must lie in (0, 1)");
}

void check_lambda(double lambda)
{
    require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::InvalidArgument, "lambda must be positive");
}

// Clip at zero and remove bisection-level wiggles so the result is a valid
// SortedWeights.
SortedWeights finish(Vector raw)
{
    double running = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < raw.size(); ++i) {
        double x = std::max(raw[i], 0.0);
        running = std::min(running, x);
        raw[i] = running;
    }
    return SortedWeights(std::move(raw));
}

// Root of the decreasing function `sf` at level `tail`, searched on [0, inf).
// Returns 0 when sf(0) <= tail (the root would be negative and is clipped).
template <class F>
double solve_decreasing(const F& sf, double tail, double start_hi)
{
    if (sf(0.0) <= tail) return 0.0;
    double lo = 0.0;
    double hi = std::max(2.0 * start_hi, 1e-3);
    int doublings = 0;
    while (sf(hi) > tail) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 60 || !std::isfinite(hi))
            fail(ErrorKind::RootBracketFailure, "could not bracket the averaged distribution root");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sf(mid) > tail)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Distinct group sizes with their multiplicities.
std::vector<std::pair<std::size_t, std::size_t>> size_counts(const GroupPartition& partition)
{
    std::map<std::size_t, std::size_t> counts;
    for (auto s : partition.sizes()) ++counts[s];
    return {counts.begin(), counts.end()};
}

// Offsets (1/3)(1 - alpha) a_j w~_j for the variable sequences, collapsed to
// distinct values with counts. w~ = lambda * w.
std::vector<std::pair<double, std::size_t>> variable_offsets(const GroupPartition& partition, double alpha,
                                                             double lambda, const SortedWeights& w)
{
    require(static_cast<std::size_t>(w.size()) == partition.m(), ErrorKind::LengthMismatch,
            "group weight vector length must equal the number of groups");
    std::map<double, std::size_t> counts;
    for (std::size_t j = 0; j < partition.m(); ++j) {
        const double a = double(active_count_estimate(alpha, partition.size(j)));
        ++counts[(1.0 - alpha) * a * lambda * w[Index(j)] / 3.0];
    }
    return {counts.begin(), counts.end()};
}

// alpha * lambda * (v_1 + ... + v_k) for each distinct group size k.
std::vector<double> top_sums(const std::vector<std::pair<std::size_t, std::size_t>>& sizes, double alpha,
                             double lambda, const SortedWeights& v, std::size_t p)
{
    require(static_cast<std::size_t>(v.size()) == p, ErrorKind::LengthMismatch,
            "variable weight vector length must equal p");
    std::vector<double> out;
    out.reserve(sizes.size());
    for (auto [k, count] : sizes) {
        (void)count;
        out.push_back(alpha * lambda * v.values().head(Index(k)).sum());
    }
    return out;
}

void check_variable_alpha(double alpha)
{
    require(alpha > 0.0 && alpha <= 1.0, ErrorKind::AlphaOutOfRange,
            "variable sequences of this kind need 0 < alpha <= 1");
}

void check_group_alpha(double alpha)
{
    require(alpha >= 0.0 && alpha < 1.0, ErrorKind::AlphaOutOfRange,
            "group sequences of this kind need 0 <= alpha < 1");
}

} // namespace

PenaltySpec PenaltySpec::with_lambda(double new_lambda) const
{
    check_lambda(new_lambda);
    PenaltySpec out = *this;
    out.lambda = new_lambda;
    return out;
}

std::size_t active_count_estimate(double alpha, std::size_t group_size)
{
    const auto a = static_cast<std::size_t>(std::floor(alpha * double(group_size) + 1e-9));
    return std::max<std::size_t>(1, a);
}

SortedWeights slope_bh_sequence(std::size_t p, double q_v, const DistributionOracles& oracles)
{
    require(p >= 1, ErrorKind::InvalidArgument, "p must be at least 1");
    check_q(q_v, "q_v");
    Vector v = Vector::Zero(Index(p));
    for (std::size_t i = 0; i < p; ++i)
        v[Index(i)] = oracles.normal_upper_quantile(q_v * double(i + 1) / (2.0 * double(p)));
    return finish(std::move(v));
}

SortedWeights gslope_max_sequence(const GroupPartition& partition, double q_g, const DistributionOracles& oracles)
{
    check_q(q_g, "q_g");
    const std::size_t m = partition.m();
    const auto sizes = size_counts(partition);
    Vector w = Vector::Zero(Index(m));
    for (std::size_t i = 0; i < m; ++i) {
        const double tail = q_g * double(i + 1) / double(m);
        double best = -std::numeric_limits<double>::infinity();
        for (auto [k, count] : sizes) {
            (void)count;
            best = std::max(best, oracles.chi_upper_quantile(tail, int(k)) / std::sqrt(double(k)));
        }
        w[Index(i)] = best;
    }
    return finish(std::move(w));
}

SortedWeights gslope_mean_sequence(const GroupPartition& partition, double q_g, const DistributionOracles& oracles)
{
    check_q(q_g, "q_g");
    const std::size_t m = partition.m();
    const auto sizes = size_counts(partition);
    Vector w = Vector::Zero(Index(m));
    for (std::size_t i = 0; i < m; ++i) {
        const double tail = q_g * double(i + 1) / double(m);
        double hi = 0.0;
        for (auto [k, count] : sizes) {
            (void)count;
            hi = std::max(hi, oracles.chi_upper_quantile(tail, int(k)) / std::sqrt(double(k)));
        }
        auto sf = [&](double x) {
            double acc = 0.0;
            for (auto [k, count] : sizes)
                acc += double(count) * oracles.chi_sf(std::sqrt(double(k)) * x, int(k));
            return acc / double(m);
        };
        w[Index(i)] = solve_decreasing(sf, tail, hi);
    }
    return finish(std::move(w));
}

SortedWeights sgs_vmax_sequence(const GroupPartition& partition, double alpha, double lambda, double q_v,
                                const SortedWeights& w, const DistributionOracles& oracles)
{
    check_variable_alpha(alpha);
    check_lambda(lambda);
    check_q(q_v, "q_v");
    const std::size_t p = partition.p();
    const auto offsets = variable_offsets(partition, alpha, lambda, w);
    const double smallest = offsets.front().first;
    Vector v = Vector::Zero(Index(p));
    for (std::size_t i = 0; i < p; ++i) {
        const double z = oracles.normal_upper_quantile(q_v * double(i + 1) / (2.0 * double(p)));
        v[Index(i)] = (z - smallest) / (alpha * lambda);
    }
    return finish(std::move(v));
}

SortedWeights sgs_gmax_sequence(const GroupPartition& partition, double alpha, double lambda, double q_g,
                                const SortedWeights& v, const DistributionOracles& oracles)
{
    check_group_alpha(alpha);
    check_lambda(lambda);
    check_q(q_g, "q_g");
    const std::size_t m = partition.m();
    const auto sizes = size_counts(partition);
    const auto sums = top_sums(sizes, alpha, lambda, v, partition.p());
    Vector w = Vector::Zero(Index(m));
    for (std::size_t i = 0; i < m; ++i) {
        const double tail = q_g * double(i + 1) / double(m);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < sizes.size(); ++s) {
            const auto k = sizes[s].first;
            const double quant = oracles.folded_sum_upper_quantile(tail, int(k));
            best = std::max(best, (quant - sums[s]) / ((1.0 - alpha) * lambda * double(k)));
        }
        w[Index(i)] = best;
    }
    return finish(std::move(w));
}

SortedWeights sgs_vmean_sequence(const GroupPartition& partition, double alpha, double lambda, double q_v,
                                 const SortedWeights& w, const DistributionOracles& oracles)
{
    check_variable_alpha(alpha);
    check_lambda(lambda);
    check_q(q_v, "q_v");
    const std::size_t p = partition.p();
    const double m = double(partition.m());
    const auto offsets = variable_offsets(partition, alpha, lambda, w);
    const double smallest = offsets.front().first;
    Vector v = Vector::Zero(Index(p));
    // Solved in t = lambda * v, then rescaled.
    for (std::size_t i = 0; i < p; ++i) {
        const double tail = q_v * double(i + 1) / (2.0 * double(p));
        const double z = oracles.normal_upper_quantile(tail);
        auto sf = [&](double t) {
            double acc = 0.0;
            for (auto [c, count] : offsets) acc += double(count) * oracles.normal_sf(alpha * t + c);
            return acc / m;
        };
        v[Index(i)] = solve_decreasing(sf, tail, std::max(0.0, (z - smallest) / alpha)) / lambda;
    }
    return finish(std::move(v));
}

SortedWeights sgs_gmean_sequence(const GroupPartition& partition, double alpha, double lambda, double q_g,
                                 const SortedWeights& v, GMeanDenominator denominator,
                                 const DistributionOracles& oracles)
{
    check_group_alpha(alpha);
    check_lambda(lambda);
    check_q(q_g, "q_g");
    const std::size_t m = partition.m();
    const double d = denominator == GMeanDenominator::Groups ? double(m) : double(partition.p());
    const auto sizes = size_counts(partition);
    const auto sums = top_sums(sizes, alpha, lambda, v, partition.p());
    Vector w = Vector::Zero(Index(m));
    for (std::size_t i = 0; i < m; ++i) {
        const double tail = q_g * double(i + 1) / d;
        double hi = 0.0;
        for (std::size_t s = 0; s < sizes.size(); ++s) {
            const auto k = sizes[s].first;
            const double quant = oracles.folded_sum_upper_quantile(tail, int(k));
            hi = std::max(hi, (quant - sums[s]) / ((1.0 - alpha) * double(k)));
        }
        auto sf = [&](double t) {
            double acc = 0.0;
            for (std::size_t s = 0; s < sizes.size(); ++s) {
                const auto [k, count] = sizes[s];
                acc += double(count) * oracles.folded_sum_sf((1.0 - alpha) * double(k) * t + sums[s], int(k));
            }
            return acc / double(m);
        };
        w[Index(i)] = solve_decreasing(sf, tail, hi) / lambda;
    }
    return finish(std::move(w));
}

PenaltySpec build_penalty_spec(const GroupPartition& partition, double alpha, double lambda, double q_v,
                               double q_g, VariableSequence variable_kind, GroupSequence group_kind,
                               const PenaltyOptions& options)
{
    require(alpha >= 0.0 && alpha <= 1.0 && std::isfinite(alpha), ErrorKind::AlphaOutOfRange,
            "alpha must lie in [0, 1]");
    check_lambda(lambda);
    check_lambda(options.sequence_lambda);
    check_q(q_v, "q_v");
    check_q(q_g, "q_g");
    const auto& oracles = options.oracles ? *options.oracles : DistributionOracles::standard();
    const double ls = options.sequence_lambda;

    const SortedWeights bh = slope_bh_sequence(partition.p(), q_v, oracles);
    const bool v_dependent = variable_kind != VariableSequence::BH && alpha > 0.0;
    const bool w_dependent =
        (group_kind == GroupSequence::GMax || group_kind == GroupSequence::GMean) && alpha < 1.0;

    auto make_w = [&](const SortedWeights& v) {
        switch (group_kind) {
        case GroupSequence::GSlopeMax:
            return gslope_max_sequence(partition, q_g, oracles);
        case GroupSequence::GSlopeMean:
            return gslope_mean_sequence(partition, q_g, oracles);
        case GroupSequence::GMax:
            return w_dependent ? sgs_gmax_sequence(partition, alpha, ls, q_g, v, oracles)
                               : gslope_max_sequence(partition, q_g, oracles);
        case GroupSequence::GMean:
            return w_dependent
                       ? sgs_gmean_sequence(partition, alpha, ls, q_g, v, options.gmean_denominator, oracles)
                       : gslope_mean_sequence(partition, q_g, oracles);
        }
        fail(ErrorKind::InvalidArgument, "unknown group sequence kind");
    };
    auto make_v = [&](const SortedWeights& w) {
        switch (variable_kind) {
        case VariableSequence::BH:
            return bh;
        case VariableSequence::VMax:
            return v_dependent ? sgs_vmax_sequence(partition, alpha, ls, q_v, w, oracles) : bh.scaled(1.0 / ls);
        case VariableSequence::VMean:
            return v_dependent ? sgs_vmean_sequence(partition, alpha, ls, q_v, w, oracles) : bh.scaled(1.0 / ls);
        }
        fail(ErrorKind::InvalidArgument, "unknown variable sequence kind");
    };

    SortedWeights w = make_w(bh.scaled(1.0 / ls));
    SortedWeights v = make_v(w);
    if (options.fixed_point && v_dependent && w_dependent) {
        for (int round = 0; round < options.fixed_point_rounds; ++round) {
            SortedWeights w_next = make_w(v);
            SortedWeights v_next = make_v(w_next);
            const double change = std::max((v_next.values() - v.values()).cwiseAbs().maxCoeff(),
                                           (w_next.values() - w.values()).cwiseAbs().maxCoeff());
            v = std::move(v_next);
            w = std::move(w_next);
            if (change < options.fixed_point_tolerance) break;
        }
    }

    PenaltySpec spec;
    spec.alpha = alpha;
    spec.lambda = lambda;
    spec.sequence_lambda = ls;
    spec.q_v = q_v;
    spec.q_g = q_g;
    spec.variable_kind = variable_kind;
    spec.group_kind = group_kind;
    spec.v = std::move(v);
    spec.w = std::move(w);
    return spec;
}

double penalty_value(const Eigen::Ref<const Vector>& beta, const PenaltySpec& spec, const GroupPartition& partition)
{
    require(beta.size() == Index(partition.p()), ErrorKind::DimensionMismatch, "beta length must equal p");
    Vector scaled_norms = partition.group_norms(beta);
    for (std::size_t g = 0; g < partition.m(); ++g) scaled_norms[Index(g)] *= std::sqrt(double(partition.size(g)));
    double out = 0.0;
    if (spec.alpha > 0.0) out += spec.lambda * spec.alpha * sorted_l1_norm(beta, spec.v);
    if (spec.alpha < 1.0) out += spec.lambda * (1.0 - spec.alpha) * sorted_l1_norm(scaled_norms, spec.w);
    return out;
}

} // namespace sgs
