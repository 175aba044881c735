#include "sgs/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sgs/error.hpp"

namespace sgs {
namespace {

// Dual of the sorted-L1 norm: max_k (top-k sum of |g|) / (v_1 + ... + v_k).
double sorted_dual_norm(Vector g, const SortedWeights& weights)
{
    g = g.cwiseAbs();
    std::sort(g.data(), g.data() + g.size(), std::greater<>());
    double best = 0.0;
    double num = 0.0;
    double den = 0.0;
    for (Index k = 0; k < g.size(); ++k) {
        num += g[k];
        den += weights[k];
        if (num <= 0.0) continue;
        if (den <= 0.0) return std::numeric_limits<double>::infinity();
        best = std::max(best, num / den);
    }
    return best;
}

Vector null_gradient(const GroupedDataset& data, bool fit_intercept)
{
    const double n = double(data.n());
    Vector r;
    if (data.family() == Family::Gaussian) {
        r = -data.y();
        if (fit_intercept) r.array() += data.y().mean();
    } else {
        const double mu = fit_intercept ? data.y().mean() : 0.5;
        r = Vector::Constant(data.n(), mu) - data.y();
    }
    // Centring X is unnecessary: r sums to zero whenever an intercept is fitted.
    return data.X().transpose() * r / n;
}

bool is_null(const SgsSolution& sol) { return sol.selected_variables.empty(); }

} // namespace

std::vector<double> log_linear_path(double lambda_max, int path_length, double min_ratio)
{
    require(path_length >= 2, ErrorKind::InvalidArgument, "path length must be at least 2");
    require(min_ratio > 0.0 && min_ratio < 1.0, ErrorKind::InvalidArgument, "min_ratio must lie in (0, 1)");
    require(lambda_max > 0.0 && std::isfinite(lambda_max), ErrorKind::InvalidArgument,
            "lambda_max must be positive and finite");
    std::vector<double> out(static_cast<std::size_t>(path_length));
    const double log_top = std::log(lambda_max);
    const double log_step = std::log(min_ratio) / double(path_length - 1);
    for (int k = 0; k < path_length; ++k) out[std::size_t(k)] = std::exp(log_top + log_step * double(k));
    out.front() = lambda_max;
    return out;
}

double lambda_max_bound(const GroupedDataset& data, const PenaltySpec& base, bool fit_intercept)
{
    const Vector g = null_gradient(data, fit_intercept);
    const double inf = std::numeric_limits<double>::infinity();
    double variable_bound = inf;
    double group_bound = inf;
    if (base.alpha > 0.0) variable_bound = sorted_dual_norm(g, base.v) / base.alpha;
    if (base.alpha < 1.0) {
        const GroupPartition& partition = data.partition();
        Vector norms = partition.group_norms(g);
        for (std::size_t j = 0; j < partition.m(); ++j) norms[Index(j)] /= std::sqrt(double(partition.size(j)));
        group_bound = sorted_dual_norm(norms, base.w) / (1.0 - base.alpha);
    }
    const double bound = std::min(variable_bound, group_bound);
    require(bound > 0.0, ErrorKind::ZeroGradient, "the null model has zero gradient; no lambda_max exists");
    require(std::isfinite(bound), ErrorKind::InvalidArgument, "all penalty weights are zero");
    return bound;
}

double lambda_max(const GroupedDataset& data, const PenaltySpec& base, const SolverConfig& config)
{
    const double upper = lambda_max_bound(data, base, config.fit_intercept);
    auto null_at = [&](double lambda) { return is_null(atos_fit(data, base.with_lambda(lambda), config)); };

    double hi = upper;
    double lo = upper / 64.0;
    for (int k = 0; k < 8 && null_at(lo); ++k) {
        hi = lo;
        lo /= 64.0;
    }
    for (int k = 0; k < 12; ++k) {
        const double mid = std::sqrt(lo * hi);
        if (null_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

PathResult fit_path_at(const GroupedDataset& data, const PenaltySpec& base, const std::vector<double>& lambdas,
                       const SolverConfig& config)
{
    PathResult out;
    out.lambda_max = lambdas.empty() ? 0.0 : lambdas.front();
    out.fits.reserve(lambdas.size());
    const AtosState* warm = nullptr;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        PathFit fit{lambdas[k], atos_fit(data, base.with_lambda(lambdas[k]), config, warm)};
        out.fits.push_back(std::move(fit));
        warm = &out.fits.back().solution.state;
        if (k > 0) {
            const auto prev = out.fits[k - 1].solution.selected_variables.size();
            const auto cur = out.fits[k].solution.selected_variables.size();
            if (cur < prev) {
                std::ostringstream msg;
                msg << "support shrank from " << prev << " to " << cur << " at path index " << k;
                out.diagnostics.push_back(msg.str());
            }
        }
    }
    return out;
}

PathResult fit_path(const GroupedDataset& data, const PenaltySpec& base, int path_length, double min_ratio,
                    const SolverConfig& config, std::optional<double> lambda_max_override)
{
    const double top = lambda_max_override ? *lambda_max_override : lambda_max(data, base, config);
    PathResult out = fit_path_at(data, base, log_linear_path(top, path_length, min_ratio), config);
    out.lambda_max = top;
    return out;
}

} // namespace sgs
