#include "sgs/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "sgs/error.hpp"
#include "sgs/parallel.hpp"
#include "sgs/rng.hpp"

namespace sgs {
namespace {

struct FittingScale {
    GroupedDataset data;
    std::optional<StandardizationRecord> record;
};

FittingScale to_fitting_scale(const GroupedDataset& data, bool standardize_data)
{
    if (!standardize_data) return {data, std::nullopt};
    StandardizedData st = standardize(data);
    return {std::move(st.data), std::move(st.record)};
}

// Map a fit back to the original scale; selection sets are unchanged because
// the scales are positive.
SgsSolution to_original_scale(SgsSolution sol, const FittingScale& scale)
{
    if (!scale.record) return sol;
    Coefficients c = unstandardize_coefficients(sol.beta, sol.intercept, *scale.record);
    sol.beta = std::move(c.beta);
    sol.intercept = c.intercept;
    return sol;
}

double clamp_prob(double p) { return std::clamp(p, 1e-15, 1.0 - 1e-15); }

void require_gaussian(const GroupedDataset& data, const char* who)
{
    require(data.family() == Family::Gaussian, ErrorKind::InvalidArgument,
            std::string(who) + " supports the Gaussian family only");
}

double residual_ss(const GroupedDataset& data, const SgsSolution& sol)
{
    Vector r = data.y() - data.X() * sol.beta;
    r.array() -= sol.intercept;
    return r.squaredNorm();
}

} // namespace

std::vector<std::size_t> assign_folds(Index n, int folds, std::uint64_t seed)
{
    require(folds >= 2, ErrorKind::FoldTooSmall, "at least two folds are required");
    require(Index(folds) <= n, ErrorKind::FoldTooSmall, "more folds than rows");
    std::vector<std::size_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Engine rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> fold_of(perm.size());
    for (std::size_t pos = 0; pos < perm.size(); ++pos) fold_of[perm[pos]] = pos % std::size_t(folds);
    return fold_of;
}

std::size_t one_se_index(const Vector& mean_error, const Vector& std_error, std::size_t min_index)
{
    const double threshold = mean_error[Index(min_index)] + std_error[Index(min_index)];
    for (Index k = 0; k < mean_error.size(); ++k)
        if (std::isfinite(mean_error[k]) && mean_error[k] <= threshold) return std::size_t(k);
    return min_index;
}

CvResult cross_validate(const GroupedDataset& data, const PenaltySpec& base, const SolverConfig& config,
                        const CvSettings& settings)
{
    const Index n = data.n();
    const int K = settings.folds;
    CvResult out;
    out.fold_of = assign_folds(n, K, settings.seed);
    for (int k = 0; k < K; ++k) {
        const auto train = std::size_t(std::count_if(out.fold_of.begin(), out.fold_of.end(),
                                                     [k](std::size_t f) { return f != std::size_t(k); }));
        require(train >= 2, ErrorKind::FoldTooSmall, "a training fold has fewer than two rows");
    }

    const FittingScale full = to_fitting_scale(data, settings.standardize);
    const double top = lambda_max(full.data, base, config);
    out.lambdas = log_linear_path(top, settings.path_length, settings.min_ratio);
    const auto L = out.lambdas.size();
    const bool binomial = data.family() == Family::Binomial;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.fold_errors = Matrix::Constant(Index(L), K, nan);
    if (binomial) out.fold_misclassification = Matrix::Constant(Index(L), K, nan);
    std::vector<std::string> failures(static_cast<std::size_t>(K));

    parallel_for(std::size_t(K), settings.threads, [&](std::size_t k) {
        std::vector<Index> train_rows, test_rows;
        for (Index i = 0; i < n; ++i) (out.fold_of[std::size_t(i)] == k ? test_rows : train_rows).push_back(i);
        try {
            const FittingScale scale = to_fitting_scale(data.rows(train_rows), settings.standardize);
            const PathResult path = fit_path_at(scale.data, base, out.lambdas, config);
            const GroupedDataset test = data.rows(test_rows);
            const double nt = double(test.n());
            for (std::size_t l = 0; l < L; ++l) {
                const SgsSolution sol = to_original_scale(path.fits[l].solution, scale);
                const Vector pred = predict(sol, test.X(), data.family());
                if (!binomial) {
                    out.fold_errors(Index(l), Index(k)) = (test.y() - pred).squaredNorm() / nt;
                } else {
                    double dev = 0.0;
                    double wrong = 0.0;
                    for (Index i = 0; i < pred.size(); ++i) {
                        const double pr = clamp_prob(pred[i]);
                        const double yi = test.y()[i];
                        dev += -2.0 * (yi * std::log(pr) + (1.0 - yi) * std::log(1.0 - pr));
                        wrong += ((pred[i] >= 0.5 ? 1.0 : 0.0) != yi) ? 1.0 : 0.0;
                    }
                    out.fold_errors(Index(l), Index(k)) = dev / nt;
                    out.fold_misclassification(Index(l), Index(k)) = wrong / nt;
                }
            }
        } catch (const Error& e) {
            failures[k] = "fold " + std::to_string(k) + ": " + e.what();
        }
    });
    for (auto& f : failures)
        if (!f.empty()) out.fold_failures.push_back(f);
    require(out.fold_failures.size() < std::size_t(K), ErrorKind::FoldTooSmall, "every fold failed to fit");

    auto summarise = [&](const Matrix& errs, Vector& mean, Vector* se) {
        mean.resize(Index(L));
        if (se) se->resize(Index(L));
        for (Index l = 0; l < Index(L); ++l) {
            double sum = 0.0;
            int count = 0;
            for (Index k = 0; k < K; ++k)
                if (std::isfinite(errs(l, k))) {
                    sum += errs(l, k);
                    ++count;
                }
            const double mu = count ? sum / count : nan;
            mean[l] = mu;
            if (!se) continue;
            double ss = 0.0;
            for (Index k = 0; k < K; ++k)
                if (std::isfinite(errs(l, k))) ss += (errs(l, k) - mu) * (errs(l, k) - mu);
            (*se)[l] = count > 1 ? std::sqrt(ss / (count - 1)) / std::sqrt(double(count)) : 0.0;
        }
    };
    summarise(out.fold_errors, out.mean_error, &out.std_error);
    if (binomial) summarise(out.fold_misclassification, out.mean_misclassification, nullptr);

    std::size_t best = 0;
    for (std::size_t l = 1; l < L; ++l)
        if (out.mean_error[Index(l)] < out.mean_error[Index(best)]) best = l;
    out.lambda_min_index = best;
    out.lambda_1se_index = one_se_index(out.mean_error, out.std_error, best);
    out.chosen_lambda = out.lambdas[out.lambda_1se_index];

    const std::vector<double> head(out.lambdas.begin(), out.lambdas.begin() + long(out.lambda_1se_index) + 1);
    PathResult refit = fit_path_at(full.data, base, head, config);
    out.chosen = to_original_scale(std::move(refit.fits.back().solution), full);
    return out;
}

double ols_rss(const Matrix& X, const Vector& y, const std::vector<std::size_t>& support)
{
    const Index n = X.rows();
    const Vector yc = y.array() - y.mean();
    if (support.empty()) return yc.squaredNorm();
    Matrix A(n, Index(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) {
        const auto col = X.col(Index(support[j]));
        A.col(Index(j)) = col.array() - col.mean();
    }
    const Vector coef = A.colPivHouseholderQr().solve(yc);
    return (yc - A * coef).squaredNorm();
}

NoiseResult scaled_sgs(const GroupedDataset& data, const PenaltySpec& base, const SolverConfig& config,
                       const NoiseSettings& settings)
{
    require_gaussian(data, "scaled SGS");
    require(settings.max_rounds >= 1, ErrorKind::InvalidArgument, "max_rounds must be at least 1");
    const FittingScale scale = to_fitting_scale(data, settings.standardize);
    const double n = double(data.n());
    const double floor = 1e-12 * (1.0 + data.y().cwiseAbs().maxCoeff());

    NoiseResult out;
    NoiseEstimate& est = out.estimate;
    double sigma = std::sqrt(ols_rss(data.X(), data.y(), {}) / n);
    std::optional<AtosState> warm;
    SgsSolution fit_scale_sol;
    for (int round = 0; round < settings.max_rounds; ++round) {
        est.history.push_back(sigma);
        const double lambda = std::max(sigma, floor) / n;
        out.spec = base.with_lambda(lambda);
        fit_scale_sol = atos_fit(scale.data, out.spec, config, warm ? &*warm : nullptr);
        warm = fit_scale_sol.state;
        out.solution = to_original_scale(fit_scale_sol, scale);
        est.lambda_hat = lambda;
        est.iterations = round + 1;
        const double next = std::sqrt(residual_ss(data, out.solution) / n);
        const bool small = next <= floor;
        const double change = std::abs(next - sigma) / std::max(sigma, floor);
        sigma = next;
        if (change < settings.tolerance || small) {
            est.converged = true;
            break;
        }
    }
    est.noise_hat = sigma;
    est.support = out.solution.selected_variables;
    return out;
}

NoiseResult adaptively_scaled_sgs(const GroupedDataset& data, double alpha, double q_v, double q_g,
                                  const SolverConfig& config, const NoiseSettings& settings)
{
    require_gaussian(data, "adaptively scaled SGS");
    require(settings.max_rounds >= 1, ErrorKind::InvalidArgument, "max_rounds must be at least 1");
    const FittingScale scale = to_fitting_scale(data, settings.standardize);
    const Index n = data.n();

    struct Round {
        NoiseResult result;
        double rss;
    };
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::size_t> support;
    seen.insert(support);
    std::optional<Round> previous;
    NoiseEstimate history_holder;

    for (int round = 0; round < settings.max_rounds; ++round) {
        const Index dof = n - Index(support.size()) - 1;
        require(dof >= 1, ErrorKind::DegenerateResidual, "n - |S| - 1 < 1; the residual variance is undefined");
        const double lambda_hat = ols_rss(scale.data.X(), scale.data.y(), support) / double(dof);
        require(lambda_hat > 0.0, ErrorKind::DegenerateResidual, "least-squares residual is exactly zero");
        history_holder.history.push_back(lambda_hat);

        PenaltyOptions options;
        options.sequence_lambda = lambda_hat;
        options.fixed_point = settings.fixed_point_sequences;
        Round cur;
        cur.result.spec = build_penalty_spec(data.partition(), alpha, lambda_hat / double(n), q_v, q_g,
                                             VariableSequence::VMax, GroupSequence::GMax, options);
        const SgsSolution sol = atos_fit(scale.data, cur.result.spec, config);
        cur.result.solution = to_original_scale(sol, scale);
        cur.rss = residual_ss(data, cur.result.solution);
        NoiseEstimate& est = cur.result.estimate;
        est.lambda_hat = cur.result.spec.lambda;
        est.noise_hat = lambda_hat;
        est.iterations = round + 1;
        est.support = cur.result.solution.selected_variables;
        est.history = history_holder.history;

        if (est.support == support) {
            est.converged = true;
            return std::move(cur.result);
        }
        if (!seen.insert(est.support).second) {
            Round& pick = (previous && previous->rss < cur.rss) ? *previous : cur;
            pick.result.estimate.cycle_detected = true;
            pick.result.estimate.iterations = round + 1;
            pick.result.estimate.history = history_holder.history;
            return std::move(pick.result);
        }
        support = est.support;
        previous = std::move(cur);
    }
    return std::move(previous->result);
}

} // namespace sgs
