#include <doctest.h>

#include <algorithm>
#include <set>

#include <sgs/error.hpp>
#include <sgs/selection.hpp>
#include <sgs/simulation.hpp>

#include "oracles.hpp"

using namespace sgs;
using sgs::testing::Gen;

namespace {

GroupedDataset sparse_problem(std::uint64_t seed, Index n, double noise)
{
    Gen gen(seed);
    const auto part = GroupPartition::from_sizes(std::vector<std::size_t>{3, 3, 4, 5, 5});
    const Matrix X = gen.normal_matrix(n, 20);
    Vector beta = Vector::Zero(20);
    beta.head(3) << 3, -2, 2.5;
    return GroupedDataset(X, X * beta + noise * gen.normal_vector(n), part);
}

PenaltySpec default_spec(const GroupPartition& part, double lambda)
{
    return build_penalty_spec(part, 0.95, lambda, 0.1, 0.1, VariableSequence::VMean, GroupSequence::GSlopeMean);
}

} // namespace

TEST_CASE("fold assignment partitions rows")
{
    const auto folds = assign_folds(12, 12, 5);
    std::set<std::size_t> seen(folds.begin(), folds.end());
    CHECK(seen.size() == 12);
    const auto f4 = assign_folds(10, 3, 9);
    CHECK(f4 == assign_folds(10, 3, 9));
    for (std::size_t k = 0; k < 3; ++k) {
        const auto c = std::count(f4.begin(), f4.end(), k);
        CHECK((c == 3 || c == 4));
    }
    CHECK_THROWS_AS(assign_folds(5, 1, 0), Error);
    CHECK_THROWS_AS(assign_folds(5, 6, 0), Error);
}

TEST_CASE("one-standard-error rule")
{
    Vector mean(5), se(5);
    mean << 5, 3, 2.2, 2.0, 2.1;
    se << 0.1, 0.1, 0.1, 0.3, 0.1;
    CHECK(one_se_index(mean, se, 3) == 2);
    se[3] = 0.0;
    CHECK(one_se_index(mean, se, 3) == 3);
}

TEST_CASE("cross-validation: determinism, shapes and the 1se invariant")
{
    const auto d = sparse_problem(51, 60, 1.0);
    const auto spec = default_spec(d.partition(), 1.0 / 60.0);
    CvSettings s;
    s.folds = 5;
    s.path_length = 10;
    s.seed = 3;
    SolverConfig c;
    const auto a = cross_validate(d, spec, c, s);
    s.threads = 3;
    const auto b = cross_validate(d, spec, c, s);
    CHECK(a.lambdas == b.lambdas);
    CHECK((a.fold_errors - b.fold_errors).norm() == 0.0);
    CHECK(a.lambda_1se_index == b.lambda_1se_index);
    CHECK((a.chosen.beta - b.chosen.beta).norm() == 0.0);
    CHECK(a.fold_errors.rows() == 10);
    CHECK(a.fold_errors.cols() == 5);
    CHECK(a.lambda_1se_index <= a.lambda_min_index);
    CHECK(a.mean_error[Index(a.lambda_1se_index)] <=
          a.mean_error[Index(a.lambda_min_index)] + a.std_error[Index(a.lambda_min_index)]);
    for (std::size_t k = 0; k < a.lambda_1se_index; ++k)
        CHECK(a.mean_error[Index(k)] > a.mean_error[Index(a.lambda_min_index)] + a.std_error[Index(a.lambda_min_index)]);
    // The true variables are found.
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::find(a.chosen.selected_variables.begin(), a.chosen.selected_variables.end(), i) !=
              a.chosen.selected_variables.end());
}

TEST_CASE("cross-validation: binomial reports deviance and misclassification")
{
    Gen gen(52);
    const auto part = GroupPartition::from_sizes(std::vector<std::size_t>{4, 4});
    const Matrix X = gen.normal_matrix(80, 8);
    Vector y(80);
    for (Index i = 0; i < 80; ++i) y[i] = 2.0 * X(i, 0) + gen.normal() > 0 ? 1.0 : 0.0;
    const GroupedDataset d(X, y, part, Family::Binomial);
    CvSettings s;
    s.folds = 4;
    s.path_length = 8;
    const auto r = cross_validate(d, default_spec(part, 1.0 / 80.0), SolverConfig{}, s);
    CHECK(r.fold_misclassification.rows() == 8);
    CHECK(r.mean_misclassification.minCoeff() < 0.3);
    CHECK(r.mean_error.minCoeff() > 0.0);
}

TEST_CASE("scaled SGS: zero-noise limit and fixed point")
{
    const auto exact = sparse_problem(53, 60, 0.0);
    NoiseSettings ns;
    const auto r = scaled_sgs(exact, default_spec(exact.partition(), 1.0 / 60.0), SolverConfig{}, ns);
    CHECK(r.estimate.noise_hat < 1e-3);

    const auto d = sparse_problem(54, 60, 1.0);
    SolverConfig c;
    c.tolerance = 1e-8;
    c.max_iterations = 50000;
    const auto base = default_spec(d.partition(), 1.0 / 60.0);
    const auto a = scaled_sgs(d, base, c, ns);
    CHECK(a.estimate.converged);
    CHECK(a.estimate.noise_hat == doctest::Approx(1.0).epsilon(0.5));
    // Rerun at the returned sigma: one more round changes nothing.
    const double lambda = a.estimate.noise_hat / 60.0;
    const auto st = standardize(d);
    const auto refit = atos_fit(st.data, base.with_lambda(lambda), c);
    CHECK(refit.selected_variables == a.estimate.support);
}

TEST_CASE("AS-SGS: starts from the intercept-only model and recovers an easy truth")
{
    OrthogonalScenario sc;
    sc.group_sizes = even_group_sizes(40, 5);
    sc.group_sparsity = 0.9;
    sc.seed = 7;
    auto sim = generate_orthogonal(sc);
    // Strong, easy signal.
    Vector beta = sim.true_beta;
    for (Index i = 0; i < beta.size(); ++i)
        if (beta[i] != 0.0) beta[i] = beta[i] > 0 ? 30.0 : -30.0;
    Gen gen(8);
    const Vector y = beta + gen.normal_vector(beta.size());
    const GroupedDataset d(sim.data.X(), y, sim.data.partition());
    NoiseSettings ns;
    ns.standardize = false;
    SolverConfig c;
    c.fit_intercept = false;
    const auto r = adaptively_scaled_sgs(d, 0.6, 0.1, 0.1, c, ns);
    REQUIRE(!r.estimate.history.empty());
    const double n = double(d.n());
    CHECK(r.estimate.history.front() == doctest::Approx((y.array() - y.mean()).matrix().squaredNorm() / (n - 1)));
    CHECK(r.estimate.converged);
    std::vector<std::size_t> truth;
    for (Index i = 0; i < beta.size(); ++i)
        if (beta[i] != 0.0) truth.push_back(std::size_t(i));
    CHECK(r.estimate.support == truth);
}

TEST_CASE("noise procedures reject the binomial family")
{
    const auto part = GroupPartition::singletons(2);
    Vector y(4);
    y << 0, 1, 0, 1;
    const GroupedDataset d(Matrix::Random(4, 2), y, part, Family::Binomial);
    CHECK_THROWS_AS(adaptively_scaled_sgs(d, 0.5, 0.1, 0.1, SolverConfig{}), Error);
}

TEST_CASE("ols_rss")
{
    Gen gen(55);
    const Matrix X = gen.normal_matrix(30, 4);
    const Vector y = 2.0 + X.col(1).array() * 3.0;
    CHECK(ols_rss(X, y, {1}) < 1e-20);
    CHECK(ols_rss(X, y, {}) == doctest::Approx((y.array() - y.mean()).matrix().squaredNorm()));
}
