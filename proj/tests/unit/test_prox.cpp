#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <sgs/error.hpp>
#include <sgs/penalty.hpp>
#include <sgs/prox.hpp>

#include "oracles.hpp"

using namespace sgs;
using namespace sgs::testing;

namespace {

Vector vec(std::initializer_list<double> xs)
{
    Vector v(Index(xs.size()));
    Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

double linf(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Projected subgradient descent with diminishing steps, polished by keeping
// the best iterate; a second, slower oracle for small fixed cases.
template <class Obj>
Vector subgradient_minimize(const Obj& obj, const Vector& x0, int iterations)
{
    Vector z = x0;
    Vector best = z;
    double best_obj = obj(z);
    const double h = 1e-7;
    for (int t = 1; t <= iterations; ++t) {
        Vector g = finite_difference_gradient(obj, z, h);
        const double step = 0.5 / std::sqrt(double(t));
        z -= step * g / std::max(1.0, g.norm());
        const double o = obj(z);
        if (o < best_obj) {
            best_obj = o;
            best = z;
        }
    }
    return best;
}

} // namespace

TEST_CASE("sorted weights validation")
{
    CHECK_NOTHROW(SortedWeights(vec({3, 2, 2, 0})));
    CHECK_THROWS_AS(SortedWeights(vec({1, 2})), Error);
    CHECK_THROWS_AS(SortedWeights(vec({1, -1})), Error);
    try {
        SortedWeights(vec({1, 2}));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::WeightOrderViolation);
    }
}

TEST_CASE("prox_slope: trivial cases")
{
    CHECK(prox_slope(Vector::Zero(4), SortedWeights(vec({3, 2, 1, 0}))).norm() == 0.0);
    const Vector x = vec({1.5, -2.0, 0.3});
    CHECK(linf(prox_slope(x, SortedWeights::zeros(3)), x) == 0.0);
    // Flat weights: soft thresholding.
    const Vector st = prox_slope(x, SortedWeights::constant(3, 0.5));
    CHECK(linf(st, vec({1.0, -1.5, 0.0})) < 1e-15);
    CHECK_THROWS_AS(prox_slope(x, SortedWeights::zeros(2)), Error);
}

TEST_CASE("prox_slope: x = [3, 1], w = [1, 0.5] against two oracles")
{
    const Vector x = vec({3, 1});
    const Vector w = vec({1, 0.5});
    const Vector z = prox_slope(x, SortedWeights(w));
    CHECK(linf(z, enumerate_prox_slope(x, w)) < 1e-12);
    const Vector sg = subgradient_minimize([&](const Vector& u) { return slope_prox_objective(u, x, w); }, x, 20000);
    CHECK(linf(z, sg) < 1e-3);
    CHECK(z[0] == doctest::Approx(2.0));
    CHECK(z[1] == doctest::Approx(0.5));
}

TEST_CASE("prox_gslope: trivial cases and block soft threshold")
{
    const auto part = GroupPartition::from_sizes(std::vector<std::size_t>{2, 3});
    const Vector x = vec({1, 2, -1, 0.5, 3});
    CHECK(linf(prox_gslope(x, SortedWeights::zeros(2), part), x) == 0.0);

    const auto one = GroupPartition::from_sizes(std::vector<std::size_t>{3});
    const Vector y = vec({3, 0, 4});
    const Vector z = prox_gslope(y, SortedWeights(vec({2})), one);
    CHECK(linf(z, y * (1.0 - 2.0 / 5.0)) < 1e-15);
    CHECK(prox_gslope(y, SortedWeights(vec({6})), one).norm() == 0.0);
}

TEST_CASE("prox_gslope: two groups of two against oracles")
{
    const auto part = GroupPartition::from_sizes(std::vector<std::size_t>{2, 2});
    const Vector x = vec({1, 1, 0.1, 0.1});
    const Vector w = vec({1, 0.5});
    const Vector z = prox_gslope(x, SortedWeights(w), part);
    CHECK(linf(z, enumerate_prox_gslope(x, w, part)) < 1e-12);
    const Vector sg = subgradient_minimize(
        [&](const Vector& u) { return gslope_prox_objective(u, x, w, part); }, x, 20000);
    CHECK(linf(z, sg) < 1e-3);
}

TEST_CASE("prox_gslope_transformed: identity scaling and zero weights")
{
    Gen gen(9);
    const auto single = GroupPartition::singletons(5);
    const GroupScaling unit(single);
    const Vector b = gen.normal_vector(5);
    const Vector w = gen.sorted_weights(5);
    CHECK(linf(prox_gslope_transformed(b, Vector::Zero(5), 0.7, SortedWeights(w), unit, single),
               prox_gslope(b, SortedWeights(w * 0.7), single)) < 1e-14);

    const auto part = GroupPartition::from_sizes(std::vector<std::size_t>{2, 3});
    const GroupScaling scaling(part);
    const Vector u = gen.normal_vector(5);
    const double gamma = 0.5;
    Vector expected = b;
    for (Index i = 0; i < 5; ++i) expected[i] += gamma * u[i] / (scaling.diag()[i] * scaling.diag()[i]);
    CHECK(linf(prox_gslope_transformed(b, u, gamma, SortedWeights::zeros(2), scaling, part), expected) < 1e-14);
}

TEST_CASE("prox_gslope_transformed: dense evaluation with explicit D")
{
    Gen gen(10);
    const auto part = GroupPartition::from_sizes(std::vector<std::size_t>{2, 3});
    const GroupScaling scaling(part);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector b = gen.normal_vector(5);
        const Vector u = gen.normal_vector(5);
        const Vector w = gen.sorted_weights(2);
        const double gamma = 0.5;
        Matrix D = Matrix::Zero(5, 5);
        D.diagonal() << std::sqrt(2.0), std::sqrt(2.0), std::sqrt(3.0), std::sqrt(3.0), std::sqrt(3.0);
        const Matrix Dinv = D.inverse();
        const Vector m = D * b + Dinv * (gamma * u);
        const Vector expected = Dinv * enumerate_prox_gslope(m, gamma * w, part);
        CHECK(linf(prox_gslope_transformed(b, u, gamma, SortedWeights(w), scaling, part), expected) < 1e-10);
    }
}

TEST_CASE("property: prox_slope matches the enumeration oracle")
{
    Gen gen(12);
    for (int rep = 0; rep < 300; ++rep) {
        const Index k = Index(gen.integer(1, 6));
        const Vector x = gen.normal_vector(k, gen.uniform(0.1, 3.0));
        const Vector w = gen.sorted_weights(k, gen.uniform(0.0, 1.5));
        CHECK(linf(prox_slope(x, SortedWeights(w)), enumerate_prox_slope(x, w)) < 1e-10);
    }
}

TEST_CASE("property: prox_gslope matches the enumeration oracle")
{
    Gen gen(13);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t p = gen.integer(1, 6);
        const std::size_t m = gen.integer(1, p);
        const auto part = gen.partition(p, m);
        const Vector x = gen.normal_vector(Index(p), gen.uniform(0.1, 3.0));
        const Vector w = gen.sorted_weights(Index(m), gen.uniform(0.0, 1.5));
        CHECK(linf(prox_gslope(x, SortedWeights(w), part), enumerate_prox_gslope(x, w, part)) < 1e-10);
    }
}

TEST_CASE("property: sign, order, non-expansiveness and permutation equivariance")
{
    Gen gen(14);
    for (int rep = 0; rep < 300; ++rep) {
        const Index k = Index(gen.integer(1, 30));
        const Vector x = gen.normal_vector(k, 2.0);
        const Vector y = gen.normal_vector(k, 2.0);
        const SortedWeights w(gen.sorted_weights(k));
        const Vector zx = prox_slope(x, w);
        const Vector zy = prox_slope(y, w);
        CHECK((zx - zy).norm() <= (x - y).norm() + 1e-12);
        for (Index i = 0; i < k; ++i) {
            CHECK((zx[i] == 0.0 || (zx[i] > 0) == (x[i] > 0)));
            for (Index j = 0; j < k; ++j)
                if (std::abs(x[i]) > std::abs(x[j])) CHECK(std::abs(zx[i]) >= std::abs(zx[j]) - 1e-12);
        }
        std::vector<Index> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), Index{0});
        std::shuffle(perm.begin(), perm.end(), gen.engine());
        Vector xp(k);
        for (Index i = 0; i < k; ++i) xp[i] = x[perm[std::size_t(i)]];
        const Vector zp = prox_slope(xp, w);
        for (Index i = 0; i < k; ++i) CHECK(std::abs(zp[i] - zx[perm[std::size_t(i)]]) < 1e-12);
    }
}

TEST_CASE("property: gSLOPE prox is non-expansive and equivariant under group permutation")
{
    Gen gen(15);
    for (int rep = 0; rep < 200; ++rep) {
        const std::vector<std::size_t> sizes{gen.integer(1, 4), gen.integer(1, 4), gen.integer(1, 4)};
        const auto part = GroupPartition::from_sizes(sizes);
        const Index p = Index(part.p());
        const Vector x = gen.normal_vector(p, 2.0);
        const Vector y = gen.normal_vector(p, 2.0);
        const SortedWeights w(gen.sorted_weights(3));
        CHECK((prox_gslope(x, w, part) - prox_gslope(y, w, part)).norm() <= (x - y).norm() + 1e-12);
        // Reverse the group order.
        const std::vector<std::size_t> rev{sizes[2], sizes[1], sizes[0]};
        const auto part_rev = GroupPartition::from_sizes(rev);
        Vector xr(p);
        Index pos = 0;
        for (int g = 2; g >= 0; --g)
            for (auto i : part.members(std::size_t(g))) xr[pos++] = x[Index(i)];
        const Vector z = prox_gslope(x, w, part);
        const Vector zr = prox_gslope(xr, w, part_rev);
        pos = 0;
        for (int g = 2; g >= 0; --g)
            for (auto i : part.members(std::size_t(g))) CHECK(std::abs(zr[pos++] - z[Index(i)]) < 1e-12);
    }
}

TEST_CASE("property: SLOPE prox optimality certificate via cumulative sums")
{
    Gen gen(16);
    for (int rep = 0; rep < 300; ++rep) {
        const Index k = Index(gen.integer(1, 25));
        const Vector x = gen.normal_vector(k, 2.0);
        const Vector w = gen.sorted_weights(k);
        const Vector z = prox_slope(x, SortedWeights(w));
        // Sort by |x| descending (|z| follows the same order).
        std::vector<Index> order(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Index a, Index b) { return std::abs(x[a]) > std::abs(x[b]); });
        double lhs = 0.0;
        double rhs = 0.0;
        for (Index r = 0; r < k; ++r) {
            const Index i = order[std::size_t(r)];
            lhs += std::abs(x[i]) - std::abs(z[i]);
            rhs += w[r];
            CHECK(lhs <= rhs + 1e-10);
            // End of a block of equal non-zero magnitudes: equality.
            const bool block_end =
                r + 1 == k || std::abs(std::abs(z[order[std::size_t(r + 1)]]) - std::abs(z[i])) > 1e-12;
            if (block_end && std::abs(z[i]) > 0.0) CHECK(std::abs(lhs - rhs) < 1e-9);
        }
    }
}

TEST_CASE("property: SGS penalty is midpoint convex")
{
    Gen gen(17);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t p = gen.integer(2, 15);
        const std::size_t m = gen.integer(1, p);
        const auto part = gen.partition(p, m);
        PenaltySpec spec;
        spec.alpha = gen.uniform(0.0, 1.0);
        spec.lambda = gen.uniform(0.1, 2.0);
        spec.v = SortedWeights(gen.sorted_weights(Index(p)));
        spec.w = SortedWeights(gen.sorted_weights(Index(m)));
        const Vector a = gen.normal_vector(Index(p));
        const Vector b = gen.normal_vector(Index(p));
        const double mid = penalty_value(0.5 * (a + b), spec, part);
        CHECK(mid <= 0.5 * (penalty_value(a, spec, part) + penalty_value(b, spec, part)) + 1e-12);
    }
}
