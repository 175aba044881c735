#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include <sgs/distributions.hpp>

using namespace sgs;

TEST_CASE("normal quantiles")
{
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_upper_quantile(0.0005) == doctest::Approx(3.2905267314919).epsilon(1e-12));
    CHECK(normal_upper_quantile(1e-300) > 37.0);
    CHECK(normal_cdf(1.0) + normal_sf(1.0) == doctest::Approx(1.0));
    for (double t : {1e-9, 1e-4, 0.01, 0.3})
        CHECK(normal_sf(normal_upper_quantile(t)) == doctest::Approx(t).epsilon(1e-10));
}

TEST_CASE("chi with one degree of freedom is the half-normal")
{
    for (double t : {0.001, 0.05, 0.5}) {
        CHECK(chi_upper_quantile(t, 1) == doctest::Approx(normal_upper_quantile(t / 2.0)).epsilon(1e-10));
        CHECK(folded_sum_upper_quantile(t, 1) == doctest::Approx(normal_upper_quantile(t / 2.0)).epsilon(1e-12));
    }
    const boost::math::chi_squared chi4(4.0);
    CHECK(chi_quantile(0.9, 4) == doctest::Approx(std::sqrt(boost::math::quantile(chi4, 0.9))).epsilon(1e-12));
}

TEST_CASE("folded sum of two: direct numerical convolution")
{
    // P(|Z1| + |Z2| <= x) = integral_0^x f(t) F(x - t) dt with the half-normal f, F.
    auto half_pdf = [](double t) { return std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * t * t); };
    auto half_cdf = [](double t) { return std::erf(t / std::sqrt(2.0)); };
    for (double x : {0.5, 1.5, 2.5, 4.0}) {
        const int steps = 20000;
        const double h = x / steps;
        double acc = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double t = i * h;
            const double wgt = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += wgt * half_pdf(t) * half_cdf(x - t);
        }
        acc *= h / 3.0;
        CHECK(folded_sum_cdf(x, 2) == doctest::Approx(acc).epsilon(1e-6));
    }
}

TEST_CASE("folded sum quantiles agree with a seeded Monte Carlo oracle")
{
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal;
    const int draws = 1000000;
    for (int k : {1, 2, 3, 5, 7, 10}) {
        std::vector<double> sums(draws);
        for (auto& s : sums) {
            double acc = 0.0;
            for (int j = 0; j < k; ++j) acc += std::abs(normal(rng));
            s = acc;
        }
        std::sort(sums.begin(), sums.end());
        for (double prob : {0.5, 0.9, 0.99}) {
            const double mc = sums[std::size_t(prob * draws)];
            const double q = folded_sum_quantile(prob, k);
            CHECK(std::abs(q - mc) / mc < 0.02);
            CHECK(std::abs(q - mc) / mc < 0.005);
        }
    }
}

TEST_CASE("folded sum: monotone, positive, complementary")
{
    for (int k : {1, 3, 8, 40}) {
        double prev = 0.0;
        for (double prob = 0.01; prob < 1.0; prob += 0.07) {
            const double q = folded_sum_quantile(prob, k);
            CHECK(q > prev);
            prev = q;
            CHECK(folded_sum_cdf(q, k) == doctest::Approx(prob).epsilon(1e-6));
        }
        CHECK(folded_sum_cdf(2.0, k) + folded_sum_sf(2.0, k) == doctest::Approx(1.0));
        CHECK(folded_sum_upper_quantile(1e-6, k) > folded_sum_upper_quantile(1e-3, k));
    }
}
