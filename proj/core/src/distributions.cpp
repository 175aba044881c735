#include "sgs/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "sgs/error.hpp"

namespace sgs {
namespace {

const boost::math::normal& std_normal()
{
    static const boost::math::normal dist(0.0, 1.0);
    return dist;
}

void check_prob(double prob, const char* who)
{
    require(prob > 0.0 && prob < 1.0, ErrorKind::InvalidArgument,
            std::string(who) + ": probability must lie in (0, 1)");
}

void check_dof(int dof, const char* who)
{
    require(dof >= 1, ErrorKind::InvalidArgument, std::string(who) + ": need at least one degree of freedom");
}

/// Density of a sum of k >= 2 half-normals on a uniform grid, with
/// cumulative tables in both directions.
class FoldedSumTable {
public:
    explicit FoldedSumTable(int k)
    {
        constexpr std::size_t points = 6001;
        const double mean = k * std::sqrt(2.0 / std::numbers::pi);
        const double sd = std::sqrt(k * (1.0 - 2.0 / std::numbers::pi));
        upper_ = mean + 14.0 * sd + 6.0;
        step_ = upper_ / double(points - 1);

        std::vector<double> base(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double x = step_ * double(i);
            base[i] = std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * x * x);
        }

        // Binary powering of the convolution.
        std::vector<double> result;
        std::vector<double> power = base;
        bool have_result = false;
        for (int e = k; e > 0; e >>= 1) {
            if (e & 1) {
                result = have_result ? convolve(result, power) : power;
                have_result = true;
            }
            if (e > 1) power = convolve(power, power);
        }
        density_ = std::move(result);

        cdf_.assign(points, 0.0);
        for (std::size_t i = 1; i < points; ++i) {
            cdf_[i] = cdf_[i - 1] + 0.5 * step_ * (density_[i - 1] + density_[i]);
        }
        sf_.assign(points, 0.0);
        for (std::size_t i = points - 1; i-- > 0;) {
            sf_[i] = sf_[i + 1] + 0.5 * step_ * (density_[i] + density_[i + 1]);
        }
        const double total = cdf_.back();
        for (auto& c : cdf_) c /= total;
        for (auto& s : sf_) s /= total;
    }

    double cdf(double x) const { return interpolate(cdf_, x, 0.0, 1.0); }
    double sf(double x) const { return interpolate(sf_, x, 1.0, 0.0); }

    double upper_quantile(double tail) const
    {
        // sf_ is non-increasing; find the first grid point with sf <= tail.
        auto it = std::lower_bound(sf_.begin(), sf_.end(), tail, std::greater<double>());
        // lower_bound with greater<> finds the first element not > tail.
        if (it == sf_.begin()) return 0.0;
        if (it == sf_.end()) return upper_;
        const auto i = static_cast<std::size_t>(it - sf_.begin());
        const double s0 = sf_[i - 1];
        const double s1 = sf_[i];
        const double frac = s0 > s1 ? (s0 - tail) / (s0 - s1) : 0.0;
        return step_ * (double(i - 1) + frac);
    }

    double lower_quantile(double prob) const
    {
        auto it = std::lower_bound(cdf_.begin(), cdf_.end(), prob);
        if (it == cdf_.begin()) return 0.0;
        if (it == cdf_.end()) return upper_;
        const auto i = static_cast<std::size_t>(it - cdf_.begin());
        const double c0 = cdf_[i - 1];
        const double c1 = cdf_[i];
        const double frac = c1 > c0 ? (prob - c0) / (c1 - c0) : 0.0;
        return step_ * (double(i - 1) + frac);
    }

private:
    std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) const
    {
        const std::size_t n = a.size();
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            double acc = 0.5 * (a[0] * b[i] + a[i] * b[0]);
            for (std::size_t j = 1; j < i; ++j) acc += a[j] * b[i - j];
            out[i] = acc * step_;
        }
        return out;
    }

    double interpolate(const std::vector<double>& table, double x, double below, double above) const
    {
        if (x <= 0.0) return below;
        if (x >= upper_) return above;
        const double pos = x / step_;
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= table.size()) return table.back();
        const double frac = pos - double(i);
        return table[i] + frac * (table[i + 1] - table[i]);
    }

    double upper_ = 0.0;
    double step_ = 0.0;
    std::vector<double> density_;
    std::vector<double> cdf_;
    std::vector<double> sf_;
};

std::shared_ptr<const FoldedSumTable> folded_table(int k)
{
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const FoldedSumTable>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(k); it != cache.end()) return it->second;
    }
    auto table = std::make_shared<const FoldedSumTable>(k);
    std::lock_guard lock(mutex);
    return cache.emplace(k, std::move(table)).first->second;
}

} // namespace

double normal_cdf(double x) { return boost::math::cdf(std_normal(), x); }
double normal_sf(double x) { return boost::math::cdf(boost::math::complement(std_normal(), x)); }

double normal_quantile(double prob)
{
    check_prob(prob, "normal_quantile");
    return boost::math::quantile(std_normal(), prob);
}

double normal_upper_quantile(double tail)
{
    check_prob(tail, "normal_upper_quantile");
    return boost::math::quantile(boost::math::complement(std_normal(), tail));
}

double chi_cdf(double x, int dof)
{
    check_dof(dof, "chi_cdf");
    if (x <= 0.0) return 0.0;
    return boost::math::cdf(boost::math::chi_squared(dof), x * x);
}

double chi_sf(double x, int dof)
{
    check_dof(dof, "chi_sf");
    if (x <= 0.0) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), x * x));
}

double chi_quantile(double prob, int dof)
{
    check_prob(prob, "chi_quantile");
    check_dof(dof, "chi_quantile");
    return std::sqrt(boost::math::quantile(boost::math::chi_squared(dof), prob));
}

double chi_upper_quantile(double tail, int dof)
{
    check_prob(tail, "chi_upper_quantile");
    check_dof(dof, "chi_upper_quantile");
    return std::sqrt(
        boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), tail)));
}

double folded_sum_cdf(double x, int group_size)
{
    check_dof(group_size, "folded_sum_cdf");
    if (x <= 0.0) return 0.0;
    if (group_size == 1) return 1.0 - 2.0 * normal_sf(x);
    return folded_table(group_size)->cdf(x);
}

double folded_sum_sf(double x, int group_size)
{
    check_dof(group_size, "folded_sum_sf");
    if (x <= 0.0) return 1.0;
    if (group_size == 1) return 2.0 * normal_sf(x);
    return folded_table(group_size)->sf(x);
}

double folded_sum_quantile(double prob, int group_size)
{
    check_prob(prob, "folded_sum_quantile");
    check_dof(group_size, "folded_sum_quantile");
    if (group_size == 1) return normal_quantile(0.5 * (1.0 + prob));
    if (prob > 0.5) return folded_table(group_size)->upper_quantile(1.0 - prob);
    return folded_table(group_size)->lower_quantile(prob);
}

double folded_sum_upper_quantile(double tail, int group_size)
{
    check_prob(tail, "folded_sum_upper_quantile");
    check_dof(group_size, "folded_sum_upper_quantile");
    if (group_size == 1) return normal_upper_quantile(0.5 * tail);
    if (tail > 0.5) return folded_table(group_size)->lower_quantile(1.0 - tail);
    return folded_table(group_size)->upper_quantile(tail);
}

const DistributionOracles& DistributionOracles::standard()
{
    static const DistributionOracles oracles{
        [](double x) { return sgs::normal_sf(x); },
        [](double t) { return sgs::normal_upper_quantile(t); },
        [](double x, int k) { return sgs::chi_sf(x, k); },
        [](double t, int k) { return sgs::chi_upper_quantile(t, k); },
        [](double x, int k) { return sgs::folded_sum_sf(x, k); },
        [](double t, int k) { return sgs::folded_sum_upper_quantile(t, k); },
    };
    return oracles;
}

} // namespace sgs
