#pragma once

#include <functional>

namespace sgs {

// Standard normal.
double normal_cdf(double x);
double normal_sf(double x);
double normal_quantile(double prob);
/// F^-1(1 - tail), evaluated without forming 1 - tail.
double normal_upper_quantile(double tail);

// Chi distribution with `dof` degrees of freedom (the norm of a standard
// normal vector of that dimension).
double chi_cdf(double x, int dof);
double chi_sf(double x, int dof);
double chi_quantile(double prob, int dof);
double chi_upper_quantile(double tail, int dof);

// Sum of `group_size` independent folded (absolute) standard normals.
// group_size == 1 is the half-normal and is evaluated in closed form; larger
// sizes use a cached density table built by trapezoidal convolution.
double folded_sum_cdf(double x, int group_size);
double folded_sum_sf(double x, int group_size);
double folded_sum_quantile(double prob, int group_size);
double folded_sum_upper_quantile(double tail, int group_size);

/// Injectable distribution functions used by the penalty-sequence generators.
/// Upper-tail forms are used throughout so that the extreme probabilities
/// 1 - q i / p keep full relative precision.
struct DistributionOracles {
    std::function<double(double)> normal_sf;
    std::function<double(double)> normal_upper_quantile;
    std::function<double(double, int)> chi_sf;
    std::function<double(double, int)> chi_upper_quantile;
    std::function<double(double, int)> folded_sum_sf;
    std::function<double(double, int)> folded_sum_upper_quantile;

    static const DistributionOracles& standard();
};

} // namespace sgs
