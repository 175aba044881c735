#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <sgs/partition.hpp>
#include <sgs/penalty.hpp>
#include <sgs/prox.hpp>
#include <sgs/types.hpp>

namespace sgs::testing {

/// Seeded generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t integer(std::size_t lo, std::size_t hi) // inclusive
    {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

    Vector normal_vector(Index k, double scale = 1.0);
    Matrix normal_matrix(Index rows, Index cols);
    /// Random non-increasing, non-negative weights; sometimes with ties or zeros.
    Vector sorted_weights(Index k, double scale = 1.0);
    /// Random partition of p variables into m non-empty groups (labels shuffled).
    GroupPartition partition(std::size_t p, std::size_t m);

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// 1/2 ||z - x||^2 + sum_i w_i |z|_(i), with its own sorting.
double slope_prox_objective(const Vector& z, const Vector& x, const Vector& w);

/// Exact minimizer of the sorted-L1 prox objective for k <= 8 by enumerating
/// every ordered block structure of |z| (plus a zero block), solving each
/// block's equal-value quadratic in closed form and keeping the best feasible
/// candidate under the true objective.
Vector enumerate_prox_slope(const Vector& x, const Vector& w);

/// Exact group prox: the minimizer is x_g scaled by a non-negative factor,
/// which reduces it to `enumerate_prox_slope` on the group norms.
Vector enumerate_prox_gslope(const Vector& x, const Vector& w, const GroupPartition& partition);

/// 1/2 ||z - x||^2 + sum_g w_(g) ||z_g||.
double gslope_prox_objective(const Vector& z, const Vector& x, const Vector& w, const GroupPartition& partition);

/// SGS objective for the Gaussian loss without intercept, computed from scratch.
double sgs_objective(const Matrix& X, const Vector& y, const Vector& beta, const Vector& v, const Vector& w,
                     const GroupPartition& partition, double alpha, double lambda);

struct ReferenceFit {
    Vector beta;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Condat-Vu primal-dual splitting for f + g + phi(D b), with f the Gaussian
/// loss (no intercept), g the sorted-L1 term and phi the group term in the
/// scaled coordinates c = D b. Uses only the two prox operators, each checked
/// separately against the enumeration oracles.
ReferenceFit condat_vu_reference(const Matrix& X, const Vector& y, const PenaltySpec& spec,
                                 const GroupPartition& partition, double tolerance, int max_iterations);

/// Central finite-difference gradient.
template <class F>
Vector finite_difference_gradient(const F& f, const Vector& x, double h)
{
    Vector g(x.size());
    Vector xp = x;
    for (Index i = 0; i < x.size(); ++i) {
        const double orig = xp[i];
        xp[i] = orig + h;
        const double fp = f(xp);
        xp[i] = orig - h;
        const double fm = f(xp);
        xp[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

} // namespace sgs::testing
