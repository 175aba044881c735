#include "sgs/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sgs/error.hpp"
#include "sgs/parallel.hpp"
#include "sgs/rng.hpp"

namespace sgs {
namespace {

void check_proportion(double x, const char* name)
{
    require(x >= 0.0 && x <= 1.0 && std::isfinite(x), ErrorKind::InconsistentScenario,
            std::string(name) + " must lie in [0, 1]");
}

GroupPartition partition_for(const std::vector<std::size_t>& sizes)
{
    require(!sizes.empty(), ErrorKind::InconsistentScenario, "scenario has no groups");
    for (auto s : sizes) require(s >= 1, ErrorKind::InconsistentScenario, "group sizes must be positive");
    return GroupPartition::from_sizes(sizes);
}

std::size_t count_inactive_groups(const Vector& beta, const GroupPartition& partition)
{
    const Vector norms = partition.group_norms(beta);
    return std::size_t((norms.array() == 0.0).count());
}

} // namespace

std::vector<std::size_t> even_group_sizes(std::size_t count, std::size_t size)
{
    return std::vector<std::size_t>(count, size);
}

std::vector<std::size_t> cycling_group_sizes(std::size_t min_size, std::size_t max_size, std::size_t count)
{
    require(min_size >= 1 && min_size <= max_size, ErrorKind::InvalidArgument, "invalid group size range");
    std::vector<std::size_t> out(count);
    const std::size_t span = max_size - min_size + 1;
    for (std::size_t g = 0; g < count; ++g) out[g] = min_size + g % span;
    return out;
}

std::size_t OrthogonalScenario::p() const { return std::accumulate(group_sizes.begin(), group_sizes.end(), std::size_t{0}); }
std::size_t CorrelatedScenario::p() const { return std::accumulate(group_sizes.begin(), group_sizes.end(), std::size_t{0}); }

std::vector<bool> draw_active_mask(const GroupPartition& partition, double group_sparsity, double fraction,
                                   bool stratify_by_size, Engine& rng)
{
    check_proportion(group_sparsity, "group_sparsity");
    check_proportion(fraction, "within_active_fraction");
    const std::size_t m = partition.m();
    const auto active_groups =
        std::min<std::size_t>(m, std::size_t(std::llround((1.0 - group_sparsity) * double(m))));

    std::vector<std::size_t> chosen;
    if (!stratify_by_size) {
        std::vector<std::size_t> all(m);
        std::iota(all.begin(), all.end(), std::size_t{0});
        std::shuffle(all.begin(), all.end(), rng);
        chosen.assign(all.begin(), all.begin() + long(active_groups));
    } else {
        std::map<std::size_t, std::vector<std::size_t>> bands;
        for (std::size_t g = 0; g < m; ++g) bands[partition.size(g)].push_back(g);
        // Largest-remainder allocation of the active count across size bands.
        std::vector<std::size_t> quota;
        std::vector<std::pair<double, std::size_t>> remainders;
        std::size_t assigned = 0;
        std::size_t b = 0;
        for (auto& [size, members] : bands) {
            (void)size;
            const double exact = double(active_groups) * double(members.size()) / double(m);
            const auto base = std::size_t(std::floor(exact));
            quota.push_back(base);
            assigned += base;
            remainders.emplace_back(exact - double(base), b++);
        }
        std::stable_sort(remainders.begin(), remainders.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
        for (std::size_t k = 0; assigned < active_groups; ++k, ++assigned) ++quota[remainders[k].second];
        b = 0;
        for (auto& [size, members] : bands) {
            (void)size;
            std::shuffle(members.begin(), members.end(), rng);
            chosen.insert(chosen.end(), members.begin(), members.begin() + long(quota[b++]));
        }
    }
    std::sort(chosen.begin(), chosen.end());

    std::vector<bool> mask(partition.p(), false);
    for (auto g : chosen) {
        const auto members = partition.members(g);
        std::vector<std::size_t> idx(members.begin(), members.end());
        const auto k = std::min(idx.size(),
                                std::max<std::size_t>(1, std::size_t(std::floor(fraction * double(idx.size()) + 1e-9))));
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t j = 0; j < k; ++j) mask[idx[j]] = true;
    }
    return mask;
}

SimulatedData generate_orthogonal(const OrthogonalScenario& scenario)
{
    check_proportion(scenario.group_sparsity, "group_sparsity");
    check_proportion(scenario.within_active_fraction, "within_active_fraction");
    GroupPartition partition = partition_for(scenario.group_sizes);
    const auto p = Index(partition.p());

    Engine structure_rng(derive_seed(scenario.seed, {1}));
    Engine signal_rng(derive_seed(scenario.seed, {2}));
    Engine noise_rng(derive_seed(scenario.seed, {3}));
    const auto mask = draw_active_mask(partition, scenario.group_sparsity, scenario.within_active_fraction,
                                       scenario.stratify_by_size, structure_rng);

    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = scenario.signal_scale * std::sqrt(2.0 * std::log(double(p)));
    Vector beta = Vector::Zero(p);
    for (Index i = 0; i < p; ++i) {
        const double delta = normal(signal_rng);
        if (mask[std::size_t(i)]) beta[i] = scale * delta;
    }
    Vector y(p);
    for (Index i = 0; i < p; ++i) y[i] = beta[i] + normal(noise_rng);
    return {GroupedDataset(Matrix::Identity(p, p), std::move(y), std::move(partition)), std::move(beta), 1.0};
}

SimulatedData generate_correlated(const CorrelatedScenario& scenario)
{
    check_proportion(scenario.group_sparsity, "group_sparsity");
    check_proportion(scenario.within_active_fraction, "within_active_fraction");
    require(scenario.rho >= 0.0 && scenario.rho < 1.0, ErrorKind::InconsistentScenario, "rho must lie in [0, 1)");
    require(scenario.n >= 2, ErrorKind::InconsistentScenario, "n must be at least 2");
    require(scenario.snr > 0.0, ErrorKind::InconsistentScenario, "snr must be positive");
    GroupPartition partition = partition_for(scenario.group_sizes);
    const Index n = scenario.n;
    const auto p = Index(partition.p());

    Engine design_rng(derive_seed(scenario.seed, {0}));
    Engine structure_rng(derive_seed(scenario.seed, {1}));
    Engine signal_rng(derive_seed(scenario.seed, {2}));
    Engine noise_rng(derive_seed(scenario.seed, {3}));
    std::normal_distribution<double> normal(0.0, 1.0);

    const double shared_w = std::sqrt(scenario.rho);
    const double own_w = std::sqrt(1.0 - scenario.rho);
    Matrix X(n, p);
    for (Index i = 0; i < n; ++i) {
        for (std::size_t g = 0; g < partition.m(); ++g) {
            const double shared = normal(design_rng);
            for (auto j : partition.members(g)) X(i, Index(j)) = shared_w * shared + own_w * normal(design_rng);
        }
    }

    const auto mask = draw_active_mask(partition, scenario.group_sparsity, scenario.within_active_fraction,
                                       scenario.stratify_by_size, structure_rng);
    Vector beta = Vector::Zero(p);
    for (Index j = 0; j < p; ++j) {
        const double draw = scenario.signal == SignalKind::Fixed ? scenario.signal_value
                                                                 : scenario.signal_value * normal(signal_rng);
        if (mask[std::size_t(j)]) beta[j] = draw;
    }

    const Vector signal = X * beta;
    const double var = (signal.array() - signal.mean()).square().sum() / double(n - 1);
    const double sigma = var > 0.0 ? std::sqrt(var / scenario.snr) : 1.0;
    Vector y(n);
    for (Index i = 0; i < n; ++i) y[i] = signal[i] + sigma * normal(noise_rng);
    return {GroupedDataset(std::move(X), std::move(y), std::move(partition)), std::move(beta), sigma};
}

MetricSummary summarize(const std::vector<double>& values)
{
    MetricSummary out;
    if (values.empty()) return out;
    const double k = double(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.se = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    }
    return out;
}

const std::vector<std::string>& metric_names()
{
    static const std::vector<std::string> names{
        "vfdr", "gfdr", "vsensitivity", "gsensitivity", "vf1", "gf1", "vaccuracy", "gaccuracy",
        "vtype1", "gtype1", "vselected", "gselected", "mse", "mae"};
    return names;
}

std::vector<double> metric_values(const SelectionMetrics& m)
{
    return {m.variable.fdr(),         m.group.fdr(),         m.variable.sensitivity(), m.group.sensitivity(),
            m.variable.f1(),          m.group.f1(),          m.variable.accuracy(),    m.group.accuracy(),
            m.variable.type1_error(), m.group.type1_error(), double(m.variable.selected()),
            double(m.group.selected()), m.mse, m.mae};
}

const MetricSummary& SimulationReport::metric(std::size_t point, const std::string& name) const
{
    const auto& names = metric_names();
    const auto it = std::find(names.begin(), names.end(), name);
    require(it != names.end(), ErrorKind::InvalidArgument, "unknown metric: " + name);
    return points.at(point).metrics.at(std::size_t(it - names.begin()));
}

namespace {

void aggregate(SimulationReport& report, std::size_t p, std::size_t m)
{
    const std::size_t k = metric_names().size();
    for (std::size_t pt = 0; pt < report.points.size(); ++pt) {
        PointSummary& s = report.points[pt];
        std::vector<std::vector<double>> columns(k);
        double p0 = 0.0;
        double m0 = 0.0;
        s.replicates = 0;
        s.failures = 0;
        for (const auto& r : report.replicates) {
            if (r.point != pt) continue;
            ++s.replicates;
            p0 += double(r.p0);
            m0 += double(r.m0);
            if (!r.ok) {
                ++s.failures;
                continue;
            }
            const auto values = metric_values(r.metrics);
            for (std::size_t j = 0; j < k; ++j) columns[j].push_back(values[j]);
        }
        s.metrics.clear();
        for (auto& col : columns) s.metrics.push_back(summarize(col));
        if (s.replicates > 0) {
            p0 /= double(s.replicates);
            m0 /= double(s.replicates);
        }
        s.variable_sparsity = p0 / double(p);
        s.vfdr_bound *= p0 / double(p);
        s.gfdr_bound *= m0 / double(m);
    }
}

} // namespace

SimulationReport run_fdr_experiment(const FdrExperimentConfig& config)
{
    require(config.replicates >= 1, ErrorKind::InvalidArgument, "replicates must be at least 1");
    require(!config.q_levels.empty() && !config.group_sparsities.empty(), ErrorKind::InvalidArgument,
            "the experiment grid is empty");
    const GroupPartition partition = partition_for(config.scenario.group_sizes);
    const std::size_t p = partition.p();
    const std::size_t m = partition.m();
    const double lambda = 1.0 / double(p);

    std::vector<PenaltySpec> specs;
    for (double q : config.q_levels)
        specs.push_back(build_penalty_spec(partition, config.alpha, lambda, q, q, config.variable_kind,
                                           config.group_kind));
    SolverConfig solver = config.solver;
    solver.fit_intercept = false;

    SimulationReport report;
    report.kind = "fdr-experiment";
    report.seed = config.seed;
    const std::size_t Q = config.q_levels.size();
    const std::size_t S = config.group_sparsities.size();
    const auto R = std::size_t(config.replicates);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t qi = 0; qi < Q; ++qi) {
            PointSummary pt;
            pt.model = "sgs";
            pt.q = config.q_levels[qi];
            pt.group_sparsity = config.group_sparsities[s];
            pt.vfdr_bound = pt.q;
            pt.gfdr_bound = pt.q;
            report.points.push_back(pt);
        }
    }
    report.replicates.resize(S * R * Q);

    parallel_for(S * R, config.threads, [&](std::size_t task) {
        const std::size_t s = task / R;
        const std::size_t r = task % R;
        OrthogonalScenario scenario = config.scenario;
        scenario.group_sparsity = config.group_sparsities[s];
        scenario.seed = derive_seed(config.seed, {s, r});
        const SimulatedData sim = generate_orthogonal(scenario);
        const std::size_t p0 = p - std::size_t((sim.true_beta.array() != 0.0).count());
        const std::size_t m0 = count_inactive_groups(sim.true_beta, sim.data.partition());
        for (std::size_t qi = 0; qi < Q; ++qi) {
            ReplicateRecord rec;
            rec.model = "sgs";
            rec.point = s * Q + qi;
            rec.replicate = r;
            rec.seed = scenario.seed;
            rec.p0 = p0;
            rec.m0 = m0;
            try {
                const SgsSolution sol = atos_fit(sim.data, specs[qi], solver);
                rec.converged = sol.converged;
                rec.metrics = compute_metrics(sim.true_beta, sol.beta, sim.data.partition());
            } catch (const Error& e) {
                rec.ok = false;
                rec.failure = e.what();
            }
            report.replicates[(s * R + r) * Q + qi] = std::move(rec);
        }
    });
    aggregate(report, p, m);
    return report;
}

SgsSolution fit_model(const ModelConfig& model, const GroupedDataset& data, std::uint64_t seed)
{
    const GroupPartition& partition = data.partition();
    const double one_over_n = 1.0 / double(data.n());
    switch (model.method) {
    case SelectionMethod::AdaptivelyScaled:
        return adaptively_scaled_sgs(data, model.alpha, model.q_v, model.q_g, model.solver, model.noise).solution;
    case SelectionMethod::Scaled: {
        const PenaltySpec base = build_penalty_spec(partition, model.alpha, one_over_n, model.q_v, model.q_g,
                                                    model.variable_kind, model.group_kind);
        return scaled_sgs(data, base, model.solver, model.noise).solution;
    }
    case SelectionMethod::CvOneSe: {
        const PenaltySpec base = build_penalty_spec(partition, model.alpha, one_over_n, model.q_v, model.q_g,
                                                    model.variable_kind, model.group_kind);
        CvSettings cv = model.cv;
        cv.seed = seed;
        return cross_validate(data, base, model.solver, cv).chosen;
    }
    case SelectionMethod::FixedLambda: {
        const double lambda = model.lambda > 0.0 ? model.lambda : one_over_n;
        const PenaltySpec spec = build_penalty_spec(partition, model.alpha, lambda, model.q_v, model.q_g,
                                                    model.variable_kind, model.group_kind);
        if (!model.cv.standardize) return atos_fit(data, spec, model.solver);
        StandardizedData st = standardize(data);
        SgsSolution sol = atos_fit(st.data, spec, model.solver);
        Coefficients c = unstandardize_coefficients(sol.beta, sol.intercept, st.record);
        sol.beta = std::move(c.beta);
        sol.intercept = c.intercept;
        return sol;
    }
    }
    fail(ErrorKind::InvalidArgument, "unknown selection method");
}

SimulationReport run_selection_study(const SelectionStudyConfig& config)
{
    require(config.replicates >= 1, ErrorKind::InvalidArgument, "replicates must be at least 1");
    require(!config.models.empty(), ErrorKind::InvalidArgument, "no models to compare");
    const GroupPartition partition = partition_for(config.scenario.group_sizes);
    const std::size_t K = config.models.size();
    const auto R = std::size_t(config.replicates);

    SimulationReport report;
    report.kind = "selection-study";
    report.seed = config.seed;
    for (const auto& model : config.models) {
        PointSummary pt;
        pt.model = model.name;
        pt.q = model.q_v;
        pt.group_sparsity = config.scenario.group_sparsity;
        pt.vfdr_bound = model.q_v;
        pt.gfdr_bound = model.q_g;
        report.points.push_back(pt);
    }
    report.replicates.resize(R * K);

    parallel_for(R, config.threads, [&](std::size_t r) {
        CorrelatedScenario scenario = config.scenario;
        scenario.seed = derive_seed(config.seed, {r});
        const SimulatedData sim = generate_correlated(scenario);
        const std::size_t p0 = partition.p() - std::size_t((sim.true_beta.array() != 0.0).count());
        const std::size_t m0 = count_inactive_groups(sim.true_beta, partition);
        for (std::size_t k = 0; k < K; ++k) {
            ModelConfig model = config.models[k];
            model.cv.threads = 1;
            ReplicateRecord rec;
            rec.model = model.name;
            rec.point = k;
            rec.replicate = r;
            rec.seed = scenario.seed;
            rec.p0 = p0;
            rec.m0 = m0;
            try {
                const SgsSolution sol = fit_model(model, sim.data, derive_seed(config.seed, {r, k + 1}));
                rec.converged = sol.converged;
                rec.metrics = compute_metrics(sim.true_beta, sol.beta, partition);
            } catch (const Error& e) {
                rec.ok = false;
                rec.failure = e.what();
            }
            report.replicates[r * K + k] = std::move(rec);
        }
    });
    aggregate(report, partition.p(), partition.m());
    return report;
}

} // namespace sgs
