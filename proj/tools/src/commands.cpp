#include "commands.hpp"

#include <regex>

#include <sgs/csv.hpp>
#include <sgs/dataset.hpp>
#include <sgs/error.hpp>
#include <sgs/path.hpp>
#include <sgs/selection.hpp>
#include <sgs/simulation.hpp>
#include <sgs/solver.hpp>

#include "output.hpp"

namespace sgs::cli {
namespace {

std::string family_name(Family f) { return f == Family::Gaussian ? "gaussian" : "binomial"; }

std::string vkind_name(VariableSequence k)
{
    switch (k) {
    case VariableSequence::BH: return "bh";
    case VariableSequence::VMax: return "vmax";
    case VariableSequence::VMean: return "vmean";
    }
    return "?";
}

std::string gkind_name(GroupSequence k)
{
    switch (k) {
    case GroupSequence::GSlopeMax: return "gslope-max";
    case GroupSequence::GSlopeMean: return "gslope-mean";
    case GroupSequence::GMax: return "gmax";
    case GroupSequence::GMean: return "gmean";
    }
    return "?";
}

SolverConfig solver_config(const ProblemOptions& opt)
{
    SolverConfig c;
    c.tolerance = opt.tolerance;
    c.max_iterations = opt.max_iterations;
    c.fit_intercept = !opt.no_intercept;
    return c;
}

GroupedDataset load(const ProblemOptions& opt)
{
    return csv::load_dataset(opt.x, opt.y, opt.groups, opt.family);
}

PenaltySpec base_spec(const ProblemOptions& opt, const GroupedDataset& data)
{
    const double lambda = opt.lambda > 0.0 ? opt.lambda : 1.0 / double(data.n());
    return build_penalty_spec(data.partition(), opt.alpha, lambda, opt.q_v, opt.q_g, opt.vkind, opt.gkind);
}

Json settings_json(const ProblemOptions& opt, const GroupedDataset& data)
{
    return {{"family", family_name(opt.family)},
            {"n", data.n()},
            {"p", data.p()},
            {"m", data.partition().m()},
            {"alpha", opt.alpha},
            {"q_v", opt.q_v},
            {"q_g", opt.q_g},
            {"variable_sequence", vkind_name(opt.vkind)},
            {"group_sequence", gkind_name(opt.gkind)},
            {"standardize", !opt.no_standardize},
            {"intercept", !opt.no_intercept},
            {"tolerance", opt.tolerance},
            {"max_iterations", opt.max_iterations}};
}

Json solution_json(const SgsSolution& s)
{
    return {{"intercept", s.intercept},
            {"beta", std::vector<double>(s.beta.data(), s.beta.data() + s.beta.size())},
            {"selected_variables", s.selected_variables},
            {"selected_groups", s.selected_groups},
            {"iterations", s.iterations},
            {"converged", s.converged},
            {"backtracking_exhausted", s.backtracking_exhausted},
            {"final_residual", s.final_residual}};
}

void write_coefficients(const std::filesystem::path& path, const SgsSolution& s, const GroupPartition& part)
{
    CsvWriter w(path, {"variable", "group", "beta"});
    for (Index i = 0; i < s.beta.size(); ++i) {
        w.cell(std::size_t(i)).cell(part.group_of(std::size_t(i))).cell(s.beta[i]);
        w.end_row();
    }
}

/// Fit on standardized data when requested and map back to the original scale.
SgsSolution fit_once(const GroupedDataset& data, const PenaltySpec& spec, const SolverConfig& config,
                     bool standardize_first)
{
    if (!standardize_first) return atos_fit(data, spec, config);
    const StandardizedData st = standardize(data);
    SgsSolution sol = atos_fit(st.data, spec, config);
    Coefficients c = unstandardize_coefficients(sol.beta, sol.intercept, st.record);
    sol.beta = std::move(c.beta);
    sol.intercept = c.intercept;
    return sol;
}

} // namespace

std::vector<std::size_t> parse_group_layout(const std::string& spec)
{
    static const std::regex even(R"(even(\d+)x(\d+))");
    static const std::regex uneven(R"(uneven(\d+)to(\d+)x(\d+))");
    std::smatch m;
    if (std::regex_match(spec, m, even))
        return even_group_sizes(std::stoul(m[2]), std::stoul(m[1]));
    if (std::regex_match(spec, m, uneven))
        return cycling_group_sizes(std::stoul(m[1]), std::stoul(m[2]), std::stoul(m[3]));
    return {};
}

void run_fit(const ProblemOptions& opt, const std::filesystem::path& out)
{
    const GroupedDataset data = load(opt);
    const PenaltySpec spec = base_spec(opt, data);
    const SgsSolution sol = fit_once(data, spec, solver_config(opt), !opt.no_standardize);

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "fit";
    j["settings"] = settings_json(opt, data);
    j["lambda"] = spec.lambda;
    j["objective_fitting_scale"] = sol.objective;
    j["solution"] = solution_json(sol);
    write_json(out / "fit.json", j);
    write_coefficients(out / "coefficients.csv", sol, data.partition());
}

void run_path(const ProblemOptions& opt, const PathOptions& path, const std::filesystem::path& out)
{
    const GroupedDataset data = load(opt);
    const PenaltySpec spec = base_spec(opt, data);
    const SolverConfig config = solver_config(opt);

    std::optional<StandardizedData> st;
    if (!opt.no_standardize) st = standardize(data);
    PathResult res = fit_path(st ? st->data : data, spec, path.length, path.min_ratio, config);
    if (st) {
        for (auto& f : res.fits) {
            Coefficients c = unstandardize_coefficients(f.solution.beta, f.solution.intercept, st->record);
            f.solution.beta = std::move(c.beta);
            f.solution.intercept = c.intercept;
        }
    }

    const auto& part = data.partition();
    CsvWriter summary(out / "path_summary.csv", {"position", "lambda", "selected_variables", "selected_groups",
                                                  "iterations", "converged", "intercept"});
    CsvWriter coefs(out / "path.csv", {"position", "lambda", "variable", "group", "beta"});
    Json fits = Json::array();
    for (std::size_t k = 0; k < res.fits.size(); ++k) {
        const auto& f = res.fits[k];
        summary.cell(k).cell(f.lambda).cell(f.solution.selected_variables.size())
            .cell(f.solution.selected_groups.size()).cell(f.solution.iterations).cell(f.solution.converged)
            .cell(f.solution.intercept);
        summary.end_row();
        for (Index i = 0; i < f.solution.beta.size(); ++i) {
            coefs.cell(k).cell(f.lambda).cell(std::size_t(i)).cell(part.group_of(std::size_t(i)))
                .cell(f.solution.beta[i]);
            coefs.end_row();
        }
        Json fj = solution_json(f.solution);
        fj["lambda"] = f.lambda;
        fits.push_back(std::move(fj));
    }

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "path";
    j["settings"] = settings_json(opt, data);
    j["path_length"] = path.length;
    j["min_ratio"] = path.min_ratio;
    j["lambda_max"] = res.lambda_max;
    j["diagnostics"] = res.diagnostics;
    j["fits"] = fits;
    write_json(out / "path.json", j);
}

void run_cv(const ProblemOptions& opt, const PathOptions& path, const CvOptions& cv,
            const std::filesystem::path& out)
{
    const GroupedDataset data = load(opt);
    const PenaltySpec spec = base_spec(opt, data);
    CvSettings s;
    s.folds = cv.folds;
    s.path_length = path.length;
    s.min_ratio = path.min_ratio;
    s.seed = opt.seed;
    s.threads = opt.threads;
    s.standardize = !opt.no_standardize;
    const CvResult r = cross_validate(data, spec, solver_config(opt), s);
    const bool binomial = opt.family == Family::Binomial;

    std::vector<std::string> header{"position", "lambda", "mean_error", "std_error"};
    if (binomial) header.push_back("mean_misclassification");
    for (int k = 0; k < cv.folds; ++k) header.push_back("fold_" + std::to_string(k));
    CsvWriter table(out / "cv.csv", header);
    for (std::size_t k = 0; k < r.lambdas.size(); ++k) {
        const auto row = Index(k);
        table.cell(k).cell(r.lambdas[k]).cell(r.mean_error[row]).cell(r.std_error[row]);
        if (binomial) table.cell(r.mean_misclassification[row]);
        for (Index f = 0; f < r.fold_errors.cols(); ++f) table.cell(r.fold_errors(row, f));
        table.end_row();
    }
    CsvWriter folds(out / "folds.csv", {"row", "fold"});
    for (std::size_t i = 0; i < r.fold_of.size(); ++i) {
        folds.cell(i).cell(r.fold_of[i]);
        folds.end_row();
    }
    write_coefficients(out / "coefficients.csv", r.chosen, data.partition());

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "cv";
    j["settings"] = settings_json(opt, data);
    j["folds"] = cv.folds;
    j["seed"] = opt.seed;
    j["lambdas"] = r.lambdas;
    j["mean_error"] = std::vector<double>(r.mean_error.data(), r.mean_error.data() + r.mean_error.size());
    j["std_error"] = std::vector<double>(r.std_error.data(), r.std_error.data() + r.std_error.size());
    j["lambda_min_index"] = r.lambda_min_index;
    j["lambda_1se_index"] = r.lambda_1se_index;
    j["chosen_lambda"] = r.chosen_lambda;
    j["fold_failures"] = r.fold_failures;
    j["solution"] = solution_json(r.chosen);
    write_json(out / "cv.json", j);
}

void run_noise(const ProblemOptions& opt, const NoiseOptions& noise, const std::filesystem::path& out)
{
    const GroupedDataset data = load(opt);
    NoiseSettings s;
    s.max_rounds = noise.max_rounds;
    s.tolerance = noise.tolerance;
    s.standardize = !opt.no_standardize;
    s.fixed_point_sequences = !noise.one_pass;
    const SolverConfig config = solver_config(opt);
    const NoiseResult r = noise.method == NoiseMethod::Scaled
                              ? scaled_sgs(data, base_spec(opt, data), config, s)
                              : adaptively_scaled_sgs(data, opt.alpha, opt.q_v, opt.q_g, config, s);

    CsvWriter hist(out / "history.csv", {"round", "estimate"});
    for (std::size_t k = 0; k < r.estimate.history.size(); ++k) {
        hist.cell(k).cell(r.estimate.history[k]);
        hist.end_row();
    }
    write_coefficients(out / "coefficients.csv", r.solution, data.partition());

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "noise-est";
    j["method"] = noise.method == NoiseMethod::Scaled ? "scaled" : "adaptive";
    j["settings"] = settings_json(opt, data);
    j["lambda_hat"] = r.estimate.lambda_hat;
    j["noise_hat"] = r.estimate.noise_hat;
    j["support"] = r.estimate.support;
    j["rounds"] = r.estimate.iterations;
    j["converged"] = r.estimate.converged;
    j["cycle_detected"] = r.estimate.cycle_detected;
    j["history"] = r.estimate.history;
    j["solution"] = solution_json(r.solution);
    write_json(out / "noise.json", j);
}

void run_penalties(const PenaltyCliOptions& opt, const std::filesystem::path& out)
{
    GroupPartition part;
    const auto layout = parse_group_layout(opt.groups);
    if (!layout.empty()) {
        part = GroupPartition::from_sizes(layout);
        require(opt.p == 0 || opt.p == part.p(), ErrorKind::DimensionMismatch,
                "--p " + std::to_string(opt.p) + " does not match layout " + opt.groups + " (p = " +
                    std::to_string(part.p()) + ")");
    } else {
        require(opt.p > 0, ErrorKind::InvalidArgument, "--p is required when --groups names a file");
        part = csv::read_groups(opt.groups, opt.p);
    }
    const double q_v = opt.q > 0.0 ? opt.q : opt.q_v;
    const double q_g = opt.q > 0.0 ? opt.q : opt.q_g;

    PenaltyOptions po;
    po.sequence_lambda = opt.sequence_lambda;
    po.fixed_point = opt.fixed_point;
    po.gmean_denominator = opt.gmean_denominator;

    std::string kind;
    Vector values;
    Json partner;
    auto full = [&](VariableSequence vk, GroupSequence gk) {
        return build_penalty_spec(part, opt.alpha, 1.0, q_v, q_g, vk, gk, po);
    };
    switch (opt.kind) {
    case PenaltyKind::BH: kind = "bh"; values = slope_bh_sequence(part.p(), q_v).values(); break;
    case PenaltyKind::GSlopeMax: kind = "gslope-max"; values = gslope_max_sequence(part, q_g).values(); break;
    case PenaltyKind::GSlopeMean: kind = "gslope-mean"; values = gslope_mean_sequence(part, q_g).values(); break;
    case PenaltyKind::VMax:
    case PenaltyKind::VMean: {
        const auto vk = opt.kind == PenaltyKind::VMax ? VariableSequence::VMax : VariableSequence::VMean;
        const PenaltySpec spec = full(vk, opt.gkind);
        kind = vkind_name(vk);
        values = spec.v.values();
        partner = {{"kind", gkind_name(opt.gkind)},
                   {"values", std::vector<double>(spec.w.values().data(), spec.w.values().data() + spec.w.size())}};
        break;
    }
    case PenaltyKind::GMax:
    case PenaltyKind::GMean: {
        const auto gk = opt.kind == PenaltyKind::GMax ? GroupSequence::GMax : GroupSequence::GMean;
        const PenaltySpec spec = full(opt.vkind, gk);
        kind = gkind_name(gk);
        values = spec.w.values();
        partner = {{"kind", vkind_name(opt.vkind)},
                   {"values", std::vector<double>(spec.v.values().data(), spec.v.values().data() + spec.v.size())}};
        break;
    }
    }

    CsvWriter table(out / "penalties.csv", {"index", "value"});
    for (Index i = 0; i < values.size(); ++i) {
        table.cell(std::size_t(i + 1)).cell(values[i]);
        table.end_row();
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "penalties";
    j["kind"] = kind;
    j["p"] = part.p();
    j["m"] = part.m();
    j["group_sizes"] = part.sizes();
    j["alpha"] = opt.alpha;
    j["q_v"] = q_v;
    j["q_g"] = q_g;
    j["sequence_lambda"] = opt.sequence_lambda;
    j["fixed_point"] = opt.fixed_point;
    j["values"] = std::vector<double>(values.data(), values.data() + values.size());
    if (!partner.is_null()) j["partner"] = partner;
    write_json(out / "penalties.json", j);
}

const std::vector<std::string>& simulation_presets()
{
    static const std::vector<std::string> names{"ortho-even", "ortho-uneven", "sgs-original",
                                                "null",       "corr-fixed",   "corr-random"};
    return names;
}

namespace {

void write_report(const SimulationReport& rep, const std::string& preset, const std::filesystem::path& out)
{
    const auto& names = metric_names();
    std::vector<std::string> header{"model", "q", "group_sparsity", "variable_sparsity", "replicates", "failures"};
    for (const auto& n : names) {
        header.push_back(n + "_mean");
        header.push_back(n + "_se");
    }
    header.push_back("vfdr_bound");
    header.push_back("gfdr_bound");
    CsvWriter summary(out / "summary.csv", header);
    Json points = Json::array();
    for (const auto& pt : rep.points) {
        summary.cell(pt.model).cell(pt.q).cell(pt.group_sparsity).cell(pt.variable_sparsity).cell(pt.replicates)
            .cell(pt.failures);
        Json metrics = Json::object();
        for (std::size_t k = 0; k < names.size(); ++k) {
            summary.cell(pt.metrics[k].mean).cell(pt.metrics[k].se);
            metrics[names[k]] = {{"mean", pt.metrics[k].mean}, {"se", pt.metrics[k].se}};
        }
        summary.cell(pt.vfdr_bound).cell(pt.gfdr_bound);
        summary.end_row();
        points.push_back({{"model", pt.model},
                          {"q", pt.q},
                          {"group_sparsity", pt.group_sparsity},
                          {"variable_sparsity", pt.variable_sparsity},
                          {"replicates", pt.replicates},
                          {"failures", pt.failures},
                          {"vfdr_bound", pt.vfdr_bound},
                          {"gfdr_bound", pt.gfdr_bound},
                          {"metrics", metrics}});
    }

    std::vector<std::string> rheader{"model", "point", "replicate", "seed", "ok", "converged", "p0", "m0"};
    rheader.insert(rheader.end(), names.begin(), names.end());
    rheader.push_back("failure");
    CsvWriter reps(out / "replicates.csv", rheader);
    for (const auto& r : rep.replicates) {
        reps.cell(r.model).cell(r.point).cell(r.replicate).cell(std::to_string(r.seed)).cell(r.ok)
            .cell(r.converged).cell(r.p0).cell(r.m0);
        for (double v : metric_values(r.metrics)) reps.cell(r.ok ? v : std::nan(""));
        reps.cell(r.failure);
        reps.end_row();
    }

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "simulate";
    j["preset"] = preset;
    j["kind"] = rep.kind;
    j["seed"] = rep.seed;
    j["points"] = points;
    write_json(out / "simulation.json", j);
}

} // namespace

void run_simulate(const SimulateOptions& opt, const std::filesystem::path& out)
{
    const std::string& preset = opt.preset;
    if (preset.rfind("corr-", 0) == 0) {
        SelectionStudyConfig cfg;
        cfg.seed = opt.seed;
        cfg.threads = opt.threads;
        cfg.replicates = opt.replicates > 0 ? opt.replicates : 50;
        cfg.scenario.signal = preset == "corr-random" ? SignalKind::RandomNormal : SignalKind::Fixed;
        ModelConfig base;
        base.q_v = base.q_g = opt.q;
        ModelConfig cv = base, scaled = base, as = base;
        cv.name = "sgs-cv-1se";
        cv.method = SelectionMethod::CvOneSe;
        scaled.name = "sgs-scaled";
        scaled.method = SelectionMethod::Scaled;
        as.name = "as-sgs";
        as.method = SelectionMethod::AdaptivelyScaled;
        cfg.models = {cv, scaled, as};
        write_report(run_selection_study(cfg), preset, out);
        return;
    }

    FdrExperimentConfig cfg;
    cfg.seed = opt.seed;
    cfg.threads = opt.threads;
    cfg.replicates = opt.replicates > 0 ? opt.replicates : 100;
    cfg.q_levels = {opt.q};
    if (preset == "ortho-uneven") cfg.scenario.group_sizes = cycling_group_sizes(3, 7, 200);
    if (preset == "null") cfg.group_sparsities = {1.0};
    if (preset == "sgs-original") {
        cfg.variable_kind = VariableSequence::BH;
        cfg.group_kind = GroupSequence::GSlopeMean;
    }
    write_report(run_fdr_experiment(cfg), preset, out);
}

} // namespace sgs::cli
