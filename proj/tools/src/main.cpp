#include <iostream>
#include <map>

#include <CLI11.hpp>

#include <sgs/error.hpp>

#include "commands.hpp"
#include "output.hpp"

using namespace sgs;
using namespace sgs::cli;

namespace {

const CLI::Validator open_unit(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            v = std::stod(s);
        } catch (...) {
            return "value " + s + " is not a number";
        }
        return v > 0.0 && v < 1.0 ? std::string{} : "value " + s + " not in (0, 1)";
    },
    "in (0,1)");

const std::map<std::string, Family> family_map{{"gaussian", Family::Gaussian}, {"binomial", Family::Binomial}};
const std::map<std::string, VariableSequence> vkind_map{
    {"bh", VariableSequence::BH}, {"vmax", VariableSequence::VMax}, {"vmean", VariableSequence::VMean}};
const std::map<std::string, GroupSequence> gkind_map{{"gslope-max", GroupSequence::GSlopeMax},
                                                     {"gslope-mean", GroupSequence::GSlopeMean},
                                                     {"gmax", GroupSequence::GMax},
                                                     {"gmean", GroupSequence::GMean}};

void add_problem_options(CLI::App* sub, ProblemOptions& o, bool with_seed)
{
    sub->add_option("--x", o.x, "design matrix CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--y", o.y, "response CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--groups", o.groups, "variable,group CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--family", o.family)->default_str("gaussian")->transform(CLI::CheckedTransformer(family_map, CLI::ignore_case));
    sub->add_option("--alpha", o.alpha, "mixing weight")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--qv", o.q_v, "variable FDR level")->check(open_unit);
    sub->add_option("--qg", o.q_g, "group FDR level")->check(open_unit);
    sub->add_option("--vkind", o.vkind)->default_str("vmean")->transform(CLI::CheckedTransformer(vkind_map, CLI::ignore_case));
    sub->add_option("--gkind", o.gkind)->default_str("gslope-mean")->transform(CLI::CheckedTransformer(gkind_map, CLI::ignore_case));
    sub->add_option("--lambda", o.lambda, "objective lambda; 0 means 1/n")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", o.tolerance, "solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", o.max_iterations, "solver iteration cap")->check(CLI::PositiveNumber);
    sub->add_flag("--no-standardize", o.no_standardize, "fit on the raw columns");
    sub->add_flag("--no-intercept", o.no_intercept, "omit the intercept");
    if (with_seed) {
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--threads", o.threads, "worker threads; 0 means all cores");
    }
}

void add_path_options(CLI::App* sub, PathOptions& p)
{
    sub->add_option("--path-length", p.length, "number of lambda values")->check(CLI::Range(2, 100000));
    sub->add_option("--min-ratio", p.min_ratio, "smallest lambda / lambda_max")->check(open_unit);
}

Json flags_of(const CLI::App* sub)
{
    Json flags = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_name(false, true);
        if (name.empty() || name == "--help" || name == "-h,--help") continue;
        const std::string key = opt->get_single_name();
        if (opt->get_expected_max() == 0) {
            flags[key] = opt->count() > 0;
        } else if (opt->count() > 0) {
            const auto& res = opt->results();
            flags[key] = res.size() == 1 ? Json(res.front()) : Json(res);
        } else {
            flags[key] = opt->get_default_str();
        }
    }
    return flags;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparse-group SLOPE: fitting, model selection, penalty sequences and simulations", "sgs"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", SGS_VERSION);
    std::string out_flag;
    app.add_option("--out", out_flag, "output directory (default: $SGS_OUTPUT_DIR or ./sgs-output)");

    ProblemOptions problem;
    PathOptions path;
    CvOptions cv;
    NoiseOptions noise;
    PenaltyCliOptions pen;
    SimulateOptions sim;

    auto* fit = app.add_subcommand("fit", "fit at a single lambda");
    add_problem_options(fit, problem, false);

    auto* pth = app.add_subcommand("path", "fit a warm-started lambda path");
    add_problem_options(pth, problem, false);
    add_path_options(pth, path);

    auto* cvc = app.add_subcommand("cv", "K-fold cross-validation with the one-standard-error rule");
    add_problem_options(cvc, problem, true);
    add_path_options(cvc, path);
    cvc->add_option("--folds", cv.folds, "number of folds")->check(CLI::Range(2, 100000));

    auto* nse = app.add_subcommand("noise-est", "estimate the noise level and fit (scaled or adaptive)");
    add_problem_options(nse, problem, false);
    nse->add_option("--method", noise.method)
        ->default_str("adaptive")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, NoiseMethod>{{"scaled", NoiseMethod::Scaled}, {"adaptive", NoiseMethod::Adaptive}},
            CLI::ignore_case));
    nse->add_option("--max-rounds", noise.max_rounds, "iteration cap")->check(CLI::PositiveNumber);
    nse->add_flag("--one-pass", noise.one_pass, "adaptive: pair vMax/gMax in one pass instead of a fixed point");
    nse->add_option("--noise-tol", noise.tolerance, "relative sigma change (scaled)")->check(CLI::PositiveNumber);

    auto* pns = app.add_subcommand("penalties", "emit a penalty weight sequence as CSV");
    pns->add_option("--kind", pen.kind)
        ->required()
        ->transform(CLI::CheckedTransformer(std::map<std::string, PenaltyKind>{{"bh", PenaltyKind::BH},
                                                                               {"gslope-max", PenaltyKind::GSlopeMax},
                                                                               {"gslope-mean", PenaltyKind::GSlopeMean},
                                                                               {"vmax", PenaltyKind::VMax},
                                                                               {"vmean", PenaltyKind::VMean},
                                                                               {"gmax", PenaltyKind::GMax},
                                                                               {"gmean", PenaltyKind::GMean}},
                                            CLI::ignore_case));
    pns->add_option("--p", pen.p, "number of variables (required with a groups file)");
    pns->add_option("--groups", pen.groups, "evenSxM, unevenAtoBxM, or a variable,group CSV")
        ->required()
        ->check(CLI::Validator(
            [](std::string& s) -> std::string {
                if (!parse_group_layout(s).empty() || std::filesystem::is_regular_file(s)) return {};
                return "not a group layout (evenSxM, unevenAtoBxM) or an existing file: " + s;
            },
            "LAYOUT|FILE"));
    pns->add_option("--alpha", pen.alpha, "mixing weight")->check(CLI::Range(0.0, 1.0));
    pns->add_option("--q", pen.q, "sets both FDR levels")->check(open_unit);
    pns->add_option("--qv", pen.q_v, "variable FDR level")->check(open_unit);
    pns->add_option("--qg", pen.q_g, "group FDR level")->check(open_unit);
    pns->add_option("--vkind", pen.vkind, "variable partner of a group sequence")
        ->default_str("vmean")
        ->transform(CLI::CheckedTransformer(vkind_map, CLI::ignore_case));
    pns->add_option("--gkind", pen.gkind, "group partner of a variable sequence")
        ->default_str("gslope-mean")
        ->transform(CLI::CheckedTransformer(gkind_map, CLI::ignore_case));
    pns->add_option("--lambda", pen.sequence_lambda, "lambda inside the lambda-scaled forms")
        ->check(CLI::PositiveNumber);
    pns->add_flag("--fixed-point", pen.fixed_point, "iterate the mutually dependent pair to a fixed point");
    pns->add_option("--gmean-denominator", pen.gmean_denominator)
        ->default_str("groups")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, GMeanDenominator>{{"groups", GMeanDenominator::Groups},
                                                   {"variables", GMeanDenominator::Variables}},
            CLI::ignore_case));

    auto* smc = app.add_subcommand("simulate", "run a seeded simulation study");
    smc->add_option("--preset", sim.preset)->required()->check(CLI::IsMember(simulation_presets()));
    smc->add_option("--replicates", sim.replicates, "replicates per point; 0 means the preset default")
        ->check(CLI::NonNegativeNumber);
    smc->add_option("--q", sim.q, "FDR level for both sequences")->check(open_unit);
    smc->add_option("--seed", sim.seed, "master seed");
    smc->add_option("--threads", sim.threads, "worker threads; 0 means all cores");

    try {
        app.parse(argc, argv);
        if (pns->parsed()) {
            const auto layout = parse_group_layout(pen.groups);
            std::size_t p = 0;
            for (auto s : layout) p += s;
            if (!layout.empty() && pen.p != 0 && pen.p != p)
                throw CLI::ValidationError("--p", std::to_string(pen.p) + " does not match --groups " + pen.groups +
                                                      " (p = " + std::to_string(p) + ")");
            if (layout.empty() && pen.p == 0) throw CLI::ValidationError("--p", "required when --groups names a file");
        }
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::filesystem::path out = resolve_output_dir(out_flag);
    CLI::App* used = app.get_subcommands().front();
    const std::string command = used->get_name();
    try {
        std::filesystem::create_directories(out);
        std::vector<ManifestInput> inputs;
        std::uint64_t seed = 0;
        if (used == fit) run_fit(problem, out);
        if (used == pth) run_path(problem, path, out);
        if (used == cvc) {
            run_cv(problem, path, cv, out);
            seed = problem.seed;
        }
        if (used == nse) run_noise(problem, noise, out);
        if (used == pns) {
            run_penalties(pen, out);
            if (parse_group_layout(pen.groups).empty()) inputs.push_back({"groups", pen.groups});
        }
        if (used == smc) {
            run_simulate(sim, out);
            seed = sim.seed;
        }
        if (used == fit || used == pth || used == cvc || used == nse) {
            inputs.push_back({"x", problem.x});
            inputs.push_back({"y", problem.y});
            inputs.push_back({"groups", problem.groups});
        }
        Json flags = flags_of(used);
        flags["out"] = out.string();
        write_manifest(out, command, flags, inputs, seed, std::vector<std::string>(argv, argv + argc));
    } catch (const sgs::Error& e) {
        std::cerr << "sgs " << command << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "sgs " << command << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}
