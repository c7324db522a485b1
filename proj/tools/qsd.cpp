// qsd: command-line analysis of quasi-stationary behavior for finite
// ergodic Markov chains. Subcommands mirror the library operations; see
// README.md for the file schemas.
//
// Exit codes: 0 success, 2 validation/config error, 3 method precondition
// failure (e.g. spectral analysis of a non-reversible chain), 4 degenerate
// input (alpha = pi).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsd/errors.hpp"
#include "qsd/io.hpp"
#include "qsd/models.hpp"

namespace {

using namespace qsd;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw ValidationError("cannot open output file: " + out_path);
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    }
}

void emit_json(const json& j, const std::string& out_path) {
    emit(j.dump(2), out_path);
}

struct CommonArgs {
    std::string kernel_path;
    std::string alpha_spec = "uniform";
    std::string out_path;
    std::string format = "csv";
    int steps = 200;
    double lazy = -1.0;  // < 0 means not requested
    double tol = 1e-8;
    int resolution = 100;
    int burn_in = 50;
    int max_period = 24;
};

int run_validate(const CommonArgs& args) {
    const TransitionKernel kernel = load_kernel(args.kernel_path);
    const ProbDist pi = stationary_distribution(kernel);
    const ReversibilityCheck rev = check_reversibility(kernel, pi);

    json report;
    report["valid"] = true;
    report["n"] = kernel.size();
    report["irreducible"] = kernel.irreducible();
    report["aperiodic"] = kernel.aperiodic();
    report["pi"] = dist_to_json(pi);
    report["reversible"] = rev.reversible;
    report["max_detailed_balance_violation"] = rev.max_violation;
    if (rev.reversible) {
        ReversibleChain chain{kernel, pi, false};
        try {
            const SpectralData spec = eigendecompose(chain);
            report["spectrum"] = {{"eigenvalues", spec.eigenvalues}, {"positive", true}};
        } catch (const NonPositiveSpectrum&) {
            const SpectralData spec = eigendecompose(chain, EigenOptions{true, 0.5});
            report["spectrum"] = {{"eigenvalues", spec.eigenvalues},
                                  {"positive", false},
                                  {"note", "eigenvalues refer to the lazy chain, gamma = 0.5"}};
        }
    }
    emit_json(report, args.out_path);
    return 0;
}

int run_trajectory(const CommonArgs& args) {
    const TransitionKernel kernel = load_kernel(args.kernel_path);
    const ProbDist alpha = parse_alpha_spec(args.alpha_spec, kernel.size());
    const TrajectoryResult result = conditional_trajectory(alpha, kernel, args.steps);
    if (args.format == "json")
        emit_json(trajectory_to_json(result), args.out_path);
    else
        emit(trajectory_csv(result), args.out_path);
    return 0;
}

int run_yaglom(const CommonArgs& args) {
    const TransitionKernel kernel = load_kernel(args.kernel_path);
    const ProbDist alpha = parse_alpha_spec(args.alpha_spec, kernel.size());
    const ProbDist pi = stationary_distribution(kernel);
    const ReversibilityCheck rev = check_reversibility(kernel, pi);
    if (!rev.reversible)
        throw NotReversible("chain is not reversible; the Yaglom limit may not exist. "
                            "Run `qsd cycle` to inspect the conditional orbit.");
    ReversibleChain chain{kernel, pi, false};
    EigenOptions options;
    if (args.lazy >= 0.0) {
        options.lazy_fallback = true;
        options.gamma = args.lazy;
    }
    const YaglomReport report = yaglom_limit(alpha, chain, options);
    emit_json(yaglom_to_json(report), args.out_path);
    return 0;
}

int run_sst(const CommonArgs& args) {
    const TransitionKernel kernel = load_kernel(args.kernel_path);
    const ProbDist alpha = parse_alpha_spec(args.alpha_spec, kernel.size());
    Vector survival;
    SstProfile profile;
    try {
        const TrajectoryResult result = conditional_trajectory(alpha, kernel, args.steps);
        profile = sst_profile(result.profile);
        survival = result.profile.s;
    } catch (const AlreadyStationary&) {
        // alpha = pi: the optimal SST is 0 with probability one
        SeparationProfile flat{alpha, args.steps, Vector(static_cast<std::size_t>(args.steps) + 1, 0.0)};
        profile = sst_profile(flat);
        survival = flat.s;
    }
    if (args.format == "json")
        emit_json(sst_to_json(profile), args.out_path);
    else
        emit(sst_csv(profile, survival), args.out_path);
    return 0;
}

int run_basins(const CommonArgs& args) {
    const TransitionKernel kernel = load_kernel(args.kernel_path);
    if (kernel.size() != 3)
        throw UnsupportedDimension("basin classification needs a 3-state kernel");
    const BasinMap map = classify_basins(reversible_chain(kernel), args.resolution);
    emit(basins_csv(map), args.out_path);
    return 0;
}

int run_cycle(const CommonArgs& args) {
    const TransitionKernel kernel = load_kernel(args.kernel_path);
    const ProbDist alpha = parse_alpha_spec(args.alpha_spec, kernel.size());
    int steps = args.steps;
    const int needed = args.burn_in + 2 * args.max_period;
    if (steps < needed) steps = needed;
    const TrajectoryResult result = conditional_trajectory(alpha, kernel, steps);
    const CycleReport report =
        detect_cycle(result.trajectory, args.burn_in, args.max_period, args.tol);
    emit_json(cycle_to_json(report), args.out_path);
    return 0;
}

int dispatch_example(const std::string& name, const CommonArgs& args, int n, double eps,
                     double gamma, double beta, double d1, double d2, double d3, double d4,
                     double p) {
    TransitionKernel kernel = [&]() {
        if (name == "triangle") return models::make_triangle().kernel;
        if (name == "two-block") return models::make_two_block(n, eps, gamma).kernel;
        if (name == "fw") return models::make_fw({beta, d1, d2, d3, d4}).kernel;
        if (name == "nonrev3") return models::make_nonrev_triangle(p);
        if (name == "nonrev4") return models::make_nonrev_four(eps);
        throw ValidationError("unknown example: " + name);
    }();
    emit_json(kernel_to_json(kernel), args.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsd: quasi-stationary analysis of finite ergodic Markov chains"};
    app.require_subcommand(1);

    CommonArgs args;

    auto add_kernel = [&](CLI::App* cmd) {
        cmd->add_option("--kernel", args.kernel_path, "kernel JSON file")->required();
    };
    auto add_alpha = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", args.alpha_spec,
                        "starting distribution: file path, dirac:K, or uniform (default uniform)");
    };
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", args.out_path, "output path (default stdout)");
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", args.format, "output format: json or csv (default csv)")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* validate = app.add_subcommand("validate", "validate a kernel and report its flags");
    add_kernel(validate);
    add_out(validate);

    CLI::App* trajectory =
        app.add_subcommand("trajectory", "conditional distributions and separation profile");
    add_kernel(trajectory);
    add_alpha(trajectory);
    add_out(trajectory);
    add_format(trajectory);
    trajectory->add_option("--steps", args.steps, "horizon T (default 200)");

    CLI::App* yaglom = app.add_subcommand("yaglom", "Yaglom limit report for a reversible chain");
    add_kernel(yaglom);
    add_alpha(yaglom);
    add_out(yaglom);
    yaglom->add_option("--lazy", args.lazy,
                       "on a non-positive spectrum, fall back to the lazy chain with this gamma");

    CLI::App* sst = app.add_subcommand("sst", "law of the optimal strong stationary time");
    add_kernel(sst);
    add_alpha(sst);
    add_out(sst);
    add_format(sst);
    sst->add_option("--steps", args.steps, "horizon T (default 200)");

    CLI::App* basins = app.add_subcommand("basins", "basin map on the 3-state simplex");
    add_kernel(basins);
    add_out(basins);
    basins->add_option("--resolution", args.resolution, "barycentric grid resolution (default 100)");

    CLI::App* cycle = app.add_subcommand("cycle", "limit-cycle diagnostics of the conditional orbit");
    add_kernel(cycle);
    add_alpha(cycle);
    add_out(cycle);
    cycle->add_option("--steps", args.steps, "horizon T (raised to burn-in + 2 max-period if smaller)");
    cycle->add_option("--burn-in", args.burn_in, "steps to discard (default 50)");
    cycle->add_option("--max-period", args.max_period, "largest period to test (default 24)");
    cycle->add_option("--tol", args.tol, "sup-norm matching tolerance (default 1e-8)");

    CLI::App* example = app.add_subcommand("example", "emit a built-in kernel as JSON");
    std::string example_name;
    int ex_n = 4;
    double ex_eps = 0.1, ex_gamma = 0.3, ex_beta = 8.0;
    double ex_d1 = 2.0, ex_d2 = 3.0, ex_d3 = 1.0, ex_d4 = 2.0, ex_p = 0.9;
    example->add_option("name", example_name, "triangle | two-block | fw | nonrev3 | nonrev4")
        ->required();
    example->add_option("--n", ex_n, "two-block: block size (default 4)");
    example->add_option("--eps", ex_eps, "two-block / nonrev4 epsilon (default 0.1)");
    example->add_option("--gamma", ex_gamma, "two-block laziness (default 0.3)");
    example->add_option("--beta", ex_beta, "fw inverse temperature (default 8)");
    example->add_option("--d1", ex_d1, "fw barrier 1 (default 2)");
    example->add_option("--d2", ex_d2, "fw barrier 2 (default 3)");
    example->add_option("--d3", ex_d3, "fw barrier 3 (default 1)");
    example->add_option("--d4", ex_d4, "fw barrier 4 (default 2)");
    example->add_option("--p", ex_p, "nonrev3 rotation strength (default 0.9)");
    add_out(example);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // config errors share the validation exit code
    }

    try {
        if (validate->parsed()) return run_validate(args);
        if (trajectory->parsed()) return run_trajectory(args);
        if (yaglom->parsed()) return run_yaglom(args);
        if (sst->parsed()) return run_sst(args);
        if (basins->parsed()) return run_basins(args);
        if (cycle->parsed()) return run_cycle(args);
        if (example->parsed())
            return dispatch_example(example_name, args, ex_n, ex_eps, ex_gamma, ex_beta, ex_d1,
                                    ex_d2, ex_d3, ex_d4, ex_p);
    } catch (const std::exception& e) {
        json err;
        err["error"] = qsd::error_name(e);
        err["message"] = e.what();
        std::cout << err.dump(2) << std::endl;
        if (dynamic_cast<const qsd::DegenerateStart*>(&e)) return 4;
        if (dynamic_cast<const qsd::PreconditionError*>(&e)) return 3;
        if (dynamic_cast<const qsd::ValidationError*>(&e)) return 2;
        return 1;
    }
    return 0;
}
