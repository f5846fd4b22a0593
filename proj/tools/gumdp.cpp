// Command-line front end for the gumdp library.
#include <gumdp/gumdp.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace gumdp;

struct ModelArgs {
    std::string file;
    std::string policy = "uniform";
    bool state_only = false;
    std::optional<double> noise;
};

void add_model_args(CLI::App* cmd, ModelArgs& m, bool with_policy = true) {
    cmd->add_option("file", m.file, "GUMDP document or builtin name (mf1, mf2, mf3)")->required();
    if (with_policy) cmd->add_option("--policy", m.policy, "uniform, a preset name, or a policy file");
    cmd->add_flag("--state-only", m.state_only, "state occupancies for builtins");
    cmd->add_option("--noise", m.noise, "mix the kernel with the uniform one: (1-eps) p + eps/|S|");
}

Gumdp load_model(const ModelArgs& m) {
    Gumdp g = resolve_gumdp(m.file, m.state_only);
    if (m.noise) g = perturb_kernel(g, *m.noise);
    return g;
}

std::string fmt(double x) { return detail::format_double(x); }

int run_analyze_chain(const ModelArgs& m) {
    const Gumdp g = load_model(m);
    const StationaryPolicy pi = resolve_policy(g, m.policy);
    const auto dec = decompose(induced_state_chain(g, pi), g.initial());
    std::cout << format_decomposition(dec);
    std::cout << "policy_unichain: " << (dec.n_classes() == 1 ? "true" : "false") << '\n';
    try {
        std::cout << "gumdp_unichain: " << (is_unichain(g) ? "true" : "false") << '\n';
    } catch (const NumericalError& e) {
        std::cout << "gumdp_unichain: unknown (" << e.what() << ")\n";
    }
    return 0;
}

int run_eval_exact(const ModelArgs& m, const std::string& setting, std::optional<double> gamma) {
    const Gumdp g = load_model(m);
    const StationaryPolicy pi = resolve_policy(g, m.policy);
    EvalSettings s;
    if (setting == "discounted") {
        if (!gamma) throw ValidationError("--gamma is required in the discounted setting");
        s.setting = Setting::discounted;
        s.gamma = gamma;
    } else if (setting == "average") {
        if (gamma) throw ValidationError("--gamma is not used in the average setting");
    } else {
        throw ValidationError("--setting must be discounted or average");
    }
    s.validate();
    const Occupancy d = expected_occupancy(g, pi, s);
    std::cout << "setting: " << setting << '\n';
    if (gamma) std::cout << "gamma: " << fmt(*gamma) << '\n';
    std::cout << "occupancy_kind: " << to_string(d.kind()) << "\noccupancy:";
    for (Eigen::Index i = 0; i < d.size(); ++i) std::cout << ' ' << fmt(d[i]);
    std::cout << "\nf_infinity: " << fmt(evaluate_objective(g.objective(), d)) << '\n';
    return 0;
}

int run_eval_finite(const ModelArgs& m, int K, std::optional<std::string> H, std::optional<double> gamma,
                    std::size_t N, std::uint64_t seed) {
    const Gumdp g = load_model(m);
    const StationaryPolicy pi = resolve_policy(g, m.policy);
    EvalSettings s;
    if (gamma) {
        int h = 0;
        if (!H || *H == "inf" || *H == "infinite") {
            h = effective_horizon(*gamma);
        } else {
            try {
                h = std::stoi(*H);
            } catch (const std::exception&) {
                throw ValidationError("-H must be a positive integer or 'inf'");
            }
        }
        s = EvalSettings::discounted(*gamma, K, h, N, seed);
    } else {
        if (H) throw ValidationError("-H requires --gamma (the average setting uses infinite trajectories)");
        s = EvalSettings::average(K, N, seed);
    }
    s.validate();
    const auto est = estimate_finite_trials(g, pi, s);
    std::cout << "setting: " << to_string(s.setting) << '\n';
    if (gamma) std::cout << "gamma: " << fmt(*gamma) << "\nH: " << *s.H << '\n';
    std::cout << "K: " << K << "\nN: " << N << "\nseed: " << seed << "\nestimate: " << fmt(est.value)
              << "\nstd_error: " << fmt(est.std_error) << "\nf_infinity: " << fmt(infinite_trials_value(g, pi, s))
              << '\n';
    return 0;
}

int run_eval_finite_exact(const ModelArgs& m, int K) {
    const Gumdp g = load_model(m);
    const StationaryPolicy pi = resolve_policy(g, m.policy);
    if (K < 1) throw ValidationError("-K must be a positive integer");
    const double fk = finite_trials_value_exact_average(g, pi, K);
    const double finf = infinite_trials_value(g, pi, EvalSettings::average(K, 1, 0));
    std::cout << "setting: average\nK: " << K << "\nf_K: " << fmt(fk) << "\nf_infinity: " << fmt(finf)
              << "\ngap: " << fmt(fk - finf) << '\n';
    return 0;
}

struct BoundArgs {
    int theorem = 0;
    int K = 1;
    std::optional<int> H;
    std::optional<double> gamma;
    double delta = 0.05;
    std::optional<double> c;
    std::optional<double> L;
    bool csv = false;
};

int run_bounds(const ModelArgs& m, const BoundArgs& b) {
    const Gumdp g = load_model(m);
    const StationaryPolicy pi = resolve_policy(g, m.policy);
    auto curvature = [&] {
        if (b.c) return *b.c;
        if (auto c = strong_convexity_constant(g.objective())) return *c;
        throw ValidationError("objective is not strongly convex; pass -c explicitly");
    };
    BoundReport report;
    switch (b.theorem) {
        case 2:
            if (!b.gamma) throw ValidationError("--gamma is required for theorem 2");
            report = theorem2_lower_bound(g, pi, *b.gamma, b.K, curvature());
            break;
        case 3: {
            if (!b.gamma || !b.H) throw ValidationError("--gamma and -H are required for theorem 3");
            double L = 0.0;
            if (b.L) L = *b.L;
            else if (auto auto_l = lipschitz_constant(g.objective())) L = *auto_l;
            else throw ValidationError("no Lipschitz constant is known for this objective; pass -L");
            report = theorem3_upper_bound(L, g.n_states(), g.n_actions(), b.K, *b.H, *b.gamma, b.delta);
            break;
        }
        case 6: report = theorem6_lower_bound(g, pi, b.K, curvature()); break;
        default: throw ValidationError("--theorem must be 2, 3 or 6");
    }
    std::cout << format_bound_report(report);
    if (b.csv) std::cout << bound_report_csv_header() << '\n' << bound_report_csv_row(report) << '\n';
    return 0;
}

int run_experiment_cmd(const std::string& config) {
    const ExperimentConfig cfg = load_experiment_config(config);
    const ExperimentResult r = run_experiment_to_files(cfg);
    std::cout << "rows: " << r.rows.size() << "\ncells: " << r.cells.size() << "\noutput: " << cfg.output
              << "\nsummary: " << summary_path(cfg.output).string() << '\n';
    return 0;
}

int run_builtin(const std::string& name, const std::string& out, bool state_only, std::optional<double> noise) {
    Gumdp g = builtin_gumdp(name, state_only);
    if (noise) g = perturb_kernel(g, *noise);
    save_gumdp(g, out);
    std::cout << "wrote " << out << '\n';
    return 0;
}

int run_table1(const ModelArgs& m, const Table1Options& opt) {
    const Gumdp g = load_model(m);
    const StationaryPolicy pi = resolve_policy(g, m.policy);
    std::cout << format_table1(table1_matrix(g, pi, opt));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite- and infinite-trials evaluation of general-utility MDPs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(gumdp::kVersion));

    ModelArgs chain_args;
    auto* chain_cmd = app.add_subcommand("analyze-chain", "recurrent classes, absorption and stationary laws");
    add_model_args(chain_cmd, chain_args);

    ModelArgs exact_args;
    std::string setting;
    std::optional<double> exact_gamma;
    auto* exact_cmd = app.add_subcommand("eval-exact", "infinite-trials value f(d_pi)");
    add_model_args(exact_cmd, exact_args);
    exact_cmd->add_option("--setting", setting, "discounted or average")->required();
    exact_cmd->add_option("--gamma", exact_gamma, "discount factor");

    ModelArgs finite_args;
    int finite_K = 1;
    std::optional<std::string> finite_H;
    std::optional<double> finite_gamma;
    std::size_t finite_N = 10000;
    std::uint64_t finite_seed = 0;
    auto* finite_cmd = app.add_subcommand("eval-finite", "Monte Carlo estimate of f_K (discounted with --gamma)");
    add_model_args(finite_cmd, finite_args);
    finite_cmd->add_option("-K", finite_K, "trajectories per iteration")->required();
    finite_cmd->add_option("-H", finite_H, "trajectory length or 'inf' (discounted only)");
    finite_cmd->add_option("--gamma", finite_gamma, "discount factor; omit for the average setting");
    finite_cmd->add_option("-N", finite_N, "iterations");
    finite_cmd->add_option("--seed", finite_seed, "master seed");

    ModelArgs fexact_args;
    int fexact_K = 1;
    auto* fexact_cmd = app.add_subcommand("eval-finite-exact", "exact f_K in the average setting");
    add_model_args(fexact_cmd, fexact_args);
    fexact_cmd->add_option("-K", fexact_K, "trajectories")->required();

    ModelArgs bound_model;
    BoundArgs bound_args;
    auto* bound_cmd = app.add_subcommand("bounds", "mismatch bounds");
    add_model_args(bound_cmd, bound_model);
    bound_cmd->add_option("--theorem", bound_args.theorem, "2, 3 or 6")->required()->check(CLI::IsMember({2, 3, 6}));
    bound_cmd->add_option("-K", bound_args.K, "trajectories");
    bound_cmd->add_option("-H", bound_args.H, "trajectory length (theorem 3)");
    bound_cmd->add_option("--gamma", bound_args.gamma, "discount factor (theorems 2 and 3)");
    bound_cmd->add_option("--delta", bound_args.delta, "failure probability (theorem 3)");
    bound_cmd->add_option("-c", bound_args.c, "strong-convexity constant (default: from the objective)");
    bound_cmd->add_option("-L", bound_args.L, "Lipschitz constant (default: from the objective when known)");
    bound_cmd->add_flag("--csv", bound_args.csv, "also print a CSV row");

    std::string config;
    auto* exp_cmd = app.add_subcommand("experiment", "run an experiment config and write CSV");
    exp_cmd->add_option("config", config, "experiment JSON")->required();

    std::string builtin_name;
    std::string builtin_out;
    bool builtin_state_only = false;
    std::optional<double> builtin_noise;
    auto* builtin_cmd = app.add_subcommand("builtin", "write a builtin GUMDP as JSON");
    builtin_cmd->add_option("name", builtin_name, "mf1, mf2 or mf3")->required();
    builtin_cmd->add_option("--out", builtin_out, "output file")->required();
    builtin_cmd->add_flag("--state-only", builtin_state_only, "state occupancies");
    builtin_cmd->add_option("--noise", builtin_noise, "kernel noise eps");

    ModelArgs table_args;
    Table1Options table_opt;
    auto* table_cmd = app.add_subcommand("table1", "equivalence of finite and infinite trials by setting");
    add_model_args(table_cmd, table_args);
    table_cmd->add_option("--gamma", table_opt.gamma, "discount factor for the discounted evidence");
    table_cmd->add_option("-K", table_opt.K, "trajectories");
    table_cmd->add_option("-N", table_opt.N, "Monte Carlo iterations");
    table_cmd->add_option("--seed", table_opt.seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::validation);
    }

    try {
        if (*chain_cmd) return run_analyze_chain(chain_args);
        if (*exact_cmd) return run_eval_exact(exact_args, setting, exact_gamma);
        if (*finite_cmd) return run_eval_finite(finite_args, finite_K, finite_H, finite_gamma, finite_N, finite_seed);
        if (*fexact_cmd) return run_eval_finite_exact(fexact_args, fexact_K);
        if (*bound_cmd) return run_bounds(bound_model, bound_args);
        if (*exp_cmd) return run_experiment_cmd(config);
        if (*builtin_cmd) return run_builtin(builtin_name, builtin_out, builtin_state_only, builtin_noise);
        if (*table_cmd) return run_table1(table_args, table_opt);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::validation);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numerical);
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::io);
    }
    return static_cast<int>(ExitCode::validation);
}
