#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "tabrl/experiment.hpp"
#include "tabrl/oracle.hpp"
#include "tabrl/plot.hpp"
#include "tabrl/serialize.hpp"
#include "tabrl/verify.hpp"

namespace {

using namespace tabrl;

int cmd_run(const std::string& preset_name, const std::string& config_path,
            std::uint64_t seed, bool seed_given, const std::string& out_dir,
            int workers) {
    ExperimentConfig config;
    if (!preset_name.empty())
        config = preset(preset_name);
    else
        config = config_from_json(load_text_file(config_path));
    if (seed_given) config.master_seed = seed;
    if (!out_dir.empty()) config.out_dir = out_dir;

    const ExperimentResult result = run_experiment(config, workers);

    int skipped = 0;
    for (const auto& report : result.envs) {
        if (!report.skipped) continue;
        ++skipped;
        std::fprintf(stderr, "env %d skipped: %s\n", report.env,
                     report.reason.c_str());
    }
    std::printf("experiment: %s\n", config.name.c_str());
    std::printf("environments: %d (%d skipped)\n", config.num_envs, skipped);
    std::printf("rows: %zu\n", result.rows.size());
    std::printf("output: %s\n", config.out_dir.c_str());
    return 0;
}

int cmd_verify(const std::string& suite, int trials, int traces, int episodes,
               int steps, std::uint64_t seed) {
    bool all_passed = true;

    if (suite == "equivalence" || suite == "all") {
        TmdpSpec spec;
        spec.num_actions = 4;
        spec.depth = 5;
        spec.branching = 1;
        spec.dyadic_bits = 10;
        const EquivalenceReport report =
            lockstep_equivalence(spec, trials, traces, episodes, RngStream(seed));
        std::printf("suite: equivalence\n");
        std::printf("instances: %d\n", report.instances);
        std::printf("traces_per_instance: %d\n", report.traces_per_instance);
        std::printf("episodes: %d\n", report.episodes);
        std::printf("max_abs_q_diff: %s\n",
                    format_double(report.max_abs_q_diff).c_str());
        std::printf("exact_equal: %s\n", report.exact_equal ? "true" : "false");
        if (report.first_divergence) {
            const auto& d = *report.first_divergence;
            std::printf(
                "first_divergence: instance=%d trace=%d episode=%d state=%d "
                "action=%d ec=%s ps=%s\n",
                d.instance, d.trace, d.episode, d.state, d.action,
                format_double(d.ec_value).c_str(), format_double(d.ps_value).c_str());
        }
        all_passed = all_passed && report.exact_equal;
    }

    if (suite == "drain" || suite == "all") {
        const DrainSuiteReport report =
            drain_suite(suite == "all" ? 50 : trials, steps, RngStream(seed));
        const bool passed = report.max_gap <= 1e-8;
        std::printf("suite: drain\n");
        std::printf("instances: %d\n", report.instances);
        std::printf("steps: %d\n", report.steps);
        std::printf("max_gap: %s\n", format_double(report.max_gap).c_str());
        std::printf("passed: %s\n", passed ? "true" : "false");
        all_passed = all_passed && passed;
    }

    if (suite == "ec-bound" || suite == "all") {
        TmdpSpec spec;
        spec.num_actions = 4;
        spec.depth = 5;
        spec.branching = 1;
        spec.dyadic_bits = 10;
        const bool passed = ec_bound_check(spec, 5.0, 10, RngStream(seed));
        std::printf("suite: ec-bound\n");
        std::printf("passed: %s\n", passed ? "true" : "false");
        all_passed = all_passed && passed;
    }

    return all_passed ? 0 : 1;
}

int cmd_oracle(const std::string& env_path, double gamma, double epsilon) {
    const TabularMdp mdp = mdp_from_json(load_text_file(env_path));
    const OptimalSolution sol = policy_iteration(mdp, gamma);
    const RateBaselines baselines =
        compute_baselines(mdp, sol, epsilon, EpsilonStyle::exclusive);

    std::printf("format: oracle-report-v1\n");
    std::printf("states: %d\n", mdp.num_states);
    std::printf("actions: %d\n", mdp.num_actions);
    std::printf("method: %s\n",
                sol.backward_induction ? "backward_induction" : "policy_iteration");
    std::printf("iterations: %d\n", sol.iterations);
    std::printf("residual: %s\n", format_double(sol.residual).c_str());
    std::printf("r_uniform: %s\n", format_double(baselines.r_uniform).c_str());
    std::printf("r_opt: %s\n", format_double(baselines.r_opt).c_str());
    std::printf("degenerate: %s\n", baselines.degenerate ? "true" : "false");
    std::printf("q_star:\n");
    for (StateId s = 0; s < mdp.num_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        for (ActionId a = 0; a < mdp.num_actions; ++a)
            std::printf("%d %d %s\n", s, a, format_double(sol.q_star(s, a)).c_str());
    }
    return 0;
}

int cmd_plot(const std::string& summary_path) {
    // Reparse the summary CSV into rows, then drop the script next to it.
    const std::string text = load_text_file(summary_path);
    std::vector<SummaryRow> summary;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line[0] == '#' || line_no <= 2) continue;
        SummaryRow row;
        std::size_t comma = line.find(',');
        row.algorithm = line.substr(0, comma);
        std::sscanf(line.c_str() + comma + 1, "%d,%lld,%lf,%lf,%lf,%lf,%d",
                    &row.window, reinterpret_cast<long long*>(&row.step_end),
                    &row.mean_rate, &row.se_rate, &row.mean_normalized,
                    &row.se_normalized, &row.samples);
        summary.push_back(std::move(row));
    }
    const auto dir = std::filesystem::path(summary_path).parent_path();
    const std::string script = emit_plot_script(summary, "tabrl curves");
    save_text_file((dir / "curves.gp").string(), script);
    std::printf("wrote %s\n", (dir / "curves.gp").string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabular reinforcement-learning benchmark harness"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment and write CSV curves");
    std::string preset_name;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    int workers = 1;
    auto* preset_opt = run->add_option("--preset", preset_name,
                                      "Benchmark preset (fig1a|fig1b|fig2b|fig3b)");
    auto* config_opt =
        run->add_option("--config", config_path, "Experiment config JSON path");
    preset_opt->excludes(config_opt);
    auto* seed_opt = run->add_option("--seed", seed, "Master seed override");
    run->add_option("--out", out_dir, "Output directory override");
    run->add_option("--workers", workers, "Worker thread count")
        ->check(CLI::PositiveNumber);

    auto* verify =
        app.add_subcommand("verify", "Run the theoretical-claim check suites");
    std::string suite = "all";
    int trials = 100;
    int traces = 10;
    int episodes = 50;
    int steps = 500;
    std::uint64_t verify_seed = 0;
    verify->add_option("--suite", suite, "equivalence|drain|ec-bound|all")
        ->check(CLI::IsMember({"equivalence", "drain", "ec-bound", "all"}));
    verify->add_option("--trials", trials, "Instances per suite");
    verify->add_option("--traces", traces, "Behavior traces per instance");
    verify->add_option("--episodes", episodes, "Episodes per trace");
    verify->add_option("--steps", steps, "Steps per drain instance");
    verify->add_option("--seed", verify_seed, "Suite seed");

    auto* oracle = app.add_subcommand("oracle", "Solve a serialized MDP exactly");
    std::string env_path;
    double gamma = 1.0;
    double epsilon = 0.1;
    oracle->add_option("--env", env_path, "TabularMdp JSON path")->required();
    oracle->add_option("--gamma", gamma, "Discount factor");
    oracle->add_option("--epsilon", epsilon, "Exploration rate for baselines");

    auto* plot = app.add_subcommand("plot", "Regenerate the gnuplot script");
    std::string summary_path;
    plot->add_option("--summary", summary_path, "summary.csv path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (preset_name.empty() == config_path.empty()) {
                std::fprintf(stderr, "run needs exactly one of --preset/--config\n");
                return 2;
            }
            return cmd_run(preset_name, config_path, seed, seed_opt->count() > 0,
                           out_dir, workers);
        }
        if (verify->parsed())
            return cmd_verify(suite, trials, traces, episodes, steps, verify_seed);
        if (oracle->parsed()) return cmd_oracle(env_path, gamma, epsilon);
        if (plot->parsed()) return cmd_plot(summary_path);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
    return 2;
}
