#include "tabrl/experiment.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "tabrl/plot.hpp"
#include "tabrl/serialize.hpp"

namespace tabrl {

const char* to_string(EnvFamily family) {
    switch (family) {
        case EnvFamily::det_tmdp: return "det_tmdp";
        case EnvFamily::stoch_tmdp: return "stoch_tmdp";
        case EnvFamily::maze: return "maze";
    }
    return "?";
}

bool env_family_from_string(const std::string& name, EnvFamily& out) {
    for (EnvFamily f : {EnvFamily::det_tmdp, EnvFamily::stoch_tmdp, EnvFamily::maze}) {
        if (name == to_string(f)) {
            out = f;
            return true;
        }
    }
    return false;
}

std::vector<std::string> validate(const ExperimentConfig& config) {
    std::vector<std::string> problems;
    const auto check = [&](bool ok, const char* message) {
        if (!ok) problems.emplace_back(message);
    };
    check(config.window >= 1, "window must be at least 1");
    check(config.num_envs >= 1, "num_envs must be at least 1");
    check(config.runs_per_env >= 1, "runs_per_env must be at least 1");
    check(config.steps_per_run >= config.window,
          "steps_per_run must cover at least one window");
    check(config.window >= 1 && config.steps_per_run % config.window == 0,
          "steps_per_run must be a multiple of window");
    check(config.episode_cap >= 1, "episode_cap must be at least 1");
    check(config.gamma > 0.0 && config.gamma <= 1.0, "gamma must be in (0, 1]");
    check(config.epsilon >= 0.0 && config.epsilon <= 1.0, "epsilon must be in [0, 1]");
    check(!config.agents.empty(), "at least one agent is required");

    std::set<std::string> ids;
    for (const auto& spec : config.agents) {
        check(!spec.id.empty(), "agent id must be non-empty");
        check(ids.insert(spec.id).second, "agent ids must be unique");
        check(std::isfinite(spec.q0), "q0 must be finite");
        check(spec.alpha > 0.0 && spec.alpha <= 1.0, "alpha must be in (0, 1]");
        check(spec.nstep >= 1, "nstep must be at least 1");
        check(spec.lambda >= 0.0 && spec.lambda <= 1.0, "lambda must be in [0, 1]");
        check(spec.kappa > 0.0 && spec.kappa <= 1.0, "kappa must be in (0, 1]");
        check(spec.backups_per_step >= 0, "backups_per_step must be non-negative");
    }

    if (config.env.family == EnvFamily::maze) {
        const auto& m = config.env.maze;
        check(m.width >= 1 && m.height >= 1, "maze dimensions must be positive");
        check(m.width * m.height >= 2, "maze needs at least two cells");
        check(m.wall_density >= 0.0 && m.wall_density < 1.0,
              "wall_density must be in [0, 1)");
        const bool goal_given = m.goal_x >= 0 || m.goal_y >= 0;
        if (goal_given)
            check(m.goal_x >= 0 && m.goal_x < m.width && m.goal_y >= 0 &&
                      m.goal_y < m.height,
                  "explicit goal must lie inside the maze");
    } else {
        const auto& t = config.env.tmdp;
        check(t.num_actions >= 1, "tree num_actions must be at least 1");
        check(t.depth >= 1, "tree depth must be at least 1");
        check(t.dyadic_bits >= 0 && t.dyadic_bits <= 52,
              "dyadic_bits must be in [0, 52]");
        check(t.reward_prob > 0.0 && t.reward_prob <= 1.0,
              "reward_prob must be in (0, 1]");
        if (config.env.family == EnvFamily::stoch_tmdp)
            check(t.branching >= 1, "stochastic branching must be at least 1");
    }
    return problems;
}

AgentParams agent_params(const ExperimentConfig& config, const AgentSpec& spec) {
    AgentParams p;
    p.gamma = config.gamma;
    p.epsilon = config.epsilon;
    p.epsilon_style = config.epsilon_style;
    p.q0 = spec.q0;
    p.prefer_novel = spec.prefer_novel;
    p.alpha = spec.alpha;
    p.nstep = spec.nstep;
    p.lambda = spec.lambda;
    p.kappa = spec.kappa;
    p.model_mode = spec.model_mode;
    p.backups_per_step = spec.backups_per_step;
    return p;
}

TabularMdp generate_environment(const EnvFamilyConfig& env, RngStream rng) {
    switch (env.family) {
        case EnvFamily::det_tmdp: return gen_det_tmdp(env.tmdp, rng);
        case EnvFamily::stoch_tmdp: return gen_stoch_tmdp(env.tmdp, rng);
        case EnvFamily::maze: return gen_maze(env.maze, rng).mdp;
    }
    throw std::invalid_argument("unknown environment family");
}

namespace {

AgentSpec make_spec(std::string id, Algorithm alg) {
    AgentSpec spec;
    spec.id = std::move(id);
    spec.algorithm = alg;
    return spec;
}

/// The nine-curve roster shared by all benchmark presets; only the learning
/// rates and optimistic initializations vary.
std::vector<AgentSpec> benchmark_roster(double ql_alpha, double qlambda_alpha,
                                        double lambda, double nstep_alpha, int nstep,
                                        double mc_alpha, double q0_q, double q0_ps) {
    std::vector<AgentSpec> agents;

    AgentSpec ec = make_spec("ec", Algorithm::episodic_control);
    ec.prefer_novel = true;
    agents.push_back(ec);

    AgentSpec ps = make_spec("ps", Algorithm::prioritized_sweeping);
    ps.prefer_novel = true;
    agents.push_back(ps);

    AgentSpec ps_reset = make_spec("ps_reset", Algorithm::prioritized_sweeping_reset);
    ps_reset.prefer_novel = true;
    agents.push_back(ps_reset);

    AgentSpec ql = make_spec("q_learning", Algorithm::q_learning);
    ql.alpha = ql_alpha;
    agents.push_back(ql);

    AgentSpec qlam = make_spec("q_lambda", Algorithm::q_lambda);
    qlam.alpha = qlambda_alpha;
    qlam.lambda = lambda;
    agents.push_back(qlam);

    AgentSpec ns = make_spec("nstep_td", Algorithm::nstep_td);
    ns.alpha = nstep_alpha;
    ns.nstep = nstep;
    agents.push_back(ns);

    AgentSpec mc = make_spec("mc", Algorithm::monte_carlo);
    mc.alpha = mc_alpha;
    agents.push_back(mc);

    AgentSpec ql_opt = make_spec("q_learning_optimistic", Algorithm::q_learning);
    ql_opt.alpha = ql_alpha;
    ql_opt.q0 = q0_q;
    agents.push_back(ql_opt);

    AgentSpec ps_opt = make_spec("ps_optimistic", Algorithm::prioritized_sweeping);
    ps_opt.q0 = q0_ps;
    agents.push_back(ps_opt);

    return agents;
}

}  // namespace

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig config;
    config.name = name;
    if (name == "fig1a" || name == "fig1b") {
        config.env.family = EnvFamily::det_tmdp;
        config.env.tmdp.num_actions = 4;
        config.env.tmdp.depth = 5;
        config.env.tmdp.branching = 1;
        if (name == "fig1b") {
            // Sparse irregular rewards: most value sits on scattered shallow
            // edges every learner resolves quickly, so the curves bunch up.
            config.env.tmdp.reward_mode = RewardMode::intermittent;
            config.env.tmdp.reward_prob = 0.25;
        }
        config.gamma = 1.0;
        config.epsilon = 0.1;
        config.window = 200;
        config.num_envs = 100;
        config.runs_per_env = 8;
        config.steps_per_run = 6000;
        config.agents = benchmark_roster(1.0, 1.0, 0.2, 0.08, 5, 0.08, 5.0, 5.0);
    } else if (name == "fig2b") {
        config.env.family = EnvFamily::stoch_tmdp;
        config.env.tmdp.num_actions = 4;
        config.env.tmdp.depth = 4;
        config.env.tmdp.branching = 2;
        config.env.tmdp.reward_mode = RewardMode::terminal_only;
        config.gamma = 1.0;
        config.epsilon = 0.1;
        config.window = 100;
        config.num_envs = 100;
        config.runs_per_env = 50;
        config.steps_per_run = 3000;
        config.agents = benchmark_roster(0.1, 0.1, 0.2, 0.05, 5, 0.05, 5.0, 5.0);
    } else if (name == "fig3b") {
        config.env.family = EnvFamily::maze;
        config.env.maze.width = 20;
        config.env.maze.height = 20;
        config.env.maze.wall_density = 0.3;
        config.gamma = 0.99;
        config.epsilon = 0.1;
        config.window = 10000;
        config.num_envs = 50;
        config.runs_per_env = 8;
        // Long enough for the optimistic Q-learner to burn through its
        // initialization (~1600 pairs x ~185 shrink steps) and settle, which
        // is where the curves separate cleanly.
        config.steps_per_run = 500000;
        config.episode_cap = 10000;
        config.agents = benchmark_roster(1.0, 0.005, 0.2, 0.01, 25, 0.01, 5.0, 0.005);
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return config;
}

RunResult simulate_run(const TabularMdp& env, Agent& agent, std::int64_t steps,
                       std::int64_t window, std::int64_t episode_cap,
                       RngStream rng) {
    RunResult result;
    result.window_sums.assign(static_cast<std::size_t>(steps / window), 0.0);

    std::int64_t step_count = 0;
    while (step_count < steps) {
        agent.begin_episode();
        StateId s = reset(env, rng);
        std::int64_t episode_steps = 0;
        bool episode_closed = false;
        while (step_count < steps) {
            const ActionId a = agent.select(s, rng);
            const Transition t = step(env, s, a, rng);
            result.window_sums[static_cast<std::size_t>(step_count / window)] +=
                t.reward;
            result.total_reward += t.reward;
            ++step_count;
            ++episode_steps;
            agent.observe(t);
            agent.plan();
            if (t.terminal || episode_steps >= episode_cap) {
                agent.end_episode();
                ++result.episodes;
                episode_closed = true;
                break;
            }
            s = t.next_state;
        }
        if (!episode_closed) break;  // step budget ran out mid-episode
    }
    return result;
}

std::vector<SummaryRow> aggregate(const std::vector<CurveRow>& rows) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::size_t> index;
    int max_window = -1;
    for (const auto& row : rows) {
        if (index.emplace(row.algorithm, order.size()).second)
            order.push_back(row.algorithm);
        max_window = std::max(max_window, row.window);
    }
    const std::size_t num_windows = static_cast<std::size_t>(max_window + 1);

    struct Cell {
        double sum_rate = 0.0, sq_rate = 0.0;
        double sum_norm = 0.0, sq_norm = 0.0;
        std::int64_t step_end = 0;
        int n = 0;
    };
    std::vector<Cell> cells(order.size() * num_windows);
    for (const auto& row : rows) {
        Cell& c = cells[index[row.algorithm] * num_windows +
                        static_cast<std::size_t>(row.window)];
        c.sum_rate += row.reward_rate;
        c.sq_rate += row.reward_rate * row.reward_rate;
        c.sum_norm += row.normalized_rate;
        c.sq_norm += row.normalized_rate * row.normalized_rate;
        c.step_end = row.step_end;
        c.n += 1;
    }

    const auto stderr_of = [](double sum, double sq, int n) {
        if (n < 2) return 0.0;
        const double mean = sum / n;
        const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1));
        return std::sqrt(var / n);
    };

    std::vector<SummaryRow> summary;
    for (std::size_t ai = 0; ai < order.size(); ++ai) {
        for (std::size_t w = 0; w < num_windows; ++w) {
            const Cell& c = cells[ai * num_windows + w];
            if (c.n == 0) continue;
            SummaryRow row;
            row.algorithm = order[ai];
            row.window = static_cast<int>(w);
            row.step_end = c.step_end;
            row.mean_rate = c.sum_rate / c.n;
            row.se_rate = stderr_of(c.sum_rate, c.sq_rate, c.n);
            row.mean_normalized = c.sum_norm / c.n;
            row.se_normalized = stderr_of(c.sum_norm, c.sq_norm, c.n);
            row.samples = c.n;
            summary.push_back(std::move(row));
        }
    }
    return summary;
}

namespace {

constexpr const char* kCurvesHeader =
    "# tabrl-curves v1\n"
    "algorithm,env,run,window,step_end,reward_rate,normalized_rate\n";

void append_curve_row(std::string& out, const CurveRow& row) {
    out += row.algorithm;
    out += ',';
    out += std::to_string(row.env);
    out += ',';
    out += std::to_string(row.run);
    out += ',';
    out += std::to_string(row.window);
    out += ',';
    out += std::to_string(row.step_end);
    out += ',';
    out += format_double(row.reward_rate);
    out += ',';
    out += format_double(row.normalized_rate);
    out += '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
    {
        const auto problems = validate(config);
        if (!problems.empty())
            throw std::invalid_argument("invalid config: " + problems.front());
    }
    const RngStream master(config.master_seed);

    const int N = config.num_envs;
    std::vector<TabularMdp> envs(static_cast<std::size_t>(N));
    std::vector<RateBaselines> baselines(static_cast<std::size_t>(N));
    ExperimentResult out;
    out.envs.resize(static_cast<std::size_t>(N));
    std::vector<int> kept;
    for (int e = 0; e < N; ++e) {
        out.envs[e].env = e;
        envs[e] = generate_environment(config.env, master.child(1).child(e));
        try {
            const OptimalSolution sol = policy_iteration(envs[e], config.gamma);
            if (sol.residual > 1e-10)
                throw std::runtime_error("optimal solve residual above 1e-10");
            baselines[e] =
                compute_baselines(envs[e], sol, config.epsilon, config.epsilon_style);
            if (!baselines[e].ok)
                throw std::runtime_error("reward-rate baseline solve failed");
            out.envs[e].baselines = baselines[e];
            kept.push_back(e);
        } catch (const std::exception& ex) {
            out.envs[e].skipped = true;
            out.envs[e].reason = ex.what();
        }
    }

    struct Task {
        int env;
        int agent;
        int run;
    };
    std::vector<Task> tasks;
    tasks.reserve(kept.size() * config.agents.size() *
                  static_cast<std::size_t>(config.runs_per_env));
    for (int e : kept)
        for (int ai = 0; ai < static_cast<int>(config.agents.size()); ++ai)
            for (int r = 0; r < config.runs_per_env; ++r) tasks.push_back({e, ai, r});

    std::vector<RunResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto run_tasks = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            const Task& task = tasks[i];
            const AgentSpec& spec = config.agents[task.agent];
            const TabularMdp& env = envs[task.env];
            auto agent = make_agent(spec.algorithm, env.num_states, env.num_actions,
                                    agent_params(config, spec));
            results[i] = simulate_run(
                env, *agent, config.steps_per_run, config.window, config.episode_cap,
                master.child(2).child(task.env).child(task.agent).child(task.run));
        }
    };
    if (workers <= 1) {
        run_tasks();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_tasks);
        for (auto& t : pool) t.join();
    }

    const auto num_windows = static_cast<std::size_t>(config.steps_per_run / config.window);
    out.rows.reserve(tasks.size() * num_windows);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Task& task = tasks[i];
        for (std::size_t w = 0; w < num_windows; ++w) {
            CurveRow row;
            row.algorithm = config.agents[task.agent].id;
            row.env = task.env;
            row.run = task.run;
            row.window = static_cast<int>(w);
            row.step_end = static_cast<std::int64_t>(w + 1) * config.window;
            row.reward_rate = results[i].window_sums[w] / config.window;
            row.normalized_rate =
                normalize_rate(row.reward_rate, baselines[task.env]).value;
            out.rows.push_back(std::move(row));
        }
    }
    out.summary = aggregate(out.rows);

    // First five (env, run) pairs, shared across algorithms, for thin curves.
    std::vector<std::pair<int, int>> thin_pairs;
    for (int e : kept) {
        for (int r = 0; r < config.runs_per_env && thin_pairs.size() < 5; ++r)
            thin_pairs.emplace_back(e, r);
        if (thin_pairs.size() >= 5) break;
    }
    const auto is_thin = [&](const CurveRow& row) {
        for (const auto& [e, r] : thin_pairs)
            if (row.env == e && row.run == r) return true;
        return false;
    };

    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const auto path = [&](const char* name) {
        return (fs::path(config.out_dir) / name).string();
    };

    std::string curves;
    curves.reserve(out.rows.size() * 48 + 128);
    curves += kCurvesHeader;
    for (const auto& row : out.rows) append_curve_row(curves, row);
    save_text_file(path("curves.csv"), curves);

    std::string thin;
    thin += kCurvesHeader;
    {
        int prev_env = -1, prev_run = -1;
        for (const auto& row : out.rows) {
            if (!is_thin(row)) continue;
            if ((row.env != prev_env || row.run != prev_run) && prev_env != -1)
                thin += '\n';  // gnuplot segment break between runs
            prev_env = row.env;
            prev_run = row.run;
            append_curve_row(thin, row);
        }
    }
    save_text_file(path("thin.csv"), thin);

    std::string summary;
    summary +=
        "# tabrl-summary v1\n"
        "algorithm,window,step_end,mean_rate,se_rate,mean_normalized,se_normalized,"
        "samples\n";
    for (const auto& row : out.summary) {
        summary += row.algorithm;
        summary += ',';
        summary += std::to_string(row.window);
        summary += ',';
        summary += std::to_string(row.step_end);
        summary += ',';
        summary += format_double(row.mean_rate);
        summary += ',';
        summary += format_double(row.se_rate);
        summary += ',';
        summary += format_double(row.mean_normalized);
        summary += ',';
        summary += format_double(row.se_normalized);
        summary += ',';
        summary += std::to_string(row.samples);
        summary += '\n';
    }
    save_text_file(path("summary.csv"), summary);

    save_text_file(path("curves.gp"), emit_plot_script(out.summary, config.name));

    nlohmann::json manifest;
    manifest["format"] = "manifest-v1";
    manifest["config"] = nlohmann::json::parse(to_json(config));
    nlohmann::json env_reports = nlohmann::json::array();
    for (const auto& report : out.envs) {
        nlohmann::json entry;
        entry["env"] = report.env;
        entry["skipped"] = report.skipped;
        if (report.skipped) {
            entry["reason"] = report.reason;
        } else {
            entry["r_uniform"] = report.baselines.r_uniform;
            entry["r_opt"] = report.baselines.r_opt;
            entry["degenerate"] = report.baselines.degenerate;
        }
        env_reports.push_back(std::move(entry));
    }
    manifest["environments"] = std::move(env_reports);
    save_text_file(path("manifest.json"), manifest.dump(2) + "\n");

    return out;
}

}  // namespace tabrl
