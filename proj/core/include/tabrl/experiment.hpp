#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tabrl/agents.hpp"
#include "tabrl/envgen.hpp"
#include "tabrl/mdp.hpp"
#include "tabrl/oracle.hpp"
#include "tabrl/rng.hpp"

namespace tabrl {

enum class EnvFamily { det_tmdp, stoch_tmdp, maze };

const char* to_string(EnvFamily family);
bool env_family_from_string(const std::string& name, EnvFamily& out);

struct EnvFamilyConfig {
    EnvFamily family = EnvFamily::det_tmdp;
    TmdpSpec tmdp;  // tree families
    MazeSpec maze;  // maze family
};

/// Per-agent hyperparameters; shared gamma/epsilon come from the experiment.
struct AgentSpec {
    std::string id;
    Algorithm algorithm = Algorithm::episodic_control;
    double q0 = 0.0;
    bool prefer_novel = false;
    double alpha = 0.1;
    int nstep = 5;
    double lambda = 0.2;
    double kappa = 0.1;
    ModelMode model_mode = ModelMode::counting;
    int backups_per_step = 3;
};

struct ExperimentConfig {
    std::string name = "custom";
    EnvFamilyConfig env;
    std::vector<AgentSpec> agents;
    double gamma = 1.0;
    double epsilon = 0.1;
    EpsilonStyle epsilon_style = EpsilonStyle::exclusive;
    std::int64_t window = 200;        // T: steps per reward-rate window
    int num_envs = 100;               // N: sampled environments
    int runs_per_env = 8;             // M: independent runs per environment
    std::int64_t steps_per_run = 6000;
    std::int64_t episode_cap = 10000;  // forced restart, no reward
    std::uint64_t master_seed = 0;
    std::string out_dir = "out";
};

/// One message per violated config invariant; empty means runnable.
std::vector<std::string> validate(const ExperimentConfig& config);

/// Returns the named benchmark configuration.
/// Known names: fig1a, fig1b, fig2b, fig3b. Throws on anything else.
ExperimentConfig preset(const std::string& name);

AgentParams agent_params(const ExperimentConfig& config, const AgentSpec& spec);

TabularMdp generate_environment(const EnvFamilyConfig& env, RngStream rng);

struct CurveRow {
    std::string algorithm;
    int env = 0;
    int run = 0;
    int window = 0;
    std::int64_t step_end = 0;
    double reward_rate = 0.0;
    double normalized_rate = 0.0;
};

struct RunResult {
    std::vector<double> window_sums;  // reward per window, exact accumulation
    double total_reward = 0.0;
    std::int64_t episodes = 0;
};

/// Drives one agent for `steps` environment steps, accumulating rewards into
/// contiguous windows that ignore episode boundaries.
RunResult simulate_run(const TabularMdp& env, Agent& agent, std::int64_t steps,
                       std::int64_t window, std::int64_t episode_cap,
                       RngStream rng);

struct SummaryRow {
    std::string algorithm;
    int window = 0;
    std::int64_t step_end = 0;
    double mean_rate = 0.0;
    double se_rate = 0.0;
    double mean_normalized = 0.0;
    double se_normalized = 0.0;
    int samples = 0;
};

/// Mean and standard error per (algorithm, window).
std::vector<SummaryRow> aggregate(const std::vector<CurveRow>& rows);

struct EnvReport {
    int env = 0;
    bool skipped = false;
    std::string reason;
    RateBaselines baselines;
};

struct ExperimentResult {
    std::vector<CurveRow> rows;
    std::vector<SummaryRow> summary;
    std::vector<EnvReport> envs;
};

/// Runs the full grid (env x agent x run) on `workers` threads and writes
/// curves.csv, thin.csv, summary.csv, curves.gp and manifest.json to
/// config.out_dir. Results are identical for any worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, int workers = 1);

}  // namespace tabrl
