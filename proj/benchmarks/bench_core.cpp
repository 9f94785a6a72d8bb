#include <benchmark/benchmark.h>

#include "tabrl/agents.hpp"
#include "tabrl/envgen.hpp"
#include "tabrl/experiment.hpp"
#include "tabrl/oracle.hpp"
#include "tabrl/pqueue.hpp"
#include "tabrl/updates.hpp"

namespace {

using namespace tabrl;

TabularMdp bench_tmdp() {
    TmdpSpec spec;
    spec.num_actions = 4;
    spec.depth = 5;
    spec.reward_mode = RewardMode::terminal_only;
    return gen_det_tmdp(spec, RngStream(11));
}

TabularMdp bench_maze() {
    MazeSpec spec;
    spec.width = 20;
    spec.height = 20;
    spec.wall_density = 0.3;
    return gen_maze(spec, RngStream(12)).mdp;
}

void BM_env_step(benchmark::State& state) {
    const TabularMdp mdp = bench_maze();
    RngStream rng(1);
    StateId s = reset(mdp, rng);
    ActionId a = 0;
    for (auto _ : state) {
        const Transition t = step(mdp, s, a, rng);
        benchmark::DoNotOptimize(t);
        s = t.terminal ? reset(mdp, rng) : t.next_state;
        a = static_cast<ActionId>(rng.uniform_below(4));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_env_step);

void BM_pqueue_churn(benchmark::State& state) {
    const StateId n = static_cast<StateId>(state.range(0));
    RngStream rng(2);
    for (auto _ : state) {
        MaxPriorityQueue pq(n);
        for (int i = 0; i < 4 * n; ++i)
            pq.push_or_raise(static_cast<StateId>(rng.uniform_below(n)),
                             rng.uniform01());
        while (!pq.empty()) benchmark::DoNotOptimize(pq.pop());
    }
    state.SetItemsProcessed(state.iterations() * 5 * n);
}
BENCHMARK(BM_pqueue_churn)->Arg(64)->Arg(1024);

void BM_planner_step(benchmark::State& state) {
    const TabularMdp mdp = bench_maze();
    AgentParams params;
    params.gamma = 0.99;
    params.backups_per_step = 3;
    auto agent =
        make_agent(Algorithm::prioritized_sweeping, mdp.num_states, mdp.num_actions, params);
    RngStream rng(3);
    StateId s = reset(mdp, rng);
    agent->begin_episode();
    for (auto _ : state) {
        const ActionId a = agent->select(s, rng);
        const Transition t = step(mdp, s, a, rng);
        agent->observe(t);
        agent->plan();
        if (t.terminal) {
            agent->end_episode();
            s = reset(mdp, rng);
            agent->begin_episode();
        } else {
            s = t.next_state;
        }
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_planner_step);

void BM_value_iteration(benchmark::State& state) {
    const TabularMdp mdp = bench_maze();
    for (auto _ : state) {
        auto vi = value_iteration(mdp, 0.99);
        benchmark::DoNotOptimize(vi.residual);
    }
}
BENCHMARK(BM_value_iteration);

void BM_policy_iteration(benchmark::State& state) {
    const TabularMdp mdp = bench_maze();
    for (auto _ : state) {
        auto sol = policy_iteration(mdp, 0.99);
        benchmark::DoNotOptimize(sol.residual);
    }
}
BENCHMARK(BM_policy_iteration);

void BM_simulate_run(benchmark::State& state) {
    const TabularMdp mdp = bench_tmdp();
    AgentParams params;
    params.gamma = 1.0;
    params.prefer_novel = true;
    for (auto _ : state) {
        auto agent = make_agent(Algorithm::prioritized_sweeping_reset, mdp.num_states,
                                mdp.num_actions, params);
        auto rr = simulate_run(mdp, *agent, 6000, 200, 10000, RngStream(4));
        benchmark::DoNotOptimize(rr.total_reward);
    }
    state.SetItemsProcessed(state.iterations() * 6000);
}
BENCHMARK(BM_simulate_run);

}  // namespace

BENCHMARK_MAIN();
