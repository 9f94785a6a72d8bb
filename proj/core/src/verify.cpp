#include "tabrl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tabrl/agents.hpp"
#include "tabrl/oracle.hpp"

namespace tabrl {

EquivalenceReport lockstep_equivalence(TmdpSpec spec, int instances, int traces,
                                       int episodes, RngStream master) {
    spec.branching = 1;
    if (spec.dyadic_bits == 0) spec.dyadic_bits = 10;

    EquivalenceReport report;
    report.instances = instances;
    report.traces_per_instance = traces;
    report.episodes = episodes;

    AgentParams params;
    params.gamma = 1.0;
    params.q0 = 0.0;
    params.model_mode = ModelMode::counting;

    for (int i = 0; i < instances; ++i) {
        const TabularMdp env = gen_det_tmdp(spec, master.child(1).child(i));
        for (int t = 0; t < traces; ++t) {
            RngStream trace_rng = master.child(2).child(i).child(t);
            auto ec = make_agent(Algorithm::episodic_control, env.num_states,
                                 env.num_actions, params);
            auto ps = make_agent(Algorithm::prioritized_sweeping_reset,
                                 env.num_states, env.num_actions, params);
            for (int e = 0; e < episodes; ++e) {
                ec->begin_episode();
                ps->begin_episode();
                StateId s = reset(env, trace_rng);
                for (;;) {
                    const auto a = static_cast<ActionId>(
                        trace_rng.uniform_below(env.num_actions));
                    const Transition tr = step(env, s, a, trace_rng);
                    ec->observe(tr);
                    ps->observe(tr);
                    if (tr.terminal) break;
                    s = tr.next_state;
                }
                ec->end_episode();
                ps->end_episode();

                const auto& qe = ec->qtable().values;
                const auto& qp = ps->qtable().values;
                for (std::size_t k = 0; k < qe.size(); ++k) {
                    const double diff = std::abs(qe[k] - qp[k]);
                    if (diff > report.max_abs_q_diff) report.max_abs_q_diff = diff;
                    if (diff != 0.0 && !report.first_divergence) {
                        const auto A =
                            static_cast<std::size_t>(env.num_actions);
                        report.first_divergence = DivergencePoint{
                            i,
                            t,
                            e,
                            static_cast<StateId>(k / A),
                            static_cast<ActionId>(k % A),
                            qe[k],
                            qp[k]};
                    }
                }
            }
        }
    }
    report.exact_equal = report.max_abs_q_diff == 0.0;
    return report;
}

double drain_consistency(const TabularMdp& mdp, double gamma, int steps,
                         RngStream rng) {
    QTable q(mdp.num_states, mdp.num_actions, 0.0);
    PlannerState planner(mdp.num_states, mdp.num_actions, ModelMode::counting, 0.1,
                         0.0);
    std::vector<double> warm;
    double max_gap = 0.0;

    StateId s = reset(mdp, rng);
    for (int k = 0; k < steps; ++k) {
        const auto a = static_cast<ActionId>(rng.uniform_below(mdp.num_actions));
        const Transition tr = step(mdp, s, a, rng);
        ps_observe(q, planner, tr, gamma, /*enqueue_source=*/true);
        ps_plan(q, planner, gamma, std::numeric_limits<int>::max());

        const ValueIterationResult vi = value_iteration_on_model(
            planner.model, mdp.terminal, gamma, 0.0, 1e-12, 1000000,
            warm.empty() ? nullptr : &warm);
        warm = vi.v;
        for (std::size_t idx = 0; idx < q.values.size(); ++idx)
            max_gap = std::max(max_gap, std::abs(q.values[idx] - vi.q.values[idx]));

        s = tr.terminal ? reset(mdp, rng) : tr.next_state;
    }
    return max_gap;
}

bool ec_bound_check(TmdpSpec spec, double q0, int episodes, RngStream master) {
    spec.branching = 1;
    if (spec.dyadic_bits == 0) spec.dyadic_bits = 10;
    if (q0 < static_cast<double>(spec.depth) * 1.0)
        throw std::invalid_argument(
            "ec_bound_check: q0 below depth * max reward, bound not applicable");

    const TabularMdp env = gen_det_tmdp(spec, master.child(1));
    RngStream trace_rng = master.child(2);

    AgentParams params;
    params.gamma = 1.0;
    params.q0 = q0;
    params.model_mode = ModelMode::counting;
    params.backups_per_step = 3;

    auto ec = make_agent(Algorithm::episodic_control, env.num_states,
                         env.num_actions, params);
    auto ps = make_agent(Algorithm::prioritized_sweeping, env.num_states,
                         env.num_actions, params);

    bool ec_frozen = true;
    bool ps_moved = false;
    for (int e = 0; e < episodes; ++e) {
        ec->begin_episode();
        ps->begin_episode();
        StateId s = reset(env, trace_rng);
        for (;;) {
            const auto a =
                static_cast<ActionId>(trace_rng.uniform_below(env.num_actions));
            const Transition tr = step(env, s, a, trace_rng);
            ec->observe(tr);
            ps->observe(tr);
            ps->plan();
            if (tr.terminal) break;
            s = tr.next_state;
        }
        ec->end_episode();
        ps->end_episode();

        for (double v : ec->qtable().values)
            if (v != q0) ec_frozen = false;
        // Terminal rows are pinned to zero by the planner as bookkeeping;
        // only decision-state entries witness a real value change.
        for (StateId st = 0; st < env.num_states; ++st) {
            if (env.is_terminal(st)) continue;
            for (ActionId a = 0; a < env.num_actions; ++a)
                if (ps->qtable()(st, a) != q0) ps_moved = true;
        }
    }
    return ec_frozen && ps_moved;
}

DrainSuiteReport drain_suite(int instances, int steps, RngStream master) {
    DrainSuiteReport report;
    report.instances = instances;
    report.steps = steps;
    for (int i = 0; i < instances; ++i) {
        TabularMdp env;
        double gamma;
        if (i % 2 == 0) {
            TmdpSpec spec;
            spec.num_actions = 4;
            spec.depth = 4;
            spec.branching = 2;
            env = gen_stoch_tmdp(spec, master.child(3).child(i));
            gamma = 1.0;
        } else {
            MazeSpec spec;
            spec.width = 20;
            spec.height = 20;
            spec.wall_density = 0.3;
            env = gen_maze(spec, master.child(3).child(i)).mdp;
            gamma = 0.99;
        }
        const double gap =
            drain_consistency(env, gamma, steps, master.child(4).child(i));
        report.max_gap = std::max(report.max_gap, gap);
    }
    return report;
}

}  // namespace tabrl
