#pragma once

#include <vector>

#include "tabrl/mdp.hpp"
#include "tabrl/model.hpp"
#include "tabrl/pqueue.hpp"
#include "tabrl/rng.hpp"
#include "tabrl/tables.hpp"

namespace tabrl {

/// exclusive: the epsilon branch draws uniformly among non-maximizers.
/// inclusive: the epsilon branch draws uniformly among all actions.
enum class EpsilonStyle { exclusive, inclusive };

struct PolicyOptions {
    double epsilon = 0.1;
    EpsilonStyle style = EpsilonStyle::exclusive;
};

/// Epsilon-greedy draw. Greedy ties break uniformly; if every action is a
/// maximizer the exclusive branch falls back to a uniform draw. When `tried`
/// is given, the greedy branch instead draws uniformly among actions not yet
/// taken in s, as long as any remain. Consumes exactly two RNG values.
ActionId select_action(const QTable& q, StateId s, const PolicyOptions& opts,
                       const TriedFlags* tried, RngStream& rng);

/// Raises each Q(s_t, a_t) to the episode return from t.
void ec_update(QTable& q, const EpisodeBuffer& episode, double gamma);

/// State shared by the model-based planner.
struct PlannerState {
    EmpiricalModel model;
    ValueTables values;
    MaxPriorityQueue queue;
    std::vector<std::uint8_t> terminal_pinned;

    PlannerState() = default;
    PlannerState(StateId num_states, ActionId num_actions, ModelMode mode,
                 double kappa, double q0)
        : model(num_states, num_actions, mode, kappa),
          values(num_states, q0),
          queue(num_states),
          terminal_pinned(num_states, 0) {}
};

/// Folds one transition into the model and re-establishes
///   Q(s,a) = R(s,a) + gamma * sum_s' T(s'|s,a) U(s')
/// with a single incremental update. Queues the source state when requested.
void ps_observe(QTable& q, PlannerState& ps, const Transition& t, double gamma,
                bool enqueue_source);

/// Runs up to `max_backups` small backups; each pop costs one unit.
/// Returns the number performed.
int ps_plan(QTable& q, PlannerState& ps, double gamma, int max_backups);

/// End-of-episode phase of the forgetting planner: queue the last decision
/// state, run one backup per episode step, then drop model and queue.
void ps_reset_episode_end(QTable& q, PlannerState& ps, const EpisodeBuffer& episode,
                          double gamma);

void q_learning_update(QTable& q, const Transition& t, double alpha, double gamma);

/// Watkins-style lambda return: traces decay while greedy actions are taken
/// and are cut on exploratory ones.
void q_lambda_update(QTable& q, EligibilityTrace& trace, const Transition& t,
                     double alpha, double gamma, double lambda);

/// Applies the n-step Sarsa update that becomes available once the episode
/// buffer holds more than n transitions.
void nstep_td_step(QTable& q, const EpisodeBuffer& episode, int nstep, double alpha,
                   double gamma);

/// Flushes the tail of the episode with truncated returns.
void nstep_td_flush(QTable& q, const EpisodeBuffer& episode, int nstep, double alpha,
                    double gamma);

/// Every-visit constant-alpha Monte Carlo.
void mc_update(QTable& q, const EpisodeBuffer& episode, double alpha, double gamma);

}  // namespace tabrl
