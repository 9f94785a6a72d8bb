#pragma once

#include <memory>
#include <string>

#include "tabrl/updates.hpp"

namespace tabrl {

enum class Algorithm {
    episodic_control,
    prioritized_sweeping,
    prioritized_sweeping_reset,
    q_learning,
    q_lambda,
    nstep_td,
    monte_carlo,
};

const char* to_string(Algorithm alg);
bool algorithm_from_string(const std::string& name, Algorithm& out);

struct AgentParams {
    double gamma = 1.0;
    double epsilon = 0.1;
    double q0 = 0.0;
    bool prefer_novel = false;
    EpsilonStyle epsilon_style = EpsilonStyle::exclusive;
    double alpha = 0.1;       // model-free step size
    int nstep = 5;            // n-step TD lookahead
    double lambda = 0.2;      // trace decay
    double kappa = 0.1;       // leaky model rate
    ModelMode model_mode = ModelMode::counting;
    int backups_per_step = 3;  // planner budget per environment step
};

/// A learner driven by the simulation loop:
///   begin_episode / (select -> observe -> plan)* / end_episode.
/// end_episode fires both on terminal transitions and on the step cap.
class Agent {
public:
    Agent(StateId num_states, ActionId num_actions, const AgentParams& params)
        : params_(params),
          q_(num_states, num_actions, params.q0),
          tried_(num_states, num_actions) {}
    virtual ~Agent() = default;

    virtual void begin_episode() {}
    virtual void plan() {}
    virtual void end_episode() {}

    ActionId select(StateId s, RngStream& rng) const {
        const PolicyOptions opts{params_.epsilon, params_.epsilon_style};
        return select_action(q_, s, opts, params_.prefer_novel ? &tried_ : nullptr, rng);
    }

    void observe(const Transition& t) {
        tried_.mark(t.state, t.action);
        handle(t);
    }

    const QTable& qtable() const { return q_; }
    const AgentParams& params() const { return params_; }

protected:
    virtual void handle(const Transition& t) = 0;

    AgentParams params_;
    QTable q_;
    TriedFlags tried_;
};

std::unique_ptr<Agent> make_agent(Algorithm alg, StateId num_states,
                                  ActionId num_actions, const AgentParams& params);

}  // namespace tabrl
