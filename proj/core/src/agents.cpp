#include "tabrl/agents.hpp"

#include <stdexcept>

namespace tabrl {

const char* to_string(Algorithm alg) {
    switch (alg) {
        case Algorithm::episodic_control: return "ec";
        case Algorithm::prioritized_sweeping: return "ps";
        case Algorithm::prioritized_sweeping_reset: return "ps_reset";
        case Algorithm::q_learning: return "q_learning";
        case Algorithm::q_lambda: return "q_lambda";
        case Algorithm::nstep_td: return "nstep_td";
        case Algorithm::monte_carlo: return "mc";
    }
    return "?";
}

bool algorithm_from_string(const std::string& name, Algorithm& out) {
    for (Algorithm alg :
         {Algorithm::episodic_control, Algorithm::prioritized_sweeping,
          Algorithm::prioritized_sweeping_reset, Algorithm::q_learning,
          Algorithm::q_lambda, Algorithm::nstep_td, Algorithm::monte_carlo}) {
        if (name == to_string(alg)) {
            out = alg;
            return true;
        }
    }
    return false;
}

namespace {

class EcAgent final : public Agent {
public:
    using Agent::Agent;

    void end_episode() override {
        ec_update(q_, episode_, params_.gamma);
        episode_.clear();
    }

private:
    void handle(const Transition& t) override { episode_.push_back(t); }

    EpisodeBuffer episode_;
};

class PsAgent final : public Agent {
public:
    PsAgent(StateId num_states, ActionId num_actions, const AgentParams& params)
        : Agent(num_states, num_actions, params),
          planner_(num_states, num_actions, params.model_mode, params.kappa,
                   params.q0) {}

    void plan() override {
        ps_plan(q_, planner_, params_.gamma, params_.backups_per_step);
    }

private:
    void handle(const Transition& t) override {
        ps_observe(q_, planner_, t, params_.gamma, /*enqueue_source=*/true);
    }

    PlannerState planner_;
};

class PsResetAgent final : public Agent {
public:
    PsResetAgent(StateId num_states, ActionId num_actions, const AgentParams& params)
        : Agent(num_states, num_actions, params),
          planner_(num_states, num_actions, params.model_mode, params.kappa,
                   params.q0) {}

    void end_episode() override {
        ps_reset_episode_end(q_, planner_, episode_, params_.gamma);
        episode_.clear();
    }

private:
    void handle(const Transition& t) override {
        episode_.push_back(t);
        // Priorities accumulate during the episode; only the pops wait for
        // end_episode. Seeding the deferred sweep with every raised state
        // (not just the final one) keeps value changes propagating in mazes,
        // where mid-episode observations move V at many states.
        ps_observe(q_, planner_, t, params_.gamma, /*enqueue_source=*/true);
    }

    PlannerState planner_;
    EpisodeBuffer episode_;
};

class QLearningAgent final : public Agent {
public:
    using Agent::Agent;

private:
    void handle(const Transition& t) override {
        q_learning_update(q_, t, params_.alpha, params_.gamma);
    }
};

class QLambdaAgent final : public Agent {
public:
    QLambdaAgent(StateId num_states, ActionId num_actions, const AgentParams& params)
        : Agent(num_states, num_actions, params), trace_(num_states, num_actions) {}

    void begin_episode() override { trace_.clear(); }

private:
    void handle(const Transition& t) override {
        q_lambda_update(q_, trace_, t, params_.alpha, params_.gamma, params_.lambda);
    }

    EligibilityTrace trace_;
};

class NStepTdAgent final : public Agent {
public:
    using Agent::Agent;

    void end_episode() override {
        nstep_td_flush(q_, episode_, params_.nstep, params_.alpha, params_.gamma);
        episode_.clear();
    }

private:
    void handle(const Transition& t) override {
        episode_.push_back(t);
        nstep_td_step(q_, episode_, params_.nstep, params_.alpha, params_.gamma);
    }

    EpisodeBuffer episode_;
};

class McAgent final : public Agent {
public:
    using Agent::Agent;

    void end_episode() override {
        mc_update(q_, episode_, params_.alpha, params_.gamma);
        episode_.clear();
    }

private:
    void handle(const Transition& t) override { episode_.push_back(t); }

    EpisodeBuffer episode_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(Algorithm alg, StateId num_states,
                                  ActionId num_actions, const AgentParams& params) {
    switch (alg) {
        case Algorithm::episodic_control:
            return std::make_unique<EcAgent>(num_states, num_actions, params);
        case Algorithm::prioritized_sweeping:
            return std::make_unique<PsAgent>(num_states, num_actions, params);
        case Algorithm::prioritized_sweeping_reset:
            return std::make_unique<PsResetAgent>(num_states, num_actions, params);
        case Algorithm::q_learning:
            return std::make_unique<QLearningAgent>(num_states, num_actions, params);
        case Algorithm::q_lambda:
            return std::make_unique<QLambdaAgent>(num_states, num_actions, params);
        case Algorithm::nstep_td:
            return std::make_unique<NStepTdAgent>(num_states, num_actions, params);
        case Algorithm::monte_carlo:
            return std::make_unique<McAgent>(num_states, num_actions, params);
    }
    throw std::invalid_argument("unknown algorithm");
}

}  // namespace tabrl
