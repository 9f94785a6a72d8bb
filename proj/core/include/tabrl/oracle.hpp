#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tabrl/mdp.hpp"
#include "tabrl/model.hpp"
#include "tabrl/rng.hpp"
#include "tabrl/tables.hpp"
#include "tabrl/updates.hpp"

namespace tabrl {

/// Non-terminal states in an order where every transition points forward;
/// empty optional when the support graph has a cycle.
std::optional<std::vector<StateId>> topological_order(const TabularMdp& mdp);

struct OptimalSolution {
    QTable q_star;
    std::vector<double> v_star;
    std::vector<ActionId> policy;  // greedy action, -1 on terminal states
    int iterations = 0;
    double residual = 0.0;
    bool backward_induction = false;
    /// V after each policy evaluation, recorded on request.
    std::vector<std::vector<double>> eval_trace;
};

/// Exact solve: backward induction on acyclic instances, otherwise policy
/// iteration with direct linear-system evaluation. Throws on instances that
/// fail to converge within the iteration cap.
OptimalSolution policy_iteration(const TabularMdp& mdp, double gamma,
                                 bool record_trace = false);

struct ValueIterationResult {
    QTable q;
    std::vector<double> v;
    int sweeps = 0;
    double residual = 0.0;  // sup-norm change of the final sweep
};

ValueIterationResult value_iteration(const TabularMdp& mdp, double gamma,
                                     double tol = 1e-13, int max_sweeps = 1000000);

/// Fixed point of the learned model over visited pairs; unvisited entries stay
/// at q0 and rows of `terminal` states are pinned to zero. `warm_v` seeds the
/// sweep with a previous solution.
ValueIterationResult value_iteration_on_model(
    const EmpiricalModel& model, const std::vector<std::uint8_t>& terminal,
    double gamma, double q0, double tol = 1e-13, int max_sweeps = 1000000,
    const std::vector<double>* warm_v = nullptr);

double bellman_residual(const TabularMdp& mdp, const std::vector<double>& v,
                        double gamma);

struct PolicyMatrix {
    StateId num_states = 0;
    ActionId num_actions = 0;
    std::vector<double> probs;  // s*A+a; rows of non-terminal states sum to 1

    double prob(StateId s, ActionId a) const {
        return probs[static_cast<std::size_t>(s) * num_actions + a];
    }
    double& prob(StateId s, ActionId a) {
        return probs[static_cast<std::size_t>(s) * num_actions + a];
    }
    ActionId sample(StateId s, RngStream& rng) const;
};

PolicyMatrix uniform_policy(const TabularMdp& mdp);

/// Row-form of the action-selection rule used by the agents (greedy ties
/// uniform; the exclusive style spreads epsilon over non-maximizers).
PolicyMatrix epsilon_greedy_policy(const QTable& q, const TabularMdp& mdp,
                                   double epsilon, EpsilonStyle style);

struct RateResult {
    double rate = 0.0;
    double std_error = 0.0;  // batch-means estimate; zero for the exact method
    bool ok = true;          // false on non-absorbing / singular instances
};

/// Long-run reward per step of the restart chain (terminal entry restarts on
/// the initial distribution with no dead step), computed exactly from expected
/// episode reward and length.
RateResult expected_reward_rate_exact(const TabularMdp& mdp,
                                      const PolicyMatrix& policy);

/// Same quantity estimated by stepping the chain.
RateResult expected_reward_rate_simulated(const TabularMdp& mdp,
                                          const PolicyMatrix& policy,
                                          std::uint64_t steps, RngStream& rng);

struct RateBaselines {
    double r_uniform = 0.0;
    double r_opt = 0.0;
    bool ok = true;
    bool degenerate = false;  // baselines coincide; normalization impossible
};

RateBaselines compute_baselines(const TabularMdp& mdp, const OptimalSolution& sol,
                                double epsilon, EpsilonStyle style);

struct NormalizedRate {
    double value = 0.0;
    bool degenerate = false;
};

/// Affine rescale putting r_uniform at 0 and r_opt at 1. Degenerate baselines
/// pass the rate through unscaled and set the flag.
NormalizedRate normalize_rate(double rate, const RateBaselines& baselines);

}  // namespace tabrl
