#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tabrl/rng.hpp"

namespace tabrl {

using StateId = std::int32_t;
using ActionId = std::int32_t;

/// One (successor, probability) entry of a sparse transition row; also used
/// for the initial-state distribution.
struct WeightedState {
    StateId state;
    double prob;
};

/// Tabular MDP with sparse successor lists. Rewards attach to (s, a) and are
/// emitted deterministically (r = R_sa). Terminal states end the episode on
/// entry; their transition rows are empty and never consulted.
struct TabularMdp {
    StateId num_states = 0;
    ActionId num_actions = 0;
    std::vector<std::vector<WeightedState>> transitions;  // indexed s * A + a
    std::vector<double> rewards;                          // indexed s * A + a
    std::vector<std::uint8_t> terminal;                   // per state
    std::vector<WeightedState> initial_states;

    std::size_t sa_index(StateId s, ActionId a) const {
        return static_cast<std::size_t>(s) * num_actions + a;
    }
    std::span<const WeightedState> row(StateId s, ActionId a) const {
        return transitions[sa_index(s, a)];
    }
    double reward(StateId s, ActionId a) const { return rewards[sa_index(s, a)]; }
    bool is_terminal(StateId s) const { return terminal[s] != 0; }
};

/// One step of experience.
struct Transition {
    StateId state;
    ActionId action;
    double reward;
    StateId next_state;
    bool terminal;
};

/// Checks all structural invariants; returns one message per violation.
/// An empty result means the MDP is well formed.
std::vector<std::string> validate(const TabularMdp& mdp);

/// Samples a successor of (s, a). Pre: s is non-terminal (throws otherwise).
Transition step(const TabularMdp& mdp, StateId s, ActionId a, RngStream& rng);

/// Draws a start state from the initial distribution.
StateId reset(const TabularMdp& mdp, RngStream& rng);

}  // namespace tabrl
