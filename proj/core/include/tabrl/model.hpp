#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tabrl/mdp.hpp"

namespace tabrl {

/// How observed transitions are folded into the learned model.
///  counting:               empirical means over all observations
///  leaky:                  exponential moving average with rate kappa
///  deterministic_overwrite: last observation wins, probability one
enum class ModelMode { counting, leaky, deterministic_overwrite };

struct SaPair {
    StateId state;
    ActionId action;
    bool operator==(const SaPair&) const = default;
};

struct SuccessorEntry {
    StateId state;
    double weight;  // raw count (counting) or probability (other modes)
};

/// Learned reward and transition model with a reverse (predecessor) index.
class EmpiricalModel {
public:
    EmpiricalModel() = default;
    EmpiricalModel(StateId num_states, ActionId num_actions, ModelMode mode,
                   double kappa = 0.1);

    ModelMode mode() const { return mode_; }
    double kappa() const { return kappa_; }
    StateId num_states() const { return num_states_; }
    ActionId num_actions() const { return num_actions_; }

    /// Folds one transition in; returns the visit count before this call.
    std::uint64_t observe(StateId s, ActionId a, double reward, StateId next);

    std::uint64_t visit_count(StateId s, ActionId a) const {
        return stats_[sa_index(s, a)].count;
    }
    double mean_reward(StateId s, ActionId a) const {
        return stats_[sa_index(s, a)].reward;
    }
    double prob(StateId s, ActionId a, StateId next) const;

    std::span<const SuccessorEntry> successor_entries(StateId s, ActionId a) const {
        return stats_[sa_index(s, a)].succ;
    }

    /// Walks successors of a visited pair with normalized probabilities.
    template <typename Fn>
    void for_each_successor(StateId s, ActionId a, Fn&& fn) const {
        const auto& st = stats_[sa_index(s, a)];
        const double scale =
            mode_ == ModelMode::counting ? 1.0 / static_cast<double>(st.count) : 1.0;
        for (const auto& e : st.succ) fn(e.state, e.weight * scale);
    }

    /// (state, action) pairs with recorded mass leading into `next`.
    std::span<const SaPair> predecessors(StateId next) const { return preds_[next]; }

    /// State-action pairs observed at least once, in first-visit order.
    std::span<const std::size_t> touched() const { return touched_; }

    /// Forgets everything, O(number of touched pairs).
    void reset();

    std::size_t sa_index(StateId s, ActionId a) const {
        return static_cast<std::size_t>(s) * num_actions_ + a;
    }

private:
    struct SaStats {
        std::uint64_t count = 0;
        double reward = 0.0;
        std::vector<SuccessorEntry> succ;
    };

    void add_predecessor(StateId next, StateId s, ActionId a);
    void remove_predecessor(StateId next, StateId s, ActionId a);

    StateId num_states_ = 0;
    ActionId num_actions_ = 0;
    ModelMode mode_ = ModelMode::counting;
    double kappa_ = 0.1;
    std::vector<SaStats> stats_;
    std::vector<std::vector<SaPair>> preds_;
    std::vector<std::size_t> touched_;
};

}  // namespace tabrl
