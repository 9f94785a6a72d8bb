#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "tabrl/mdp.hpp"

namespace tabrl {

/// Dense S x A table of action-value estimates.
struct QTable {
    StateId num_states = 0;
    ActionId num_actions = 0;
    double init_value = 0.0;
    std::vector<double> values;

    QTable() = default;
    QTable(StateId s, ActionId a, double q0)
        : num_states(s),
          num_actions(a),
          init_value(q0),
          values(static_cast<std::size_t>(s) * a, q0) {}

    std::size_t index(StateId s, ActionId a) const {
        return static_cast<std::size_t>(s) * num_actions + a;
    }
    double operator()(StateId s, ActionId a) const { return values[index(s, a)]; }
    double& operator()(StateId s, ActionId a) { return values[index(s, a)]; }

    std::span<const double> row(StateId s) const {
        return {values.data() + index(s, 0), static_cast<std::size_t>(num_actions)};
    }
    double row_max(StateId s) const {
        const auto r = row(s);
        return *std::max_element(r.begin(), r.end());
    }
};

/// V (current state value) and U (value last propagated to predecessors),
/// as used by the small-backup planner.
struct ValueTables {
    std::vector<double> v;
    std::vector<double> u;

    ValueTables() = default;
    ValueTables(StateId num_states, double init)
        : v(num_states, init), u(num_states, init) {}
};

/// Transitions of the current episode, in order.
using EpisodeBuffer = std::vector<Transition>;

/// Per-(s,a) seen flags backing the novel-action preference.
struct TriedFlags {
    StateId num_states = 0;
    ActionId num_actions = 0;
    std::vector<std::uint8_t> seen;

    TriedFlags() = default;
    TriedFlags(StateId s, ActionId a)
        : num_states(s), num_actions(a), seen(static_cast<std::size_t>(s) * a, 0) {}

    bool tried(StateId s, ActionId a) const {
        return seen[static_cast<std::size_t>(s) * num_actions + a] != 0;
    }
    void mark(StateId s, ActionId a) {
        seen[static_cast<std::size_t>(s) * num_actions + a] = 1;
    }
};

/// Accumulating eligibility trace, kept sparse; entries below the cutoff are
/// dropped during decay.
class EligibilityTrace {
public:
    EligibilityTrace() = default;
    EligibilityTrace(StateId s, ActionId a)
        : num_actions_(a), dense_(static_cast<std::size_t>(s) * a, 0.0) {}

    double value(StateId s, ActionId a) const { return dense_[index(s, a)]; }

    void accumulate(StateId s, ActionId a, double amount) {
        double& e = dense_[index(s, a)];
        if (e == 0.0) active_.push_back(index(s, a));
        e += amount;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (auto idx : active_)
            fn(static_cast<StateId>(idx / num_actions_),
               static_cast<ActionId>(idx % num_actions_), dense_[idx]);
    }

    void decay(double factor) {
        std::size_t kept = 0;
        for (auto idx : active_) {
            const double e = dense_[idx] * factor;
            if (e > kCutoff) {
                dense_[idx] = e;
                active_[kept++] = idx;
            } else {
                dense_[idx] = 0.0;
            }
        }
        active_.resize(kept);
    }

    void clear() {
        for (auto idx : active_) dense_[idx] = 0.0;
        active_.clear();
    }

    std::size_t active_count() const { return active_.size(); }

private:
    static constexpr double kCutoff = 1e-8;

    std::size_t index(StateId s, ActionId a) const {
        return static_cast<std::size_t>(s) * num_actions_ + a;
    }

    ActionId num_actions_ = 0;
    std::vector<double> dense_;
    std::vector<std::size_t> active_;
};

}  // namespace tabrl
