#include "tabrl/mdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tabrl {

namespace {

std::string sa_label(StateId s, ActionId a) {
    std::ostringstream os;
    os << "(s=" << s << ", a=" << a << ")";
    return os.str();
}

}  // namespace

std::vector<std::string> validate(const TabularMdp& mdp) {
    std::vector<std::string> violations;
    auto complain = [&](const std::string& msg) { violations.push_back(msg); };

    const std::size_t sa_count =
        static_cast<std::size_t>(mdp.num_states) * mdp.num_actions;
    if (mdp.num_states <= 0 || mdp.num_actions <= 0) {
        complain("num_states and num_actions must be positive");
        return violations;
    }
    if (mdp.transitions.size() != sa_count)
        complain("transitions table has wrong size");
    if (mdp.rewards.size() != sa_count) complain("reward table has wrong size");
    if (mdp.terminal.size() != static_cast<std::size_t>(mdp.num_states))
        complain("terminal flags have wrong size");
    if (!violations.empty()) return violations;

    for (StateId s = 0; s < mdp.num_states; ++s) {
        for (ActionId a = 0; a < mdp.num_actions; ++a) {
            const auto& row = mdp.transitions[mdp.sa_index(s, a)];
            if (mdp.is_terminal(s)) {
                if (!row.empty())
                    complain("terminal state " + std::to_string(s) +
                             " has outgoing transitions");
                continue;
            }
            if (row.empty()) {
                complain("row " + sa_label(s, a) + " is empty");
                continue;
            }
            double sum = 0.0;
            for (const auto& e : row) {
                if (e.state < 0 || e.state >= mdp.num_states)
                    complain("row " + sa_label(s, a) + " successor index " +
                             std::to_string(e.state) + " out of range");
                if (e.prob < 0.0 || e.prob > 1.0)
                    complain("row " + sa_label(s, a) + " probability " +
                             std::to_string(e.prob) + " outside [0,1]");
                sum += e.prob;
            }
            if (std::abs(sum - 1.0) > 1e-12) {
                std::ostringstream os;
                os << "row " << sa_label(s, a) << " sums to " << sum << " != 1";
                complain(os.str());
            }
            if (!std::isfinite(mdp.reward(s, a)))
                complain("reward at " + sa_label(s, a) + " is not finite");
        }
    }

    if (mdp.initial_states.empty()) {
        complain("initial state distribution is empty");
    } else {
        double sum = 0.0;
        for (const auto& e : mdp.initial_states) {
            if (e.state < 0 || e.state >= mdp.num_states)
                complain("initial state " + std::to_string(e.state) +
                         " out of range");
            else if (mdp.is_terminal(e.state))
                complain("initial state " + std::to_string(e.state) +
                         " is terminal");
            if (e.prob < 0.0 || e.prob > 1.0)
                complain("initial probability outside [0,1]");
            sum += e.prob;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            complain("initial state distribution sums to " +
                     std::to_string(sum) + " != 1");
    }
    return violations;
}

namespace {

StateId draw_weighted(std::span<const WeightedState> dist, RngStream& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (const auto& e : dist) {
        acc += e.prob;
        if (u < acc) return e.state;
    }
    // Rounding left u just past the accumulated mass; take the last entry.
    return dist.back().state;
}

}  // namespace

Transition step(const TabularMdp& mdp, StateId s, ActionId a, RngStream& rng) {
    if (mdp.is_terminal(s))
        throw std::logic_error("step() called from terminal state " +
                               std::to_string(s));
    const StateId next = draw_weighted(mdp.row(s, a), rng);
    return Transition{s, a, mdp.reward(s, a), next, mdp.is_terminal(next)};
}

StateId reset(const TabularMdp& mdp, RngStream& rng) {
    return draw_weighted(mdp.initial_states, rng);
}

}  // namespace tabrl
