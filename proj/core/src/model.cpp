#include "tabrl/model.hpp"

#include <algorithm>

namespace tabrl {

EmpiricalModel::EmpiricalModel(StateId num_states, ActionId num_actions,
                               ModelMode mode, double kappa)
    : num_states_(num_states),
      num_actions_(num_actions),
      mode_(mode),
      kappa_(kappa),
      stats_(static_cast<std::size_t>(num_states) * num_actions),
      preds_(num_states) {}

void EmpiricalModel::add_predecessor(StateId next, StateId s, ActionId a) {
    auto& list = preds_[next];
    if (std::find(list.begin(), list.end(), SaPair{s, a}) == list.end())
        list.push_back({s, a});
}

void EmpiricalModel::remove_predecessor(StateId next, StateId s, ActionId a) {
    auto& list = preds_[next];
    auto it = std::find(list.begin(), list.end(), SaPair{s, a});
    if (it != list.end()) {
        *it = list.back();
        list.pop_back();
    }
}

std::uint64_t EmpiricalModel::observe(StateId s, ActionId a, double reward,
                                      StateId next) {
    auto& st = stats_[sa_index(s, a)];
    const std::uint64_t prior = st.count;
    if (prior == 0) touched_.push_back(sa_index(s, a));
    st.count = prior + 1;

    auto find_succ = [&](StateId target) {
        return std::find_if(st.succ.begin(), st.succ.end(),
                            [&](const SuccessorEntry& e) { return e.state == target; });
    };

    switch (mode_) {
        case ModelMode::counting: {
            const auto n = static_cast<double>(prior);
            st.reward = (n * st.reward + reward) / (n + 1.0);
            if (auto it = find_succ(next); it != st.succ.end()) {
                it->weight += 1.0;
            } else {
                st.succ.push_back({next, 1.0});
                add_predecessor(next, s, a);
            }
            break;
        }
        case ModelMode::leaky: {
            if (prior == 0) {
                st.reward = reward;
                st.succ.push_back({next, 1.0});
                add_predecessor(next, s, a);
            } else {
                st.reward = (1.0 - kappa_) * st.reward + kappa_ * reward;
                for (auto& e : st.succ) e.weight *= 1.0 - kappa_;
                if (auto it = find_succ(next); it != st.succ.end()) {
                    it->weight += kappa_;
                } else {
                    st.succ.push_back({next, kappa_});
                    add_predecessor(next, s, a);
                }
            }
            break;
        }
        case ModelMode::deterministic_overwrite: {
            st.reward = reward;
            if (st.succ.empty()) {
                st.succ.push_back({next, 1.0});
                add_predecessor(next, s, a);
            } else if (st.succ.front().state != next) {
                remove_predecessor(st.succ.front().state, s, a);
                st.succ.front() = {next, 1.0};
                add_predecessor(next, s, a);
            }
            break;
        }
    }
    return prior;
}

double EmpiricalModel::prob(StateId s, ActionId a, StateId next) const {
    const auto& st = stats_[sa_index(s, a)];
    for (const auto& e : st.succ) {
        if (e.state == next)
            return mode_ == ModelMode::counting
                       ? e.weight / static_cast<double>(st.count)
                       : e.weight;
    }
    return 0.0;
}

void EmpiricalModel::reset() {
    for (std::size_t idx : touched_) {
        auto& st = stats_[idx];
        const auto s = static_cast<StateId>(idx / num_actions_);
        const auto a = static_cast<ActionId>(idx % num_actions_);
        for (const auto& e : st.succ) remove_predecessor(e.state, s, a);
        st.count = 0;
        st.reward = 0.0;
        st.succ.clear();
    }
    touched_.clear();
}

}  // namespace tabrl
