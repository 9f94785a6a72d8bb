#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tabrl/mdp.hpp"

namespace tabrl {

/// Indexed binary max-heap over states. Each state appears at most once;
/// re-pushing keeps the larger priority.
class MaxPriorityQueue {
public:
    MaxPriorityQueue() = default;
    explicit MaxPriorityQueue(StateId num_states)
        : pos_(num_states, -1), prio_(num_states, 0.0) {}

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    bool contains(StateId s) const { return pos_[s] >= 0; }
    double priority(StateId s) const { return prio_[s]; }

    /// Inserts s, or raises its priority; a lower re-push is a no-op.
    void push_or_raise(StateId s, double priority) {
        if (pos_[s] < 0) {
            prio_[s] = priority;
            pos_[s] = static_cast<std::int32_t>(heap_.size());
            heap_.push_back(s);
            sift_up(pos_[s]);
        } else if (priority > prio_[s]) {
            prio_[s] = priority;
            sift_up(pos_[s]);
        }
    }

    /// Removes and returns the max-priority state.
    std::pair<StateId, double> pop() {
        const StateId top = heap_.front();
        const double p = prio_[top];
        pos_[top] = -1;
        const StateId last = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_.front() = last;
            pos_[last] = 0;
            sift_down(0);
        }
        return {top, p};
    }

    void clear() {
        for (StateId s : heap_) pos_[s] = -1;
        heap_.clear();
    }

private:
    void sift_up(std::int32_t i) {
        const StateId s = heap_[i];
        const double p = prio_[s];
        while (i > 0) {
            const std::int32_t parent = (i - 1) / 2;
            if (prio_[heap_[parent]] >= p) break;
            heap_[i] = heap_[parent];
            pos_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = s;
        pos_[s] = i;
    }

    void sift_down(std::int32_t i) {
        const auto n = static_cast<std::int32_t>(heap_.size());
        const StateId s = heap_[i];
        const double p = prio_[s];
        for (;;) {
            std::int32_t child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n && prio_[heap_[child + 1]] > prio_[heap_[child]]) ++child;
            if (prio_[heap_[child]] <= p) break;
            heap_[i] = heap_[child];
            pos_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = s;
        pos_[s] = i;
    }

    std::vector<StateId> heap_;
    std::vector<std::int32_t> pos_;
    std::vector<double> prio_;
};

}  // namespace tabrl
