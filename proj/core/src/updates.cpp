#include "tabrl/updates.hpp"

#include <cmath>
#include <cstdint>

namespace tabrl {
namespace {

/// Returns the (k+1)-th action (0-based k) satisfying pred.
template <typename Pred>
ActionId nth_matching(ActionId num_actions, std::uint64_t k, Pred&& pred) {
    for (ActionId a = 0; a < num_actions; ++a) {
        if (pred(a)) {
            if (k == 0) return a;
            --k;
        }
    }
    return num_actions - 1;  // unreachable when k < count
}

}  // namespace

ActionId select_action(const QTable& q, StateId s, const PolicyOptions& opts,
                       const TriedFlags* tried, RngStream& rng) {
    const ActionId num_a = q.num_actions;
    const auto row = q.row(s);
    const double best = q.row_max(s);
    ActionId num_best = 0;
    for (ActionId a = 0; a < num_a; ++a)
        if (row[a] == best) ++num_best;

    const bool explore = rng.uniform01() < opts.epsilon;
    if (explore) {
        if (opts.style == EpsilonStyle::inclusive || num_best == num_a)
            return static_cast<ActionId>(rng.uniform_below(num_a));
        const auto k = rng.uniform_below(num_a - num_best);
        return nth_matching(num_a, k, [&](ActionId a) { return row[a] != best; });
    }

    if (tried) {
        ActionId num_novel = 0;
        for (ActionId a = 0; a < num_a; ++a)
            if (!tried->tried(s, a)) ++num_novel;
        if (num_novel > 0) {
            const auto k = rng.uniform_below(num_novel);
            return nth_matching(num_a, k, [&](ActionId a) { return !tried->tried(s, a); });
        }
    }

    const auto k = rng.uniform_below(num_best);
    return nth_matching(num_a, k, [&](ActionId a) { return row[a] == best; });
}

void ec_update(QTable& q, const EpisodeBuffer& episode, double gamma) {
    double g = 0.0;
    for (std::size_t j = episode.size(); j-- > 0;) {
        g = episode[j].reward + gamma * g;
        double& qsa = q(episode[j].state, episode[j].action);
        if (g > qsa) qsa = g;
    }
}

namespace {

void pin_terminal(QTable& q, PlannerState& ps, StateId s) {
    if (ps.terminal_pinned[s]) return;
    ps.terminal_pinned[s] = 1;
    for (ActionId a = 0; a < q.num_actions; ++a) q(s, a) = 0.0;
    ps.values.v[s] = 0.0;
    ps.values.u[s] = 0.0;
}

}  // namespace

void ps_observe(QTable& q, PlannerState& ps, const Transition& t, double gamma,
                bool enqueue_source) {
    if (t.terminal) pin_terminal(q, ps, t.next_state);
    const std::uint64_t prior = ps.model.observe(t.state, t.action, t.reward, t.next_state);
    const double target = t.reward + gamma * ps.values.u[t.next_state];
    double& qsa = q(t.state, t.action);
    switch (ps.model.mode()) {
        case ModelMode::counting: {
            const auto n = static_cast<double>(prior);
            qsa = (n * qsa + target) / (n + 1.0);
            break;
        }
        case ModelMode::leaky:
            qsa = prior == 0 ? target
                             : (1.0 - ps.model.kappa()) * qsa + ps.model.kappa() * target;
            break;
        case ModelMode::deterministic_overwrite:
            qsa = target;
            break;
    }
    ps.values.v[t.state] = q.row_max(t.state);
    if (enqueue_source) {
        const double p = std::abs(ps.values.v[t.state] - ps.values.u[t.state]);
        if (p > 0.0) ps.queue.push_or_raise(t.state, p);
    }
}

int ps_plan(QTable& q, PlannerState& ps, double gamma, int max_backups) {
    int used = 0;
    while (used < max_backups && !ps.queue.empty()) {
        const StateId top = ps.queue.pop().first;
        ++used;
        const double dv = ps.values.v[top] - ps.values.u[top];
        ps.values.u[top] = ps.values.v[top];
        if (dv == 0.0) continue;
        for (const SaPair& pred : ps.model.predecessors(top)) {
            const double w = ps.model.prob(pred.state, pred.action, top);
            if (w == 0.0) continue;
            q(pred.state, pred.action) += gamma * w * dv;
            const double v = q.row_max(pred.state);
            ps.values.v[pred.state] = v;
            const double p = std::abs(v - ps.values.u[pred.state]);
            if (p > 0.0) ps.queue.push_or_raise(pred.state, p);
        }
    }
    return used;
}

void ps_reset_episode_end(QTable& q, PlannerState& ps, const EpisodeBuffer& episode,
                          double gamma) {
    if (!episode.empty()) {
        const StateId last = episode.back().state;
        const double p = std::abs(ps.values.v[last] - ps.values.u[last]);
        if (p > 0.0) ps.queue.push_or_raise(last, p);
        ps_plan(q, ps, gamma, static_cast<int>(episode.size()));
    }
    ps.model.reset();
    ps.queue.clear();
}

void q_learning_update(QTable& q, const Transition& t, double alpha, double gamma) {
    const double boot = t.terminal ? 0.0 : q.row_max(t.next_state);
    double& qsa = q(t.state, t.action);
    qsa += alpha * (t.reward + gamma * boot - qsa);
}

void q_lambda_update(QTable& q, EligibilityTrace& trace, const Transition& t,
                     double alpha, double gamma, double lambda) {
    const bool greedy = q(t.state, t.action) == q.row_max(t.state);
    const double boot = t.terminal ? 0.0 : q.row_max(t.next_state);
    const double delta = t.reward + gamma * boot - q(t.state, t.action);
    trace.accumulate(t.state, t.action, 1.0);
    trace.for_each(
        [&](StateId s, ActionId a, double e) { q(s, a) += alpha * delta * e; });
    if (greedy)
        trace.decay(gamma * lambda);
    else
        trace.clear();
}

void nstep_td_step(QTable& q, const EpisodeBuffer& episode, int nstep, double alpha,
                   double gamma) {
    const auto n = static_cast<std::size_t>(nstep);
    if (episode.size() <= n) return;
    const std::size_t j = episode.size() - 1 - n;
    double g = 0.0;
    double disc = 1.0;
    for (std::size_t i = j; i < j + n; ++i) {
        g += disc * episode[i].reward;
        disc *= gamma;
    }
    g += disc * q(episode.back().state, episode.back().action);
    double& qsa = q(episode[j].state, episode[j].action);
    qsa += alpha * (g - qsa);
}

void nstep_td_flush(QTable& q, const EpisodeBuffer& episode, int nstep, double alpha,
                    double gamma) {
    if (episode.empty()) return;
    const auto n = static_cast<std::size_t>(nstep);
    const std::size_t start = episode.size() > n ? episode.size() - n : 0;
    std::vector<double> g(episode.size() + 1, 0.0);
    for (std::size_t j = episode.size(); j-- > start;)
        g[j] = episode[j].reward + gamma * g[j + 1];
    for (std::size_t j = start; j < episode.size(); ++j) {
        double& qsa = q(episode[j].state, episode[j].action);
        qsa += alpha * (g[j] - qsa);
    }
}

void mc_update(QTable& q, const EpisodeBuffer& episode, double alpha, double gamma) {
    if (episode.empty()) return;
    std::vector<double> g(episode.size() + 1, 0.0);
    for (std::size_t j = episode.size(); j-- > 0;)
        g[j] = episode[j].reward + gamma * g[j + 1];
    for (std::size_t j = 0; j < episode.size(); ++j) {
        double& qsa = q(episode[j].state, episode[j].action);
        qsa += alpha * (g[j] - qsa);
    }
}

}  // namespace tabrl
