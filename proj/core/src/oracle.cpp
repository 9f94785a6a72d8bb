#include "tabrl/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tabrl {
namespace {

constexpr double kImprovementTol = 1e-12;

std::vector<StateId> nonterminal_states(const TabularMdp& mdp) {
    std::vector<StateId> nt;
    for (StateId s = 0; s < mdp.num_states; ++s)
        if (!mdp.is_terminal(s)) nt.push_back(s);
    return nt;
}

double action_value(const TabularMdp& mdp, const std::vector<double>& v, double gamma,
                    StateId s, ActionId a) {
    double acc = 0.0;
    for (const auto& e : mdp.row(s, a))
        if (!mdp.is_terminal(e.state)) acc += e.prob * v[e.state];
    return mdp.reward(s, a) + gamma * acc;
}

}  // namespace

std::optional<std::vector<StateId>> topological_order(const TabularMdp& mdp) {
    const StateId S = mdp.num_states;
    std::vector<std::int32_t> indeg(S, 0);
    std::size_t num_nonterminal = 0;
    for (StateId s = 0; s < S; ++s) {
        if (mdp.is_terminal(s)) continue;
        ++num_nonterminal;
        for (ActionId a = 0; a < mdp.num_actions; ++a)
            for (const auto& e : mdp.row(s, a))
                if (e.prob > 0.0 && !mdp.is_terminal(e.state)) ++indeg[e.state];
    }
    std::vector<StateId> order;
    order.reserve(num_nonterminal);
    std::vector<StateId> ready;
    for (StateId s = 0; s < S; ++s)
        if (!mdp.is_terminal(s) && indeg[s] == 0) ready.push_back(s);
    while (!ready.empty()) {
        const StateId s = ready.back();
        ready.pop_back();
        order.push_back(s);
        for (ActionId a = 0; a < mdp.num_actions; ++a)
            for (const auto& e : mdp.row(s, a))
                if (e.prob > 0.0 && !mdp.is_terminal(e.state) && --indeg[e.state] == 0)
                    ready.push_back(e.state);
    }
    if (order.size() != num_nonterminal) return std::nullopt;
    return order;
}

double bellman_residual(const TabularMdp& mdp, const std::vector<double>& v,
                        double gamma) {
    double worst = 0.0;
    for (StateId s = 0; s < mdp.num_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        double best = -std::numeric_limits<double>::infinity();
        for (ActionId a = 0; a < mdp.num_actions; ++a)
            best = std::max(best, action_value(mdp, v, gamma, s, a));
        worst = std::max(worst, std::abs(v[s] - best));
    }
    return worst;
}

namespace {

OptimalSolution solve_acyclic(const TabularMdp& mdp, double gamma,
                              const std::vector<StateId>& topo, bool record_trace) {
    OptimalSolution sol;
    sol.q_star = QTable(mdp.num_states, mdp.num_actions, 0.0);
    sol.v_star.assign(mdp.num_states, 0.0);
    sol.policy.assign(mdp.num_states, -1);
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const StateId s = *it;
        double best = -std::numeric_limits<double>::infinity();
        ActionId arg = 0;
        for (ActionId a = 0; a < mdp.num_actions; ++a) {
            const double q = action_value(mdp, sol.v_star, gamma, s, a);
            sol.q_star(s, a) = q;
            if (q > best) {
                best = q;
                arg = a;
            }
        }
        sol.v_star[s] = best;
        sol.policy[s] = arg;
    }
    sol.iterations = 1;
    sol.backward_induction = true;
    sol.residual = bellman_residual(mdp, sol.v_star, gamma);
    if (record_trace) sol.eval_trace.push_back(sol.v_star);
    return sol;
}

/// Exact value of a fixed policy via (I - gamma P) v = r over non-terminal
/// states. Throws when the solve degenerates (improper policy at gamma = 1).
std::vector<double> evaluate_policy(const TabularMdp& mdp, double gamma,
                                    const std::vector<StateId>& nt,
                                    const std::vector<std::int32_t>& nt_index,
                                    const std::vector<ActionId>& policy) {
    const auto m = static_cast<Eigen::Index>(nt.size());
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const StateId s = nt[static_cast<std::size_t>(i)];
        const ActionId a = policy[s];
        rhs(i) = mdp.reward(s, a);
        for (const auto& e : mdp.row(s, a))
            if (!mdp.is_terminal(e.state))
                lhs(i, nt_index[e.state]) -= gamma * e.prob;
    }
    const Eigen::VectorXd x = lhs.partialPivLu().solve(rhs);
    if (!x.allFinite() || (lhs * x - rhs).cwiseAbs().maxCoeff() > 1e-8)
        throw std::runtime_error("policy evaluation failed: improper policy or singular system");
    std::vector<double> v(mdp.num_states, 0.0);
    for (Eigen::Index i = 0; i < m; ++i) v[nt[static_cast<std::size_t>(i)]] = x(i);
    return v;
}

}  // namespace

OptimalSolution policy_iteration(const TabularMdp& mdp, double gamma,
                                 bool record_trace) {
    if (auto topo = topological_order(mdp))
        return solve_acyclic(mdp, gamma, *topo, record_trace);

    const std::vector<StateId> nt = nonterminal_states(mdp);
    std::vector<std::int32_t> nt_index(mdp.num_states, -1);
    for (std::size_t i = 0; i < nt.size(); ++i)
        nt_index[nt[i]] = static_cast<std::int32_t>(i);

    std::vector<ActionId> policy(mdp.num_states, -1);
    for (StateId s : nt) {
        ActionId arg = 0;
        for (ActionId a = 1; a < mdp.num_actions; ++a)
            if (mdp.reward(s, a) > mdp.reward(s, arg)) arg = a;
        policy[s] = arg;
    }

    constexpr int kMaxIterations = 1000;
    OptimalSolution sol;
    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        std::vector<double> v = evaluate_policy(mdp, gamma, nt, nt_index, policy);
        if (record_trace) sol.eval_trace.push_back(v);
        bool changed = false;
        for (StateId s : nt) {
            double best = action_value(mdp, v, gamma, s, policy[s]);
            ActionId arg = policy[s];
            for (ActionId a = 0; a < mdp.num_actions; ++a) {
                const double q = action_value(mdp, v, gamma, s, a);
                if (q > best + kImprovementTol) {
                    best = q;
                    arg = a;
                }
            }
            if (arg != policy[s]) {
                policy[s] = arg;
                changed = true;
            }
        }
        if (!changed) {
            sol.q_star = QTable(mdp.num_states, mdp.num_actions, 0.0);
            for (StateId s : nt)
                for (ActionId a = 0; a < mdp.num_actions; ++a)
                    sol.q_star(s, a) = action_value(mdp, v, gamma, s, a);
            sol.v_star = std::move(v);
            sol.policy = std::move(policy);
            sol.iterations = iter;
            sol.residual = bellman_residual(mdp, sol.v_star, gamma);
            return sol;
        }
    }
    throw std::runtime_error("policy iteration exceeded its iteration cap");
}

ValueIterationResult value_iteration(const TabularMdp& mdp, double gamma, double tol,
                                     int max_sweeps) {
    ValueIterationResult res;
    std::vector<double> v(mdp.num_states, 0.0);
    std::vector<double> next(mdp.num_states, 0.0);
    for (res.sweeps = 1; res.sweeps <= max_sweeps; ++res.sweeps) {
        double delta = 0.0;
        for (StateId s = 0; s < mdp.num_states; ++s) {
            if (mdp.is_terminal(s)) continue;
            double best = -std::numeric_limits<double>::infinity();
            for (ActionId a = 0; a < mdp.num_actions; ++a)
                best = std::max(best, action_value(mdp, v, gamma, s, a));
            next[s] = best;
            delta = std::max(delta, std::abs(best - v[s]));
        }
        v.swap(next);
        res.residual = delta;
        if (delta <= tol) break;
    }
    if (res.residual > tol)
        throw std::runtime_error("value iteration did not converge");
    res.q = QTable(mdp.num_states, mdp.num_actions, 0.0);
    for (StateId s = 0; s < mdp.num_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        for (ActionId a = 0; a < mdp.num_actions; ++a)
            res.q(s, a) = action_value(mdp, v, gamma, s, a);
    }
    res.v = std::move(v);
    return res;
}

ValueIterationResult value_iteration_on_model(const EmpiricalModel& model,
                                              const std::vector<std::uint8_t>& terminal,
                                              double gamma, double q0, double tol,
                                              int max_sweeps,
                                              const std::vector<double>* warm_v) {
    const StateId S = model.num_states();
    const ActionId A = model.num_actions();
    ValueIterationResult res;
    res.q = QTable(S, A, q0);

    std::vector<StateId> affected;
    std::vector<std::uint8_t> is_affected(S, 0);
    for (std::size_t idx : model.touched()) {
        const auto s = static_cast<StateId>(idx / A);
        if (!is_affected[s]) {
            is_affected[s] = 1;
            affected.push_back(s);
        }
    }

    std::vector<double> v(S, q0);
    if (warm_v) {
        v = *warm_v;
    } else {
        for (StateId s = 0; s < S; ++s)
            if (terminal[s]) v[s] = 0.0;
    }

    const auto state_value = [&](StateId s) { return terminal[s] ? 0.0 : v[s]; };

    for (res.sweeps = 1; res.sweeps <= max_sweeps; ++res.sweeps) {
        for (std::size_t idx : model.touched()) {
            const auto s = static_cast<StateId>(idx / A);
            const auto a = static_cast<ActionId>(idx % A);
            double acc = 0.0;
            model.for_each_successor(
                s, a, [&](StateId succ, double p) { acc += p * state_value(succ); });
            res.q.values[idx] = model.mean_reward(s, a) + gamma * acc;
        }
        double delta = 0.0;
        for (StateId s : affected) {
            if (terminal[s]) continue;
            const double best = res.q.row_max(s);
            delta = std::max(delta, std::abs(best - v[s]));
            v[s] = best;
        }
        res.residual = delta;
        if (delta <= tol) break;
    }
    if (res.residual > tol)
        throw std::runtime_error("model value iteration did not converge");
    for (StateId s = 0; s < S; ++s)
        if (terminal[s])
            for (ActionId a = 0; a < A; ++a) res.q(s, a) = 0.0;
    res.v = std::move(v);
    return res;
}

ActionId PolicyMatrix::sample(StateId s, RngStream& rng) const {
    const double u = rng.uniform01();
    double acc = 0.0;
    ActionId last_positive = 0;
    for (ActionId a = 0; a < num_actions; ++a) {
        const double p = prob(s, a);
        if (p <= 0.0) continue;
        last_positive = a;
        acc += p;
        if (u < acc) return a;
    }
    return last_positive;
}

PolicyMatrix uniform_policy(const TabularMdp& mdp) {
    PolicyMatrix pi;
    pi.num_states = mdp.num_states;
    pi.num_actions = mdp.num_actions;
    pi.probs.assign(static_cast<std::size_t>(mdp.num_states) * mdp.num_actions, 0.0);
    const double p = 1.0 / mdp.num_actions;
    for (StateId s = 0; s < mdp.num_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        for (ActionId a = 0; a < mdp.num_actions; ++a) pi.prob(s, a) = p;
    }
    return pi;
}

PolicyMatrix epsilon_greedy_policy(const QTable& q, const TabularMdp& mdp,
                                   double epsilon, EpsilonStyle style) {
    PolicyMatrix pi;
    pi.num_states = mdp.num_states;
    pi.num_actions = mdp.num_actions;
    pi.probs.assign(static_cast<std::size_t>(mdp.num_states) * mdp.num_actions, 0.0);
    const ActionId A = mdp.num_actions;
    for (StateId s = 0; s < mdp.num_states; ++s) {
        if (mdp.is_terminal(s)) continue;
        const double best = q.row_max(s);
        ActionId num_best = 0;
        for (ActionId a = 0; a < A; ++a)
            if (q(s, a) == best) ++num_best;
        if (num_best == A) {
            for (ActionId a = 0; a < A; ++a) pi.prob(s, a) = 1.0 / A;
            continue;
        }
        for (ActionId a = 0; a < A; ++a) {
            const bool greedy = q(s, a) == best;
            if (style == EpsilonStyle::exclusive)
                pi.prob(s, a) = greedy ? (1.0 - epsilon) / num_best
                                       : epsilon / (A - num_best);
            else
                pi.prob(s, a) =
                    epsilon / A + (greedy ? (1.0 - epsilon) / num_best : 0.0);
        }
    }
    return pi;
}

RateResult expected_reward_rate_exact(const TabularMdp& mdp,
                                      const PolicyMatrix& policy) {
    RateResult res;
    const StateId S = mdp.num_states;

    // Expected reward per occupied step under the policy.
    std::vector<double> r_pi(S, 0.0);
    for (StateId s = 0; s < S; ++s) {
        if (mdp.is_terminal(s)) continue;
        for (ActionId a = 0; a < mdp.num_actions; ++a)
            r_pi[s] += policy.prob(s, a) * mdp.reward(s, a);
    }

    // h = expected reward collected before absorption, l = expected steps.
    std::vector<double> h(S, 0.0);
    std::vector<double> l(S, 0.0);
    if (auto topo = topological_order(mdp)) {
        for (auto it = topo->rbegin(); it != topo->rend(); ++it) {
            const StateId s = *it;
            double hsum = r_pi[s];
            double lsum = 1.0;
            for (ActionId a = 0; a < mdp.num_actions; ++a) {
                const double pa = policy.prob(s, a);
                if (pa <= 0.0) continue;
                for (const auto& e : mdp.row(s, a)) {
                    if (mdp.is_terminal(e.state)) continue;
                    hsum += pa * e.prob * h[e.state];
                    lsum += pa * e.prob * l[e.state];
                }
            }
            h[s] = hsum;
            l[s] = lsum;
        }
    } else {
        const std::vector<StateId> nt = nonterminal_states(mdp);
        std::vector<std::int32_t> nt_index(S, -1);
        for (std::size_t i = 0; i < nt.size(); ++i)
            nt_index[nt[i]] = static_cast<std::int32_t>(i);
        const auto m = static_cast<Eigen::Index>(nt.size());
        Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m, m);
        Eigen::MatrixXd rhs(m, 2);
        for (Eigen::Index i = 0; i < m; ++i) {
            const StateId s = nt[static_cast<std::size_t>(i)];
            rhs(i, 0) = r_pi[s];
            rhs(i, 1) = 1.0;
            for (ActionId a = 0; a < mdp.num_actions; ++a) {
                const double pa = policy.prob(s, a);
                if (pa <= 0.0) continue;
                for (const auto& e : mdp.row(s, a))
                    if (!mdp.is_terminal(e.state))
                        lhs(i, nt_index[e.state]) -= pa * e.prob;
            }
        }
        const Eigen::MatrixXd x = lhs.partialPivLu().solve(rhs);
        if (!x.allFinite() || (lhs * x - rhs).cwiseAbs().maxCoeff() > 1e-8) {
            res.ok = false;
            return res;
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            h[nt[static_cast<std::size_t>(i)]] = x(i, 0);
            l[nt[static_cast<std::size_t>(i)]] = x(i, 1);
        }
    }

    double reward_per_episode = 0.0;
    double steps_per_episode = 0.0;
    for (const auto& init : mdp.initial_states) {
        reward_per_episode += init.prob * h[init.state];
        steps_per_episode += init.prob * l[init.state];
    }
    if (!(steps_per_episode >= 1.0) || !std::isfinite(reward_per_episode)) {
        res.ok = false;
        return res;
    }
    res.rate = reward_per_episode / steps_per_episode;
    return res;
}

RateResult expected_reward_rate_simulated(const TabularMdp& mdp,
                                          const PolicyMatrix& policy,
                                          std::uint64_t steps, RngStream& rng) {
    RateResult res;
    if (steps == 0) return res;
    const std::uint64_t batches = std::min<std::uint64_t>(100, steps);
    const std::uint64_t batch_size = steps / batches;

    StateId s = reset(mdp, rng);
    double total = 0.0;
    std::vector<double> batch_mean(batches, 0.0);
    for (std::uint64_t b = 0; b < batches; ++b) {
        double acc = 0.0;
        for (std::uint64_t i = 0; i < batch_size; ++i) {
            const ActionId a = policy.sample(s, rng);
            const Transition t = step(mdp, s, a, rng);
            acc += t.reward;
            s = t.terminal ? reset(mdp, rng) : t.next_state;
        }
        batch_mean[b] = acc / static_cast<double>(batch_size);
        total += acc;
    }
    res.rate = total / static_cast<double>(batches * batch_size);
    if (batches > 1) {
        double var = 0.0;
        for (double m : batch_mean) var += (m - res.rate) * (m - res.rate);
        res.std_error =
            std::sqrt(var / static_cast<double>(batches * (batches - 1)));
    }
    return res;
}

RateBaselines compute_baselines(const TabularMdp& mdp, const OptimalSolution& sol,
                                double epsilon, EpsilonStyle style) {
    RateBaselines b;
    const RateResult uni = expected_reward_rate_exact(mdp, uniform_policy(mdp));
    const RateResult opt = expected_reward_rate_exact(
        mdp, epsilon_greedy_policy(sol.q_star, mdp, epsilon, style));
    b.r_uniform = uni.rate;
    b.r_opt = opt.rate;
    b.ok = uni.ok && opt.ok;
    b.degenerate = std::abs(b.r_opt - b.r_uniform) <= 1e-12;
    return b;
}

NormalizedRate normalize_rate(double rate, const RateBaselines& baselines) {
    if (baselines.degenerate) return {rate, true};
    return {(rate - baselines.r_uniform) / (baselines.r_opt - baselines.r_uniform),
            false};
}

}  // namespace tabrl
