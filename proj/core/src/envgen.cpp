#include "tabrl/envgen.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace tabrl {

namespace {

double draw_reward(const TmdpSpec& spec, RngStream& rng) {
    const double u = rng.uniform_open01();
    if (spec.dyadic_bits <= 0) return u;
    const double scale = std::ldexp(1.0, spec.dyadic_bits);
    return std::ceil(u * scale) / scale;  // positive multiple of 2^-bits
}

void check_tmdp_spec(const TmdpSpec& spec) {
    if (spec.num_actions < 2) throw std::invalid_argument("tMDP needs >= 2 actions");
    if (spec.depth < 1) throw std::invalid_argument("tMDP needs depth >= 1");
    if (spec.branching < 1) throw std::invalid_argument("tMDP branching must be >= 1");
    if (!(spec.reward_prob > 0.0 && spec.reward_prob <= 1.0))
        throw std::invalid_argument("tMDP reward_prob must be in (0, 1]");
}

// terminal_only always rewards the leaf-entering edge; intermittent gates each
// edge on an independent coin so reward placement is irregular.
bool draw_rewarded(const TmdpSpec& spec, bool enters_leaf, RngStream& rng) {
    if (spec.reward_mode == RewardMode::terminal_only) return enters_leaf;
    return spec.reward_prob >= 1.0 || rng.uniform01() < spec.reward_prob;
}

}  // namespace

TabularMdp gen_det_tmdp(const TmdpSpec& spec, RngStream rng) {
    check_tmdp_spec(spec);
    if (spec.branching != 1)
        throw std::invalid_argument("gen_det_tmdp requires branching == 1");

    const std::int64_t a = spec.num_actions;
    // Level sizes a^0 .. a^d; level l starts at (a^l - 1) / (a - 1).
    std::vector<std::int64_t> level_start(spec.depth + 2, 0);
    std::int64_t level_size = 1;
    for (int l = 0; l <= spec.depth; ++l) {
        level_start[l + 1] = level_start[l] + level_size;
        level_size *= a;
    }
    const std::int64_t total = level_start[spec.depth + 1];
    if (total > (std::int64_t{1} << 30))
        throw std::invalid_argument("tMDP too large");

    TabularMdp mdp;
    mdp.num_states = static_cast<StateId>(total);
    mdp.num_actions = spec.num_actions;
    mdp.transitions.resize(total * a);
    mdp.rewards.assign(total * a, 0.0);
    mdp.terminal.assign(total, 0);
    mdp.initial_states = {{0, 1.0}};

    for (int l = 0; l < spec.depth; ++l) {
        const std::int64_t count = level_start[l + 1] - level_start[l];
        for (std::int64_t k = 0; k < count; ++k) {
            const StateId s = static_cast<StateId>(level_start[l] + k);
            for (ActionId act = 0; act < spec.num_actions; ++act) {
                const StateId child =
                    static_cast<StateId>(level_start[l + 1] + k * a + act);
                mdp.transitions[mdp.sa_index(s, act)] = {{child, 1.0}};
                const bool enters_leaf = (l == spec.depth - 1);
                if (draw_rewarded(spec, enters_leaf, rng))
                    mdp.rewards[mdp.sa_index(s, act)] = draw_reward(spec, rng);
            }
        }
    }
    for (std::int64_t s = level_start[spec.depth]; s < total; ++s)
        mdp.terminal[s] = 1;
    return mdp;
}

TabularMdp gen_stoch_tmdp(const TmdpSpec& spec, RngStream rng) {
    check_tmdp_spec(spec);
    if (spec.branching < 2)
        throw std::invalid_argument("gen_stoch_tmdp requires branching >= 2");

    const std::int64_t b = spec.branching;
    std::vector<std::int64_t> level_start(spec.depth + 2, 0);
    std::int64_t level_size = 1;
    for (int l = 0; l <= spec.depth; ++l) {
        level_start[l + 1] = level_start[l] + level_size;
        level_size *= b;
    }
    const std::int64_t total = level_start[spec.depth + 1];
    if (total > (std::int64_t{1} << 30))
        throw std::invalid_argument("tMDP too large");

    TabularMdp mdp;
    mdp.num_states = static_cast<StateId>(total);
    mdp.num_actions = spec.num_actions;
    mdp.transitions.resize(total * spec.num_actions);
    mdp.rewards.assign(total * spec.num_actions, 0.0);
    mdp.terminal.assign(total, 0);
    mdp.initial_states = {{0, 1.0}};

    std::vector<double> weights(b);
    for (int l = 0; l < spec.depth; ++l) {
        const std::int64_t count = level_start[l + 1] - level_start[l];
        for (std::int64_t k = 0; k < count; ++k) {
            const StateId s = static_cast<StateId>(level_start[l] + k);
            const std::int64_t child_base = level_start[l + 1] + k * b;
            for (ActionId act = 0; act < spec.num_actions; ++act) {
                // Uniform draw from the simplex: normalized Exp(1) samples.
                double sum = 0.0;
                for (auto& w : weights) sum += (w = rng.exponential());
                auto& row = mdp.transitions[mdp.sa_index(s, act)];
                row.resize(b);
                for (std::int64_t c = 0; c < b; ++c)
                    row[c] = {static_cast<StateId>(child_base + c), weights[c] / sum};
                const bool enters_leaf = (l == spec.depth - 1);
                if (draw_rewarded(spec, enters_leaf, rng))
                    mdp.rewards[mdp.sa_index(s, act)] = draw_reward(spec, rng);
            }
        }
    }
    for (std::int64_t s = level_start[spec.depth]; s < total; ++s)
        mdp.terminal[s] = 1;
    return mdp;
}

namespace {

// Cells reachable from the goal through open edges.
std::vector<std::uint8_t> reachable_from_goal(const MazeLayout& m) {
    std::vector<std::uint8_t> seen(m.width * m.height, 0);
    std::queue<StateId> frontier;
    seen[m.goal] = 1;
    frontier.push(m.goal);
    while (!frontier.empty()) {
        const StateId c = frontier.front();
        frontier.pop();
        const int x = c % m.width, y = c / m.width;
        auto visit = [&](int nx, int ny) {
            const StateId n = m.cell(nx, ny);
            if (!seen[n]) {
                seen[n] = 1;
                frontier.push(n);
            }
        };
        if (x + 1 < m.width && !m.has_wall_right(x, y)) visit(x + 1, y);
        if (x > 0 && !m.has_wall_right(x - 1, y)) visit(x - 1, y);
        if (y + 1 < m.height && !m.has_wall_down(x, y)) visit(x, y + 1);
        if (y > 0 && !m.has_wall_down(x, y - 1)) visit(x, y - 1);
    }
    return seen;
}

}  // namespace

std::string MazeLayout::render() const {
    const int rows = 2 * height + 1, cols = 2 * width + 1;
    std::string out;
    out.reserve(rows * (cols + 1));
    for (int ry = 0; ry < rows; ++ry) {
        for (int rx = 0; rx < cols; ++rx) {
            char ch;
            if (ry % 2 == 0 && rx % 2 == 0) {
                ch = '#';  // corner
            } else if (ry % 2 == 1 && rx % 2 == 1) {
                const int x = rx / 2, y = ry / 2;
                ch = (cell(x, y) == goal) ? 'G' : '.';
            } else if (ry % 2 == 1) {
                // vertical edge between (x-1,y) and (x,y)
                const int x = rx / 2, y = ry / 2;
                ch = (rx == 0 || rx == cols - 1 || has_wall_right(x - 1, y)) ? '#' : ' ';
            } else {
                // horizontal edge between (x,y-1) and (x,y)
                const int x = rx / 2, y = ry / 2;
                ch = (ry == 0 || ry == rows - 1 || has_wall_down(x, y - 1)) ? '#' : ' ';
            }
            out.push_back(ch);
        }
        out.push_back('\n');
    }
    return out;
}

MazeResult gen_maze(const MazeSpec& spec, RngStream rng) {
    if (spec.width < 1 || spec.height < 1 || spec.width * spec.height < 2)
        throw std::invalid_argument("maze needs at least 2 cells");
    if (spec.wall_density < 0.0 || spec.wall_density >= 1.0)
        throw std::invalid_argument("wall_density must be in [0, 1)");

    MazeLayout m;
    m.width = spec.width;
    m.height = spec.height;
    m.wall_right.assign(spec.width * spec.height, 0);
    m.wall_down.assign(spec.width * spec.height, 0);

    if (spec.goal_x >= 0 && spec.goal_y >= 0) {
        if (spec.goal_x >= spec.width || spec.goal_y >= spec.height)
            throw std::invalid_argument("goal cell out of range");
        m.goal = m.cell(spec.goal_x, spec.goal_y);
    } else {
        m.goal = static_cast<StateId>(
            rng.uniform_below(static_cast<std::uint64_t>(spec.width) * spec.height));
    }

    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
            if (x + 1 < spec.width)
                m.wall_right[m.cell(x, y)] = rng.uniform01() < spec.wall_density;
            if (y + 1 < spec.height)
                m.wall_down[m.cell(x, y)] = rng.uniform01() < spec.wall_density;
        }

    // Carve a random wall between the reached and unreached regions until
    // every cell reaches the goal.
    for (;;) {
        const auto seen = reachable_from_goal(m);
        std::vector<std::pair<StateId, int>> blocking;  // (cell, 0=right|1=down)
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x) {
                const StateId c = m.cell(x, y);
                if (x + 1 < spec.width && m.has_wall_right(x, y) &&
                    seen[c] != seen[m.cell(x + 1, y)])
                    blocking.emplace_back(c, 0);
                if (y + 1 < spec.height && m.has_wall_down(x, y) &&
                    seen[c] != seen[m.cell(x, y + 1)])
                    blocking.emplace_back(c, 1);
            }
        if (std::all_of(seen.begin(), seen.end(), [](auto v) { return v != 0; }))
            break;
        if (blocking.empty())
            throw std::runtime_error("maze generation stuck: no carvable wall");
        const auto& [c, dir] = blocking[rng.uniform_below(blocking.size())];
        (dir == 0 ? m.wall_right : m.wall_down)[c] = 0;
    }

    MazeResult result;
    result.layout = m;
    TabularMdp& mdp = result.mdp;
    const StateId total = static_cast<StateId>(spec.width * spec.height);
    mdp.num_states = total;
    mdp.num_actions = 4;
    mdp.transitions.resize(static_cast<std::size_t>(total) * 4);
    mdp.rewards.assign(static_cast<std::size_t>(total) * 4, 0.0);
    mdp.terminal.assign(total, 0);
    mdp.terminal[m.goal] = 1;

    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
            const StateId s = m.cell(x, y);
            if (s == m.goal) continue;
            auto target = [&](ActionId act) -> StateId {
                switch (act) {
                    case maze_up:
                        return (y > 0 && !m.has_wall_down(x, y - 1)) ? m.cell(x, y - 1) : s;
                    case maze_down:
                        return (y + 1 < spec.height && !m.has_wall_down(x, y)) ? m.cell(x, y + 1) : s;
                    case maze_left:
                        return (x > 0 && !m.has_wall_right(x - 1, y)) ? m.cell(x - 1, y) : s;
                    default:
                        return (x + 1 < spec.width && !m.has_wall_right(x, y)) ? m.cell(x + 1, y) : s;
                }
            };
            for (ActionId act = 0; act < 4; ++act) {
                const StateId next = target(act);
                mdp.transitions[mdp.sa_index(s, act)] = {{next, 1.0}};
                if (next == m.goal) mdp.rewards[mdp.sa_index(s, act)] = 1.0;
            }
        }

    const double p = 1.0 / (total - 1);
    mdp.initial_states.reserve(total - 1);
    for (StateId s = 0; s < total; ++s)
        if (s != m.goal) mdp.initial_states.push_back({s, p});
    return result;
}

}  // namespace tabrl
