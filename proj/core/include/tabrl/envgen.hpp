#pragma once

#include <string>

#include "tabrl/mdp.hpp"

namespace tabrl {

enum class RewardMode { terminal_only, intermittent };

/// Parameters of a tree MDP. branching == 1 gives the deterministic A-ary
/// tree; branching >= 2 gives the stochastic variant where each non-leaf
/// state owns a private set of `branching` children shared across actions.
///
/// dyadic_bits > 0 quantizes rewards to positive multiples of 2^-dyadic_bits
/// so that return sums are exact in floating point.
///
/// In intermittent mode each transition independently carries a reward with
/// probability reward_prob (terminal_only ignores it and always rewards the
/// transitions entering leaves).
struct TmdpSpec {
    ActionId num_actions = 4;
    int depth = 5;
    int branching = 1;
    RewardMode reward_mode = RewardMode::terminal_only;
    int dyadic_bits = 0;
    double reward_prob = 1.0;
};

struct MazeSpec {
    int width = 20;
    int height = 20;
    double wall_density = 0.3;  // per interior edge, in [0, 1)
    int goal_x = -1;            // -1: drawn uniformly at random
    int goal_y = -1;
};

/// Wall layout of a generated maze. Walls sit on edges between adjacent
/// cells; the outer boundary is always walled.
struct MazeLayout {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> wall_right;  // between (x,y) and (x+1,y)
    std::vector<std::uint8_t> wall_down;   // between (x,y) and (x,y+1)
    StateId goal = 0;

    StateId cell(int x, int y) const { return static_cast<StateId>(y) * width + x; }
    bool has_wall_right(int x, int y) const { return wall_right[cell(x, y)] != 0; }
    bool has_wall_down(int x, int y) const { return wall_down[cell(x, y)] != 0; }

    /// Plain-text rendering: '#' walls, '.' free cells, 'G' goal.
    std::string render() const;
};

struct MazeResult {
    TabularMdp mdp;
    MazeLayout layout;
};

/// Maze actions in the order used by the transition table.
enum MazeAction : ActionId { maze_up = 0, maze_down = 1, maze_left = 2, maze_right = 3 };

/// Deterministic A-ary tree of depth d: S = (A^(d+1)-1)/(A-1), states in
/// level order, each (state, action) leads to a distinct child, leaves
/// terminal. Rewards ~ Uniform(0,1] on leaf-entering pairs (terminal_only)
/// or on every internal pair (intermittent).
TabularMdp gen_det_tmdp(const TmdpSpec& spec, RngStream rng);

/// Stochastic tree: level l holds branching^l states; per action the
/// probability vector over the owning state's children is a uniform simplex
/// draw. Requires branching >= 2.
TabularMdp gen_stoch_tmdp(const TmdpSpec& spec, RngStream rng);

/// Grid maze with 4 actions; moving into a wall keeps the agent in place.
/// Reward 1 on the pair entering the goal, 0 elsewhere; the goal is
/// terminal; starts are uniform over non-goal cells. Connectivity is
/// enforced by carving random blocking walls.
MazeResult gen_maze(const MazeSpec& spec, RngStream rng);

}  // namespace tabrl
