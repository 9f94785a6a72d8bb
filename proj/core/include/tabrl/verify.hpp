#pragma once

#include <optional>

#include "tabrl/envgen.hpp"
#include "tabrl/mdp.hpp"
#include "tabrl/rng.hpp"

namespace tabrl {

struct DivergencePoint {
    int instance = 0;
    int trace = 0;
    int episode = 0;
    StateId state = 0;
    ActionId action = 0;
    double ec_value = 0.0;
    double ps_value = 0.0;
};

struct EquivalenceReport {
    int instances = 0;
    int traces_per_instance = 0;
    int episodes = 0;
    double max_abs_q_diff = 0.0;
    bool exact_equal = true;
    std::optional<DivergencePoint> first_divergence;
};

/// Runs an episodic-control learner and a forgetting planner over identical
/// uniform-random behavior traces on deterministic single-branch trees and
/// compares full Q tables after every episode. Positive quantized rewards and
/// zero initialization are forced so equality can hold exactly.
EquivalenceReport lockstep_equivalence(TmdpSpec spec, int instances, int traces,
                                       int episodes, RngStream master);

/// Online planner with unlimited backup budget, stepped by a uniform-random
/// policy; after every step the Q table is compared against an independent
/// fixed-point solve of the learned model. Returns the largest sup-norm gap.
double drain_consistency(const TabularMdp& mdp, double gamma, int steps,
                         RngStream rng);

/// With initialization at least depth * max reward, the episodic-control
/// table must stay frozen while the online planner moves at least one entry.
/// Returns true when both hold. Throws if q0 is below the bound.
bool ec_bound_check(TmdpSpec spec, double q0, int episodes, RngStream master);

struct DrainSuiteReport {
    int instances = 0;
    int steps = 0;
    double max_gap = 0.0;
};

/// Runs drain_consistency over an alternating mix of stochastic trees
/// (gamma 1) and mazes (gamma 0.99).
DrainSuiteReport drain_suite(int instances, int steps, RngStream master);

}  // namespace tabrl
