#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "genmakespan/set_system.hpp"

namespace gms {

// Reward-maximization view: pick tasks so every resource carries at most
// theta of size.
struct PackingInstance {
    SetSystemInstance sys;
    std::vector<double> sizes;    // s_j >= 0, each <= theta
    std::vector<double> rewards;  // r_j, may be negative
    double theta = 0.0;
};

// Cardinality view with a global cost budget on top of the size budget.
struct DetCostInstance {
    SetSystemInstance sys;
    std::vector<double> sizes;
    std::vector<double> costs;  // c_j >= 0, each <= psi
    double theta = 0.0;
    double psi = 0.0;
};

struct RoundedSet {
    std::vector<int> chosen;  // sorted task ids, within support(y)
    double achieved_reward = 0.0;
    bool capacity_ok = true;  // every resource within theta, checked exactly
    bool cost_ok = true;      // total cost within psi (cost-budget callers)
    bool reward_met = true;   // documented reward bound held on this run
    int branch = 0;           // cost rounding: 1 = returned whole, 2 = merge path
};

// Rounder plug-in: must return an integrally feasible set inside support(y).
using PackableRounder =
    std::function<RoundedSet(const PackingInstance&, const std::vector<double>&, std::uint64_t)>;

// Encodes points 0..n-1 as a path tree so interval tasks become paths.
TreeGeometry line_as_path_tree(const LineGeometry& line);

// Randomized rounding for path tasks on a tree. Per repetition: paths are
// processed by increasing depth of their topmost vertex (ties by id), kept
// with probability y_j/4, and admitted to a small-size or large-size pool
// when capacity allows; the better pool wins. Across repetitions the best
// feasible result is kept. Expected reward of one repetition is at least
// (1/16) of the fractional reward.
RoundedSet round_tree_ufp(const PackingInstance& inst, const std::vector<double>& y,
                          const TreeGeometry& tree, int repetitions = 64, std::uint64_t seed = 0);

// Geometric size-grouping reduction. Tasks below tau = theta/(2 max(1, log2 m))
// are rounded directly with greedy eviction; each coarser size group runs
// floor(theta/max size) sweeps of the independent-set plug-in; the best
// group's result is returned.
RoundedSet round_appendix_b(const PackingInstance& inst, const std::vector<double>& y,
                            const PackableRounder& indep, std::uint64_t seed);

// Default plug-in: scan by nonincreasing r_j*y_j (ties by id), keep a task
// when none of its resources is taken yet.
RoundedSet greedy_independent_set(const PackingInstance& inst, const std::vector<double>& y);

// Cardinality-with-costs reduction: rewards r_j = 1 - (T/(2 psi)) c_j feed
// the packable rounder; an over-budget result is split into singletons and
// greedily merged under the cost budget, keeping the largest part.
RoundedSet solve_detcost(const DetCostInstance& inst, const std::vector<double>& y,
                         const PackableRounder& rounder, double alpha_bar = 4.0, std::uint64_t seed = 0);

} // namespace gms
