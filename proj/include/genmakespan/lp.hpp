#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "genmakespan/distribution.hpp"
#include "genmakespan/set_system.hpp"

namespace gms {

// Greedy max coverage is a (1 - 1/e)-approximation, so constraints that the
// separation oracle certifies hold only up to this factor.
inline constexpr double kCoverSlack = std::numbers::e / (std::numbers::e - 1.0);

struct LpOptions {
    double b = 4.0;       // per-group budget multiplier
    bool fast_k = false;  // sweep only the doubly-exponential group sizes
    int max_cuts = 500;
    double tol = 1e-7;
};

// One generated row: sum over tasks touching K of beta_k(X') y <= b*k.
struct CoverageCut {
    std::int64_t k = 0;
    std::vector<int> resources;  // K, sorted
    double value = 0.0;          // coverage of the point that triggered the cut
};

struct GreedyCoverage {
    std::vector<int> resources;  // chosen set, sorted
    double value = 0.0;
};

struct LpSolution {
    bool feasible = false;
    std::vector<double> y;     // per task; dropped tasks stay at 0
    std::vector<int> dropped;  // tasks removed for oversized exceptional mean
    double cover_value = 0.0;  // max sum of y when feasibility was certified
    double lean_value = 0.0;   // total mean mass of the returned point
    std::vector<CoverageCut> cuts;
    int lp_solves = 0;
};

// Picks k resources greedily by marginal covered weight, ties to the
// smaller id; unneeded picks fill with the smallest unused ids.
GreedyCoverage greedy_max_coverage(const SetSystemInstance& sys, const std::vector<double>& weight,
                                   int k);

// Group sizes probed by the separation oracle.
std::vector<std::int64_t> separation_sweep(int n_resources, bool fast_k);

// Solves the covering relaxation: max-cover feasibility check first, then a
// second pass minimizing total mean mass at the same target. Throws
// ResourceLimitError when the cut budget runs out.
LpSolution solve_relaxation(const SetSystemInstance& sys, const std::vector<SplitDistribution>& tasks,
                            int target, const LpOptions& opt = {});

} // namespace gms
