#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "genmakespan/distribution.hpp"
#include "genmakespan/set_system.hpp"

namespace gms {

// Expected maximum resource load of the selection, by full enumeration of
// the joint support. Throws ResourceLimitError past 10^6 outcomes.
double evaluate_exact(const SetSystemInstance& sys, const std::vector<DiscreteDistribution>& dists,
                      const std::vector<int>& selection);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

// Monte Carlo estimate of the same quantity. Sampling is chunked with one
// derived RNG stream per chunk, so the result depends only on (seed,
// samples), never on the thread count.
McEstimate evaluate_mc(const SetSystemInstance& sys, const std::vector<DiscreteDistribution>& dists,
                       const std::vector<int>& selection, std::int64_t samples, std::uint64_t seed,
                       int threads = 1);

struct BruteForceResult {
    double value = 0.0;
    std::vector<int> selection;  // lexicographically smallest among ties
};

// Reference optimum over every size-t selection. Throws ResourceLimitError
// past 10^5 subsets.
BruteForceResult brute_force_opt(const SetSystemInstance& sys,
                                 const std::vector<DiscreteDistribution>& dists, int target);

// Tasks loading resource i and a dangerous resource but no resource of
// cover[i]. Empty means the extension is safe for this instance.
std::vector<std::pair<int, int>> check_lambda_safe(const SetSystemInstance& sys,
                                                   const std::vector<int>& dangerous,
                                                   const ExtendResult& ext);

struct LpPointCheck {
    bool bounds_ok = true;
    bool exceptional_ok = true;
    bool groups_ok = true;
    double worst_group_excess = 0.0;  // load minus slack*b*k of the worst probed group
    std::int64_t worst_k = 0;
    std::vector<int> worst_group;
    bool exhaustive = false;  // all groups enumerated (small instances only)
    bool ok() const { return bounds_ok && exceptional_ok && groups_ok; }
};

// Verifies a fractional point against the relaxation rows: variable bounds,
// the exceptional budget, and the group rows within the given slack factor.
// Groups are enumerated exhaustively up to 12 resources; larger instances
// are probed by greedy coverage plus seeded random groups per size.
LpPointCheck check_lp_constraints(const SetSystemInstance& sys,
                                  const std::vector<SplitDistribution>& tasks,
                                  const std::vector<double>& y, double b, double slack,
                                  std::uint64_t seed, double tol = 1e-6);

} // namespace gms
