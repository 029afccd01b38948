#pragma once

#include <cstdint>
#include <vector>

#include "genmakespan/distribution.hpp"
#include "genmakespan/eval.hpp"
#include "genmakespan/lp.hpp"
#include "genmakespan/packing.hpp"
#include "genmakespan/set_system.hpp"

namespace gms {

// Number of decomposition levels rho: the smallest s with 2^(2^s) >= m,
// plus one. A single resource short-circuits to rho = 0 (one class).
int decomposition_depth(int n_resources);

// Effective-size index of class `level`: 2^(2^level), capped at m^2 (the
// largest constraint scale the relaxation certifies). Saturates instead of
// overflowing. Level rho always lands on m^2 for m >= 2.
std::int64_t class_size_index(int level, int n_resources);

// Certified per-resource fractional load budget of a class: 2b, weakened by
// the coverage slack at level 0 where the certificate comes from the pair
// rows of the relaxation rather than a finished removal round.
double class_load_budget(int level, double b);

// One load class: the resources whose weighted load stayed above the budget
// during this round, the tasks they pulled in, and the marked cover.
struct LoadClass {
    std::int64_t k = 1;                      // effective-size index for this class's sizes
    std::vector<int> dangerous;              // sorted resource ids
    std::vector<int> tasks;                  // sorted task ids
    std::vector<int> marked;                 // sorted resource ids, superset of dangerous
    std::vector<std::vector<int>> captured;  // per dangerous resource, the tasks it removed
};

// Classes 0..rho. Task sets partition [0, n); dangerous sets are pairwise
// disjoint; the last class holds everything the removal rounds left behind
// and marks every remaining resource.
struct ClassDecomposition {
    std::vector<LoadClass> classes;
    int rho = 0;
    double worst_load_ratio = 0.0;  // max observed class load over its budget
};

// Splits tasks into classes: round level l removes, in ascending resource
// order, every resource whose residual load at the next class index exceeds
// 2b, capturing its remaining tasks. Marked sets come from extend() on the
// full system; the covers stay valid on any task-restricted subsystem.
// Violated internal bounds (a certified budget, the class-count bound on a
// dangerous set) throw InternalError: they mean y was not feasible.
ClassDecomposition decompose(const LpSolution& y, const SetSystem& sys,
                             const std::vector<SplitDistribution>& split, double b);

// Outcome of the per-run consistency checks, with the measured worst cases
// so reports can show margins. A returned Solution has every `ok` flag true
// except possibly selection_ok/reward_met (heuristic rounders may fall
// short; see assemble_and_round).
struct AssertionReport {
    bool partition_ok = false;       // classes partition the tasks
    bool dangerous_bound_ok = false; // every |D_l| within its square bound
    bool fractional_ok = false;      // class loads within certified budgets
    double fractional_ratio = 0.0;
    bool assembled_ok = false;       // scaled point feasible for the packing rows
    double assembled_ratio = 0.0;    // worst row over theta
    bool chosen_load_ok = false;     // chosen class loads within twice theta
    double chosen_load_ratio = 0.0;
    bool exceptional_ok = false;     // chosen exceptional mass within twice psi
    double exceptional_total = 0.0;
    bool selection_ok = false;       // |chosen| >= target
    bool reward_met = false;         // cost rounding met its documented ratio
    int attempts = 0;                // rounding attempts consumed
    int branch = 0;                  // cost rounding branch of the kept attempt
};

struct GuessOutcome {
    double guess = 0.0;        // scaling divisor B
    bool feasible = false;     // relaxation feasible at this guess
    bool selection_ok = false; // rounded selection reached the target
    double estimate = 0.0;     // Monte Carlo mean when usable
};

struct Solution {
    std::vector<int> chosen;  // high and low parts merged, sorted
    std::vector<int> high;    // tasks kept outright for large y
    std::vector<int> low;     // tasks from the cost-budget rounding
    ClassDecomposition decomposition;
    AssertionReport report;
    int target = 0;
    double b = 0.0;
    double alpha_bar = 0.0;
    double guess = 0.0;               // winning scaling divisor (scaling driver)
    McEstimate estimate;              // final Monte Carlo estimate (scaling driver)
    std::vector<GuessOutcome> grid;   // per-guess provenance (scaling driver)
};

// Default plug-in for the assembled packing instance: rounds each class
// block independently (blocks share no rows). Line and tree systems go
// through the path rounder on the original geometry; everything else uses
// the size-grouping reduction with the greedy one-per-resource plug-in.
// Tasks whose reward went negative are dropped from the fractional point;
// every kept task still meets the per-task keep-probability bound, so the
// reward floor survives with the negative terms gone.
PackableRounder make_default_rounder(const SetSystem& sys, const ClassDecomposition& dec,
                                     int repetitions = 64);

// Builds the cost-budget instance over the disjoint union of the class
// blocks (sizes at each class's index, costs = exceptional means,
// theta = 2*alpha_bar*b adjusted for the coverage slack, psi = 2*alpha_bar),
// keeps tasks with y > 1/alpha_bar outright, scales the rest by alpha_bar,
// and rounds. alpha_bar >= 1; the selection-size check needs alpha_bar >= 4.
// A shortfall of the rounder's documented ratio is retried with a fresh
// seed up to 5 times; a persistent shortfall is reported, not thrown.
// Infeasibility of the scaled point, or a selection below target despite
// the ratio holding, throws InternalError: both mean an upstream bug.
Solution assemble_and_round(const ClassDecomposition& dec, const LpSolution& y,
                            const std::vector<SplitDistribution>& split,
                            const SetSystemInstance& sys, int target, double alpha_bar,
                            double b, const PackableRounder& rounder, std::uint64_t seed);

struct SolveOptions {
    double b = 4.0;
    double alpha_bar = 4.0;
    bool fast_k = false;
    int max_cuts = 500;
    int repetitions = 64;                 // path rounder repetitions
    std::int64_t samples = 10000;         // per-guess Monte Carlo samples
    std::int64_t final_samples = 100000;  // winner re-estimate
    int threads = 1;                      // concurrent scaling guesses
    std::uint64_t seed = 0;
};

// Outer driver: for each guess B of the doubling grid, scale the task
// distributions by 1/B, split, solve the relaxation (tasks with oversized
// exceptional mean drop out there), decompose, assemble, round, and
// estimate the expected makespan of the selection by Monte Carlo on the
// original distributions. Returns the guess with the smallest estimate
// (ties to the smaller B), re-estimated at final_samples. Guesses run
// concurrently when threads > 1; results do not depend on the thread count.
// Throws InfeasibleError if no guess yields a usable selection; a grid
// reaching past 2U cannot leave the relaxation infeasible when t <= n.
Solution solve_end_to_end(const SetSystem& sys, const std::vector<DiscreteDistribution>& tasks,
                          int target, const SolveOptions& opt = {});

} // namespace gms
