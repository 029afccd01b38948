#include "genmakespan/rounding.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "genmakespan/errors.hpp"
#include "genmakespan/rng.hpp"

namespace gms {

namespace {

// Tolerance when recomputing sums that upstream stages certified, and an
// absolute pad on the assembled capacity: the relaxation's separation
// tolerance survives scaling by alpha_bar, so the packing validator needs
// headroom beyond the exact product.
constexpr double kCheckTol = 1e-7;
constexpr double kBudgetPad = 1e-6;

// 2^(2^level), saturating. Level 6 would need 2^64.
std::int64_t pow22(int level) {
    if (level >= 6) return std::numeric_limits<std::int64_t>::max();
    return std::int64_t{1} << (std::int64_t{1} << level);
}

RoundedSet greedy_plugin(const PackingInstance& inst, const std::vector<double>& y,
                         std::uint64_t) {
    return greedy_independent_set(inst, y);
}

} // namespace

int decomposition_depth(int n_resources) {
    if (n_resources < 1) throw ArgumentError("decomposition_depth: no resources");
    if (n_resources == 1) return 0;
    int s = 0;
    while (pow22(s) < n_resources) ++s;
    return 1 + s;
}

std::int64_t class_size_index(int level, int n_resources) {
    if (level < 0) throw ArgumentError("class_size_index: negative level");
    if (n_resources < 1) throw ArgumentError("class_size_index: no resources");
    const std::int64_t cap = std::int64_t(n_resources) * std::int64_t(n_resources);
    return std::min(pow22(level), cap);
}

double class_load_budget(int level, double b) {
    if (level < 0) throw ArgumentError("class_load_budget: negative level");
    if (!(b > 0.0)) throw ArgumentError("class_load_budget: budget must be positive");
    return (level == 0 ? kCoverSlack : 1.0) * 2.0 * b;
}

ClassDecomposition decompose(const LpSolution& y, const SetSystem& sys,
                             const std::vector<SplitDistribution>& split, double b) {
    const SetSystemInstance& inst = sys.instance();
    const int n = inst.n_tasks;
    const int m = inst.n_resources;
    if (int(split.size()) != n) throw ArgumentError("decompose: split count mismatch");
    if (int(y.y.size()) != n) throw ArgumentError("decompose: point size mismatch");
    if (!(b > 0.0)) throw ArgumentError("decompose: budget must be positive");

    const int rho = decomposition_depth(m);
    std::vector<std::vector<double>> beta(rho + 1, std::vector<double>(n, 0.0));
    for (int l = 0; l <= rho; ++l) {
        const std::int64_t k = class_size_index(l, m);
        for (int j = 0; j < n; ++j) beta[l][j] = effective_size(split[j].truncated, k);
    }

    ClassDecomposition dec;
    dec.rho = rho;
    std::vector<char> left(n, 1);
    for (int l = 0; l < rho; ++l) {
        LoadClass cls;
        cls.k = class_size_index(l, m);
        // Round l removes at the next class's size index, so the loads it
        // leaves behind are exactly the loads class l+1 is charged at.
        const std::vector<double>& w = beta[l + 1];
        // Removals only shrink loads, so one ascending sweep meets every
        // resource that can ever exceed the budget in this round.
        for (int i = 0; i < m; ++i) {
            double load = 0.0;
            for (int j : inst.resource_tasks[i])
                if (left[j]) load += w[j] * y.y[j];
            if (load > 2.0 * b) {
                std::vector<int> cap;
                for (int j : inst.resource_tasks[i]) {
                    if (left[j]) {
                        cap.push_back(j);
                        left[j] = 0;
                    }
                }
                cls.dangerous.push_back(i);
                cls.captured.push_back(std::move(cap));
            }
        }
        for (const auto& cap : cls.captured)
            cls.tasks.insert(cls.tasks.end(), cap.begin(), cap.end());
        std::sort(cls.tasks.begin(), cls.tasks.end());
        if (!cls.dangerous.empty()) cls.marked = sys.extend(cls.dangerous).marked;
        dec.classes.push_back(std::move(cls));
    }

    LoadClass last;
    last.k = class_size_index(rho, m);
    for (int j = 0; j < n; ++j)
        if (left[j]) last.tasks.push_back(j);
    std::vector<char> taken(m, 0);
    for (const LoadClass& cls : dec.classes)
        for (int i : cls.dangerous) taken[i] = 1;
    for (int i = 0; i < m; ++i) {
        if (!taken[i]) {
            last.dangerous.push_back(i);
            last.marked.push_back(i);
        }
    }
    dec.classes.push_back(std::move(last));

    // The decomposition only makes sense for a feasible point, so failures
    // below point at the caller, not at this routine.
    std::vector<char> seen(n, 0);
    for (const LoadClass& cls : dec.classes) {
        for (int j : cls.tasks) {
            if (j < 0 || j >= n || seen[j])
                throw InternalError("decompose: classes do not partition the tasks");
            seen[j] = 1;
        }
    }
    for (int j = 0; j < n; ++j)
        if (!seen[j]) throw InternalError("decompose: classes do not partition the tasks");
    for (int l = 0; l <= rho; ++l) {
        if (std::int64_t(dec.classes[l].dangerous.size()) > pow22(l + 1))
            throw InternalError("decompose: dangerous set of class " + std::to_string(l) +
                                " exceeds its bound");
    }

    double worst = 0.0;
    std::vector<char> in_class(n, 0);
    for (int l = 0; l <= rho; ++l) {
        const LoadClass& cls = dec.classes[l];
        for (int j : cls.tasks) in_class[j] = 1;
        const double budget = class_load_budget(l, b);
        // Level 0 is certified through the pair rows, which carry the
        // coverage slack and the separation tolerance; later levels are
        // exact removal residues.
        const double pad = (l == 0 ? kCoverSlack * kCheckTol : 0.0) + kCheckTol;
        for (int i = 0; i < m; ++i) {
            double load = 0.0;
            for (int j : inst.resource_tasks[i])
                if (in_class[j]) load += beta[l][j] * y.y[j];
            if (load > budget + pad)
                throw InternalError("decompose: class " + std::to_string(l) + " load " +
                                    std::to_string(load) + " at resource " + std::to_string(i) +
                                    " exceeds budget " + std::to_string(budget) +
                                    "; the point was not feasible");
            worst = std::max(worst, load / budget);
        }
        for (int j : cls.tasks) in_class[j] = 0;
    }
    dec.worst_load_ratio = worst;
    return dec;
}

namespace {

struct BlockContext {
    bool path_family = false;
    int repetitions = 64;
    int total = 0;
    std::vector<int> offset;               // per class, first union task id
    std::vector<SetSystemInstance> block;  // class tasks over the full resource set
    std::vector<TreeGeometry> tree;        // per class, path-based families only
};

} // namespace

PackableRounder make_default_rounder(const SetSystem& sys, const ClassDecomposition& dec,
                                     int repetitions) {
    if (repetitions < 1) throw ArgumentError("make_default_rounder: repetitions must be positive");
    if (dec.classes.empty()) throw ArgumentError("make_default_rounder: empty decomposition");
    auto ctx = std::make_shared<BlockContext>();
    ctx->path_family = sys.kind() == FamilyKind::kLine || sys.kind() == FamilyKind::kTree;
    ctx->repetitions = repetitions;
    for (const LoadClass& cls : dec.classes) {
        ctx->offset.push_back(ctx->total);
        ctx->total += int(cls.tasks.size());
        ctx->block.push_back(restrict_tasks(sys.instance(), cls.tasks).instance);
        if (!ctx->path_family) continue;
        if (sys.kind() == FamilyKind::kLine) {
            const auto& line = std::get<LineGeometry>(sys.family());
            LineGeometry sub;
            sub.num_points = line.num_points;
            for (int g : cls.tasks) sub.intervals.push_back(line.intervals[g]);
            ctx->tree.push_back(line_as_path_tree(sub));
        } else {
            const auto& full = std::get<TreeGeometry>(sys.family());
            TreeGeometry sub;
            sub.num_vertices = full.num_vertices;
            sub.edges = full.edges;
            for (int g : cls.tasks) sub.paths.push_back(full.paths[g]);
            ctx->tree.push_back(std::move(sub));
        }
    }
    return [ctx](const PackingInstance& inst, const std::vector<double>& z,
                 std::uint64_t seed) -> RoundedSet {
        if (int(inst.sizes.size()) != ctx->total || z.size() != inst.sizes.size())
            throw ArgumentError("default rounder: instance does not match the decomposition");
        RoundedSet out;
        for (std::size_t l = 0; l < ctx->block.size(); ++l) {
            const int nb = ctx->block[l].n_tasks;
            if (nb == 0) continue;
            const int off = ctx->offset[l];
            PackingInstance part;
            part.sys = ctx->block[l];
            part.theta = inst.theta;
            part.sizes.assign(inst.sizes.begin() + off, inst.sizes.begin() + off + nb);
            part.rewards.assign(inst.rewards.begin() + off, inst.rewards.begin() + off + nb);
            std::vector<double> zp(nb, 0.0);
            bool any = false;
            for (int a = 0; a < nb; ++a) {
                // Negative-reward tasks are dropped from the point up front;
                // see the factory note in the header.
                if (part.rewards[a] < 0.0 || z[off + a] <= 0.0) continue;
                zp[a] = z[off + a];
                any = true;
            }
            if (!any) continue;
            const std::uint64_t bs = Rng::mix(seed, std::uint64_t(l));
            RoundedSet got = ctx->path_family
                                 ? round_tree_ufp(part, zp, ctx->tree[l], ctx->repetitions, bs)
                                 : round_appendix_b(part, zp, greedy_plugin, bs);
            out.capacity_ok = out.capacity_ok && got.capacity_ok;
            for (int a : got.chosen) {
                out.chosen.push_back(off + a);
                out.achieved_reward += part.rewards[a];
            }
        }
        return out;
    };
}

Solution assemble_and_round(const ClassDecomposition& dec, const LpSolution& y,
                            const std::vector<SplitDistribution>& split,
                            const SetSystemInstance& sys, int target, double alpha_bar,
                            double b, const PackableRounder& rounder, std::uint64_t seed) {
    const int n = sys.n_tasks;
    if (int(split.size()) != n || int(y.y.size()) != n)
        throw ArgumentError("assemble_and_round: size mismatch");
    if (!(alpha_bar >= 1.0)) throw ArgumentError("assemble_and_round: alpha_bar below 1");
    if (!(b > 0.0)) throw ArgumentError("assemble_and_round: budget must be positive");
    if (target < 0 || target > n) throw ArgumentError("assemble_and_round: bad target");
    if (dec.classes.empty() || int(dec.classes.size()) != dec.rho + 1)
        throw ArgumentError("assemble_and_round: malformed decomposition");
    if (!rounder) throw ArgumentError("assemble_and_round: missing rounder");

    const double theta = 2.0 * alpha_bar * b * kCoverSlack + kBudgetPad;
    const double psi = 2.0 * alpha_bar;

    Solution sol;
    sol.decomposition = dec;
    sol.target = target;
    sol.b = b;
    sol.alpha_bar = alpha_bar;
    sol.report.partition_ok = true;  // decompose() already enforced these three
    sol.report.dangerous_bound_ok = true;
    sol.report.fractional_ok = true;
    sol.report.fractional_ratio = dec.worst_load_ratio;

    std::vector<char> is_high(n, 0);
    for (int j = 0; j < n; ++j) {
        if (y.y[j] > 1.0 / alpha_bar) {  // strictly above: at alpha_bar = 1 nothing qualifies
            is_high[j] = 1;
            sol.high.push_back(j);
        }
    }

    // Disjoint union of the class blocks, each restricted to its marked rows.
    std::vector<SetSystemInstance> parts;
    std::vector<int> to_global;
    std::vector<int> to_union(n, -1);
    std::vector<double> sizes, costs, ybar;
    std::vector<int> pos(n, -1);
    for (const LoadClass& cls : dec.classes) {
        const int nb = int(cls.tasks.size());
        for (int a = 0; a < nb; ++a) pos[cls.tasks[a]] = a;
        std::vector<std::vector<int>> rows;
        rows.reserve(cls.marked.size());
        for (int i : cls.marked) {
            std::vector<int> row;
            for (int j : sys.resource_tasks[i])
                if (pos[j] >= 0) row.push_back(pos[j]);
            rows.push_back(std::move(row));
        }
        parts.push_back(SetSystemInstance::from_resource_tasks(nb, std::move(rows)));
        for (int a = 0; a < nb; ++a) {
            const int g = cls.tasks[a];
            to_union[g] = int(to_global.size());
            to_global.push_back(g);
            sizes.push_back(effective_size(split[g].truncated, cls.k));
            costs.push_back(split[g].exceptional_mean);
            double w = is_high[g] ? 0.0 : std::min(1.0, std::max(0.0, alpha_bar * y.y[g]));
            // A task larger than the whole capacity can never be packed, so
            // it leaves the support here. Truncated sizes stay below 1, so
            // this only fires when theta < 1, far under the default budgets.
            if (sizes.back() > theta) w = 0.0;
            ybar.push_back(w);
        }
        for (int a = 0; a < nb; ++a) pos[cls.tasks[a]] = -1;
    }
    DisjointUnionResult uni = disjoint_union(parts);
    if (uni.instance.n_tasks != int(to_global.size()))
        throw InternalError("assemble_and_round: union size mismatch");

    double worst_row = 0.0;
    for (const auto& row : uni.instance.resource_tasks) {
        double load = 0.0;
        for (int u : row) load += sizes[u] * ybar[u];
        worst_row = std::max(worst_row, load);
    }
    if (worst_row > theta + kCheckTol)
        throw InternalError("assemble_and_round: scaled point loads a row with " +
                            std::to_string(worst_row) + " against capacity " +
                            std::to_string(theta) + "; an upstream budget failed");
    double cost_mass = 0.0;
    for (std::size_t u = 0; u < costs.size(); ++u) cost_mass += costs[u] * ybar[u];
    if (cost_mass > psi + kCheckTol)
        throw InternalError("assemble_and_round: scaled point exceeds the cost budget");
    sol.report.assembled_ok = true;
    sol.report.assembled_ratio = worst_row / theta;

    DetCostInstance cost_inst;
    cost_inst.sys = uni.instance;
    cost_inst.sizes = sizes;
    cost_inst.costs = costs;
    cost_inst.theta = theta;
    cost_inst.psi = psi;

    // A ratio shortfall is the only retry trigger; retries only help
    // randomized plug-ins, deterministic ones repeat themselves.
    RoundedSet best;
    bool have = false;
    int attempts = 0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        ++attempts;
        RoundedSet got = solve_detcost(cost_inst, ybar, rounder, alpha_bar,
                                       Rng::mix(seed, std::uint64_t(attempt)));
        const bool met = got.reward_met;
        const bool better = !have || (met && !best.reward_met) ||
                            (met == best.reward_met && got.chosen.size() > best.chosen.size());
        if (better) {
            best = std::move(got);
            have = true;
        }
        if (met) break;
    }
    sol.report.reward_met = best.reward_met;
    sol.report.attempts = attempts;
    sol.report.branch = best.branch;

    for (int u : best.chosen) sol.low.push_back(to_global[u]);
    std::sort(sol.low.begin(), sol.low.end());
    sol.chosen = sol.high;
    sol.chosen.insert(sol.chosen.end(), sol.low.begin(), sol.low.end());
    std::sort(sol.chosen.begin(), sol.chosen.end());
    for (std::size_t i = 1; i < sol.chosen.size(); ++i) {
        if (sol.chosen[i] == sol.chosen[i - 1])
            throw InternalError("assemble_and_round: rounded set left the scaled support");
    }
    sol.report.selection_ok = int(sol.chosen.size()) >= target;
    if (!sol.report.selection_ok && best.reward_met && alpha_bar >= 4.0 - 1e-12)
        throw InternalError("assemble_and_round: reward ratio held yet the selection has " +
                            std::to_string(sol.chosen.size()) + " tasks, below target " +
                            std::to_string(target));

    std::vector<char> picked(to_global.size(), 0);
    for (int g : sol.chosen) picked[to_union[g]] = 1;
    double worst_sel = 0.0;
    for (const auto& row : uni.instance.resource_tasks) {
        double load = 0.0;
        for (int u : row)
            if (picked[u]) load += sizes[u];
        worst_sel = std::max(worst_sel, load);
    }
    if (worst_sel > 2.0 * theta + kCheckTol)
        throw InternalError("assemble_and_round: selected class load " + std::to_string(worst_sel) +
                            " exceeds twice the capacity");
    sol.report.chosen_load_ok = true;
    sol.report.chosen_load_ratio = worst_sel / (2.0 * theta);

    double exceptional = 0.0;
    for (int g : sol.chosen) exceptional += split[g].exceptional_mean;
    if (exceptional > 2.0 * psi + kCheckTol)
        throw InternalError("assemble_and_round: selected exceptional mass " +
                            std::to_string(exceptional) + " exceeds twice the cost budget");
    sol.report.exceptional_ok = true;
    sol.report.exceptional_total = exceptional;
    return sol;
}

Solution solve_end_to_end(const SetSystem& sys, const std::vector<DiscreteDistribution>& tasks,
                          int target, const SolveOptions& opt) {
    const SetSystemInstance& inst = sys.instance();
    const int n = inst.n_tasks;
    if (int(tasks.size()) != n) throw ArgumentError("solve_end_to_end: task count mismatch");
    if (target < 1 || target > n) throw ArgumentError("solve_end_to_end: target out of range");
    if (!(opt.b > 0.0)) throw ArgumentError("solve_end_to_end: budget must be positive");
    if (!(opt.alpha_bar >= 1.0)) throw ArgumentError("solve_end_to_end: alpha_bar below 1");
    if (opt.samples < 1 || opt.final_samples < 1)
        throw ArgumentError("solve_end_to_end: sample counts must be positive");
    if (opt.repetitions < 1 || opt.threads < 1)
        throw ArgumentError("solve_end_to_end: repetitions and threads must be positive");

    double max_mean = 0.0;
    for (const auto& d : tasks) max_mean = std::max(max_mean, d.mean());
    if (max_mean == 0.0) {
        // Every task is identically zero; any selection has zero makespan,
        // so take the first `target` tasks outright.
        Solution sol;
        for (int j = 0; j < target; ++j) {
            sol.chosen.push_back(j);
            sol.high.push_back(j);
        }
        sol.target = target;
        sol.b = opt.b;
        sol.alpha_bar = opt.alpha_bar;
        sol.report.partition_ok = sol.report.dangerous_bound_ok = true;
        sol.report.fractional_ok = sol.report.assembled_ok = true;
        sol.report.chosen_load_ok = sol.report.exceptional_ok = true;
        sol.report.selection_ok = sol.report.reward_met = true;
        return sol;
    }

    const ScalingGrid grid = build_scaling_grid(tasks, n);
    const int count = int(grid.guesses.size());
    std::vector<GuessOutcome> outs(count);
    std::vector<Solution> cand(count);
    std::vector<char> usable(count, 0);

    auto run_guess = [&](int gi) {
        const double guess = grid.guesses[gi];
        outs[gi].guess = guess;
        std::vector<SplitDistribution> splits;
        splits.reserve(n);
        for (const auto& d : tasks) splits.push_back(split_at_one(scale(d, guess)));
        LpOptions lp_opt;
        lp_opt.b = opt.b;
        lp_opt.fast_k = opt.fast_k;
        lp_opt.max_cuts = opt.max_cuts;
        LpSolution rel = solve_relaxation(inst, splits, target, lp_opt);
        if (!rel.feasible) return;
        outs[gi].feasible = true;
        ClassDecomposition dec = decompose(rel, sys, splits, opt.b);
        PackableRounder rounder = make_default_rounder(sys, dec, opt.repetitions);
        Solution sol = assemble_and_round(dec, rel, splits, inst, target, opt.alpha_bar, opt.b,
                                          rounder, Rng::mix(opt.seed, std::uint64_t(3 * gi + 1)));
        sol.guess = guess;
        if (!sol.report.selection_ok) return;  // shortfall: guess recorded as unusable
        outs[gi].selection_ok = true;
        // Estimates always run against the original, unscaled distributions.
        McEstimate est = evaluate_mc(inst, tasks, sol.chosen, opt.samples,
                                     Rng::mix(opt.seed, std::uint64_t(3 * gi + 2)), 1);
        outs[gi].estimate = est.mean;
        cand[gi] = std::move(sol);
        usable[gi] = 1;
    };

    if (opt.threads == 1 || count == 1) {
        for (int gi = 0; gi < count; ++gi) run_guess(gi);
    } else {
        std::vector<std::exception_ptr> errors(count);
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (;;) {
                const int gi = next.fetch_add(1);
                if (gi >= count) return;
                try {
                    run_guess(gi);
                } catch (...) {
                    errors[gi] = std::current_exception();
                }
            }
        };
        const int n_threads = std::min(opt.threads, count);
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        // First failure in guess order, matching the sequential behavior.
        for (int gi = 0; gi < count; ++gi)
            if (errors[gi]) std::rethrow_exception(errors[gi]);
    }

    int win = -1;
    for (int gi = 0; gi < count; ++gi) {
        if (!usable[gi]) continue;
        if (win < 0 || outs[gi].estimate < outs[win].estimate) win = gi;
    }
    if (win < 0) {
        int feas = 0;
        for (const auto& o : outs) feas += o.feasible ? 1 : 0;
        throw InfeasibleError("solve_end_to_end: no scaling guess produced a selection (" +
                              std::to_string(feas) + " of " + std::to_string(count) +
                              " relaxations feasible; grid reached " +
                              std::to_string(grid.guesses.back()) + ")");
    }
    Solution sol = std::move(cand[win]);
    sol.grid = std::move(outs);
    sol.estimate = evaluate_mc(inst, tasks, sol.chosen, opt.final_samples,
                               Rng::mix(opt.seed, std::uint64_t(3 * count + 1)), opt.threads);
    return sol;
}

} // namespace gms
