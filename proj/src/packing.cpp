#include "genmakespan/packing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "genmakespan/errors.hpp"
#include "genmakespan/rng.hpp"
#include "genmakespan/tree_util.hpp"

namespace gms {

namespace {

constexpr double kFeasTol = 1e-7;

void validate_packing(const SetSystemInstance& sys, const std::vector<double>& sizes, double theta,
                      const std::vector<double>& y) {
    if (int(sizes.size()) != sys.n_tasks || int(y.size()) != sys.n_tasks)
        throw ArgumentError("packing: per-task vector size mismatch");
    for (int j = 0; j < sys.n_tasks; ++j) {
        const double s = sizes[j];
        if (!(s >= 0.0) || !std::isfinite(s)) throw ArgumentError("packing: sizes must be finite and >= 0");
        // Rounders never pick outside the support, so an oversize task is
        // only a contradiction while it carries fractional weight.
        if (y[j] > 0.0 && s > theta + kFeasTol)
            throw ArgumentError("packing: a single size exceeds the capacity");
    }
    for (double v : y)
        if (v < -kFeasTol || v > 1.0 + kFeasTol) throw ArgumentError("packing: fractional point out of [0,1]");
    for (const auto& list : sys.resource_tasks) {
        double load = 0.0;
        for (int j : list) load += sizes[j] * y[j];
        if (load > theta + kFeasTol) throw ArgumentError("packing: fractional point violates a capacity row");
    }
}

double reward_of(const std::vector<int>& chosen, const std::vector<double>& rewards) {
    double r = 0.0;
    for (int j : chosen) r += rewards[j];
    return r;
}

bool loads_within(const SetSystemInstance& sys, const std::vector<double>& sizes,
                  const std::vector<int>& chosen, double theta) {
    std::vector<char> in(sys.n_tasks, 0);
    for (int j : chosen) in[j] = 1;
    for (const auto& list : sys.resource_tasks) {
        double load = 0.0;
        for (int j : list)
            if (in[j]) load += sizes[j];
        if (load > theta) return false;
    }
    return true;
}

} // namespace

TreeGeometry line_as_path_tree(const LineGeometry& line) {
    TreeGeometry t;
    t.num_vertices = line.num_points;
    for (int v = 1; v < line.num_points; ++v) t.edges.push_back({v - 1, v});
    t.paths = line.intervals;
    return t;
}

RoundedSet round_tree_ufp(const PackingInstance& inst, const std::vector<double>& y,
                          const TreeGeometry& tree, int repetitions, std::uint64_t seed) {
    validate_packing(inst.sys, inst.sizes, inst.theta, y);
    if (repetitions < 1) throw ArgumentError("round_tree_ufp: needs at least one repetition");
    if (int(tree.paths.size()) != inst.sys.n_tasks)
        throw ArgumentError("round_tree_ufp: path count must match task count");
    TreeTopology topo(tree.num_vertices, tree.edges);

    // Topmost path vertex; everything a path does to capacity it already
    // does there, which is what makes depth order work.
    std::vector<int> order(inst.sys.n_tasks);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> top_depth(inst.sys.n_tasks);
    for (int j = 0; j < inst.sys.n_tasks; ++j)
        top_depth[j] = topo.depth(topo.lca(tree.paths[j].first, tree.paths[j].second));
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return top_depth[a] != top_depth[b] ? top_depth[a] < top_depth[b] : a < b;
    });

    RoundedSet best;
    bool have = false;
    for (int rep = 0; rep < repetitions; ++rep) {
        Rng rng(Rng::mix(seed, std::uint64_t(rep)));
        std::vector<double> load_small(tree.num_vertices, 0.0), load_large(tree.num_vertices, 0.0);
        std::vector<int> small, large;
        for (int j : order) {
            if (rng.next_double() >= y[j] / 4.0) continue;
            bool is_small = inst.sizes[j] <= inst.theta / 2.0;
            auto& load = is_small ? load_small : load_large;
            bool fits = true;
            for (int v : inst.sys.task_resources[j])
                if (load[v] + inst.sizes[j] > inst.theta) {
                    fits = false;
                    break;
                }
            if (!fits) continue;
            for (int v : inst.sys.task_resources[j]) load[v] += inst.sizes[j];
            (is_small ? small : large).push_back(j);
        }
        double rs = reward_of(small, inst.rewards), rl = reward_of(large, inst.rewards);
        RoundedSet cand;
        cand.chosen = rs >= rl ? small : large;
        std::sort(cand.chosen.begin(), cand.chosen.end());
        cand.achieved_reward = std::max(rs, rl);
        cand.capacity_ok = loads_within(inst.sys, inst.sizes, cand.chosen, inst.theta);
        if (!cand.capacity_ok) throw InternalError("round_tree_ufp: capacity recheck failed");
        if (!have || cand.achieved_reward > best.achieved_reward) {
            best = cand;
            have = true;
        }
    }
    return best;
}

RoundedSet greedy_independent_set(const PackingInstance& inst, const std::vector<double>& y) {
    if (int(y.size()) != inst.sys.n_tasks || int(inst.rewards.size()) != inst.sys.n_tasks)
        throw ArgumentError("greedy_independent_set: per-task vector size mismatch");
    std::vector<int> order;
    for (int j = 0; j < inst.sys.n_tasks; ++j)
        if (y[j] > 0.0) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double wa = inst.rewards[a] * y[a], wb = inst.rewards[b] * y[b];
        return wa != wb ? wa > wb : a < b;
    });
    std::vector<char> taken(inst.sys.n_resources, 0);
    RoundedSet out;
    for (int j : order) {
        bool free = true;
        for (int i : inst.sys.task_resources[j])
            if (taken[i]) {
                free = false;
                break;
            }
        if (!free) continue;
        for (int i : inst.sys.task_resources[j]) taken[i] = 1;
        out.chosen.push_back(j);
        out.achieved_reward += inst.rewards[j];
    }
    std::sort(out.chosen.begin(), out.chosen.end());
    return out;
}

RoundedSet round_appendix_b(const PackingInstance& inst, const std::vector<double>& y,
                            const PackableRounder& indep, std::uint64_t seed) {
    validate_packing(inst.sys, inst.sizes, inst.theta, y);
    if (!(inst.theta > 0.0)) throw ArgumentError("round_appendix_b: needs positive capacity");
    const int n = inst.sys.n_tasks, m = inst.sys.n_resources;
    const double tau = inst.theta / (2.0 * std::max(1.0, std::log2(double(m))));

    std::vector<std::vector<int>> groups(1);  // group 0 holds sizes below tau
    for (int j = 0; j < n; ++j) {
        if (y[j] <= 0.0) continue;
        int g = 0;
        if (inst.sizes[j] >= tau) {
            g = 1 + int(std::floor(std::log2(inst.sizes[j] / tau)));
            g = std::max(g, 1);
        }
        if (int(groups.size()) <= g) groups.resize(g + 1);
        groups[g].push_back(j);
    }

    RoundedSet best;
    bool have = false;
    auto consider = [&](RoundedSet cand) {
        std::sort(cand.chosen.begin(), cand.chosen.end());
        cand.achieved_reward = reward_of(cand.chosen, inst.rewards);
        cand.capacity_ok = loads_within(inst.sys, inst.sizes, cand.chosen, inst.theta);
        if (!cand.capacity_ok) throw InternalError("round_appendix_b: capacity recheck failed");
        if (!have || cand.achieved_reward > best.achieved_reward) {
            best = std::move(cand);
            have = true;
        }
    };

    if (!groups[0].empty()) {
        // Randomized rounding with alteration: flip coins at y/2, then evict
        // the largest task from the lowest violating resource until legal.
        Rng rng(Rng::mix(seed, 0));
        std::vector<char> in(n, 0);
        for (int j : groups[0])
            if (rng.next_double() < y[j] / 2.0) in[j] = 1;
        for (;;) {
            int victim = -1;
            for (int i = 0; i < m && victim < 0; ++i) {
                double load = 0.0;
                for (int j : inst.sys.resource_tasks[i])
                    if (in[j]) load += inst.sizes[j];
                if (load > inst.theta) {
                    for (int j : inst.sys.resource_tasks[i])
                        if (in[j] && (victim < 0 || inst.sizes[j] > inst.sizes[victim])) victim = j;
                }
            }
            if (victim < 0) break;
            in[victim] = 0;
        }
        RoundedSet cand;
        for (int j = 0; j < n; ++j)
            if (in[j]) cand.chosen.push_back(j);
        consider(std::move(cand));
    }

    for (int g = 1; g < int(groups.size()); ++g) {
        if (groups[g].empty()) continue;
        double smax = 0.0;
        for (int j : groups[g]) smax = std::max(smax, inst.sizes[j]);
        int sweeps = int(std::floor(inst.theta / smax));
        std::vector<double> z(n, 0.0);
        for (int j : groups[g]) z[j] = y[j] / 4.0;
        RoundedSet cand;
        for (int sweep = 0; sweep < sweeps; ++sweep) {
            RoundedSet part = indep(inst, z, Rng::mix(seed, std::uint64_t(g) * 1000 + 1 + sweep));
            if (part.chosen.empty()) break;
            for (int j : part.chosen) {
                z[j] = 0.0;
                cand.chosen.push_back(j);
            }
        }
        consider(std::move(cand));
    }
    if (!have) return {};
    return best;
}

RoundedSet solve_detcost(const DetCostInstance& inst, const std::vector<double>& y,
                         const PackableRounder& rounder, double alpha_bar, std::uint64_t seed) {
    validate_packing(inst.sys, inst.sizes, inst.theta, y);
    if (int(inst.costs.size()) != inst.sys.n_tasks) throw ArgumentError("solve_detcost: cost vector size mismatch");
    if (!(alpha_bar > 0.0)) throw ArgumentError("solve_detcost: alpha_bar must be positive");
    double cost_frac = 0.0;
    for (int j = 0; j < inst.sys.n_tasks; ++j) {
        if (!(inst.costs[j] >= 0.0) || inst.costs[j] > inst.psi + kFeasTol)
            throw ArgumentError("solve_detcost: costs must sit in [0, psi]");
        cost_frac += inst.costs[j] * y[j];
    }
    if (cost_frac > inst.psi + kFeasTol) throw ArgumentError("solve_detcost: fractional point busts the cost budget");

    const double total = std::accumulate(y.begin(), y.end(), 0.0);
    PackingInstance packed;
    packed.sys = inst.sys;
    packed.sizes = inst.sizes;
    packed.theta = inst.theta;
    packed.rewards.resize(inst.sys.n_tasks);
    for (int j = 0; j < inst.sys.n_tasks; ++j)
        packed.rewards[j] =
            inst.costs[j] == 0.0 ? 1.0 : 1.0 - total / (2.0 * inst.psi) * inst.costs[j];

    RoundedSet rounded = rounder(packed, y, seed);
    std::sort(rounded.chosen.begin(), rounded.chosen.end());
    double reward = reward_of(rounded.chosen, packed.rewards);
    bool met = reward >= total / alpha_bar - 1e-9;

    double cost = 0.0;
    for (int j : rounded.chosen) cost += inst.costs[j];
    if (cost <= inst.psi) {
        RoundedSet out;
        out.chosen = rounded.chosen;
        out.achieved_reward = reward;
        out.capacity_ok = loads_within(inst.sys, inst.sizes, out.chosen, inst.theta);
        out.cost_ok = true;
        out.reward_met = met;
        out.branch = 1;
        return out;
    }

    // Make the cost budget hold by sacrificing cardinality: merge singleton
    // parts while a pair fits the budget, keep the biggest part.
    std::vector<std::vector<int>> parts;
    std::vector<double> part_cost;
    for (int j : rounded.chosen) {
        parts.push_back({j});
        part_cost.push_back(inst.costs[j]);
    }
    for (bool merged = true; merged;) {
        merged = false;
        for (size_t a = 0; a < parts.size() && !merged; ++a)
            for (size_t b = a + 1; b < parts.size() && !merged; ++b)
                if (part_cost[a] + part_cost[b] <= inst.psi) {
                    parts[a].insert(parts[a].end(), parts[b].begin(), parts[b].end());
                    part_cost[a] += part_cost[b];
                    parts.erase(parts.begin() + b);
                    part_cost.erase(part_cost.begin() + b);
                    merged = true;
                }
    }
    size_t pick = 0;
    for (size_t a = 1; a < parts.size(); ++a)
        if (parts[a].size() > parts[pick].size()) pick = a;

    RoundedSet out;
    out.chosen = parts[pick];
    std::sort(out.chosen.begin(), out.chosen.end());
    out.achieved_reward = reward_of(out.chosen, packed.rewards);
    out.capacity_ok = loads_within(inst.sys, inst.sizes, out.chosen, inst.theta);
    out.cost_ok = part_cost[pick] <= inst.psi;
    out.reward_met = met;
    out.branch = 2;
    if (!out.capacity_ok || !out.cost_ok) throw InternalError("solve_detcost: merged part failed rechecks");
    return out;
}

} // namespace gms
