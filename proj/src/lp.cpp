#include "genmakespan/lp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>

#include "genmakespan/errors.hpp"
#include "genmakespan/simplex.hpp"

namespace gms {

GreedyCoverage greedy_max_coverage(const SetSystemInstance& sys, const std::vector<double>& weight,
                                   int k) {
    if (int(weight.size()) != sys.n_tasks)
        throw ArgumentError("greedy_max_coverage: weight size mismatch");
    if (k < 1 || k > sys.n_resources) throw ArgumentError("greedy_max_coverage: bad set size");
    std::vector<char> covered(sys.n_tasks, 0), used(sys.n_resources, 0);
    GreedyCoverage out;
    for (int round = 0; round < k; ++round) {
        int best = -1;
        double best_gain = -1.0;
        for (int i = 0; i < sys.n_resources; ++i) {
            if (used[i]) continue;
            double gain = 0.0;
            for (int j : sys.resource_tasks[i])
                if (!covered[j]) gain += weight[j];
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        used[best] = 1;
        out.resources.push_back(best);
        out.value += best_gain;
        for (int j : sys.resource_tasks[best]) covered[j] = 1;
    }
    std::sort(out.resources.begin(), out.resources.end());
    return out;
}

std::vector<std::int64_t> separation_sweep(int n_resources, bool fast_k) {
    std::set<std::int64_t> ks;
    if (!fast_k) {
        for (int k = 1; k <= n_resources; ++k) ks.insert(k);
        return {ks.begin(), ks.end()};
    }
    const std::int64_t m2 = std::int64_t(n_resources) * n_resources;
    for (int l = 0;; ++l) {
        auto pow22 = [&](int e) {
            return e >= 62 ? m2 : std::min<std::int64_t>(std::int64_t(1) << e, m2);
        };
        std::int64_t v = pow22(1 << l);
        std::int64_t w = pow22(l + 1 <= 30 ? (1 << (l + 1)) : 62);
        if (v <= n_resources) ks.insert(v);
        if (w <= n_resources) ks.insert(w);
        if (v >= m2) break;
    }
    return {ks.begin(), ks.end()};
}

namespace {

struct Workspace {
    const SetSystemInstance& sys;
    const std::vector<SplitDistribution>& tasks;
    std::vector<int> vars;              // variable index -> task id
    std::vector<int> var_of;            // task id -> variable index or -1
    std::unordered_map<std::int64_t, std::vector<double>> betas;  // k -> per task

    const std::vector<double>& beta(std::int64_t k) {
        auto it = betas.find(k);
        if (it != betas.end()) return it->second;
        std::vector<double> row(sys.n_tasks, 0.0);
        for (int j = 0; j < sys.n_tasks; ++j) row[j] = effective_size(tasks[j].truncated, k);
        return betas.emplace(k, std::move(row)).first->second;
    }
};

LpProblem::Row cut_row(Workspace& ws, const CoverageCut& cut) {
    LpProblem::Row row;
    row.coeffs.assign(ws.vars.size(), 0.0);
    row.sense = LpProblem::Sense::kLe;
    const auto& beta = ws.beta(cut.k);
    std::vector<char> seen(ws.sys.n_tasks, 0);
    for (int i : cut.resources)
        for (int j : ws.sys.resource_tasks[i]) {
            if (seen[j]) continue;
            seen[j] = 1;
            if (ws.var_of[j] >= 0) row.coeffs[ws.var_of[j]] = beta[j];
        }
    return row;
}

// Finds group constraints the point violates: for each probed size, greedy
// max coverage under weights beta_k(X') * y; a coverage above b*k is a
// genuinely violated row. Returns all sizes' finds, worst first.
std::vector<CoverageCut> find_cuts(Workspace& ws, const std::vector<double>& y_by_task,
                                   const std::vector<std::int64_t>& sweep, double b, double tol,
                                   const std::set<std::pair<std::int64_t, std::vector<int>>>& have) {
    std::vector<CoverageCut> found;
    for (std::int64_t k : sweep) {
        const auto& beta = ws.beta(k);
        std::vector<double> w(ws.sys.n_tasks, 0.0);
        double total = 0.0;
        for (int j = 0; j < ws.sys.n_tasks; ++j) {
            w[j] = beta[j] * y_by_task[j];
            total += w[j];
        }
        if (total <= b * double(k) + tol) continue;  // no group of this size can overflow
        GreedyCoverage g = greedy_max_coverage(ws.sys, w, int(k));
        if (g.value <= b * double(k) + tol) continue;
        if (have.count({k, g.resources})) continue;
        found.push_back({k, g.resources, g.value});
    }
    std::sort(found.begin(), found.end(),
              [](const CoverageCut& a, const CoverageCut& c) { return a.value > c.value; });
    return found;
}

} // namespace

LpSolution solve_relaxation(const SetSystemInstance& sys, const std::vector<SplitDistribution>& tasks,
                            int target, const LpOptions& opt) {
    if (int(tasks.size()) != sys.n_tasks) throw ArgumentError("solve_relaxation: task count mismatch");
    if (target < 1) throw ArgumentError("solve_relaxation: target must be positive");
    if (!(opt.b > 0.0)) throw ArgumentError("solve_relaxation: budget must be positive");

    LpSolution sol;
    sol.y.assign(sys.n_tasks, 0.0);

    Workspace ws{sys, tasks, {}, std::vector<int>(sys.n_tasks, -1), {}};
    for (int j = 0; j < sys.n_tasks; ++j) {
        // A task whose exceptional mass alone exceeds the whole exceptional
        // budget can never be selected.
        if (tasks[j].exceptional_mean > 2.0) {
            sol.dropped.push_back(j);
            continue;
        }
        ws.var_of[j] = int(ws.vars.size());
        ws.vars.push_back(j);
    }
    const int nv = int(ws.vars.size());
    const std::vector<std::int64_t> sweep = separation_sweep(sys.n_resources, opt.fast_k);

    LpProblem base;
    base.num_vars = nv;
    for (int v = 0; v < nv; ++v) {
        LpProblem::Row ub;
        ub.coeffs.assign(nv, 0.0);
        ub.coeffs[v] = 1.0;
        ub.sense = LpProblem::Sense::kLe;
        ub.rhs = 1.0;
        base.rows.push_back(std::move(ub));
    }
    LpProblem::Row exc;
    exc.coeffs.assign(nv, 0.0);
    for (int v = 0; v < nv; ++v) exc.coeffs[v] = tasks[ws.vars[v]].exceptional_mean;
    exc.sense = LpProblem::Sense::kLe;
    exc.rhs = 2.0;
    base.rows.push_back(std::move(exc));

    DenseSimplex solver;
    std::set<std::pair<std::int64_t, std::vector<int>>> have;
    auto spread = [&](const std::vector<double>& x) {
        std::vector<double> by_task(sys.n_tasks, 0.0);
        for (int v = 0; v < nv; ++v) by_task[ws.vars[v]] = x[v];
        return by_task;
    };
    auto add_cuts = [&](const std::vector<CoverageCut>& found, LpProblem& prob) {
        for (const auto& cut : found) {
            if (int(sol.cuts.size()) >= opt.max_cuts)
                throw ResourceLimitError("solve_relaxation: cut budget exhausted after " +
                                         std::to_string(sol.cuts.size()) + " rows");
            prob.rows.push_back(cut_row(ws, cut));
            prob.rows.back().rhs = opt.b * double(cut.k);
            have.insert({cut.k, cut.resources});
            sol.cuts.push_back(cut);
        }
    };

    // Feasibility pass: push total selection as high as the cuts allow.
    LpProblem cover = base;
    cover.objective.assign(nv, 1.0);
    for (;;) {
        LpResult res = solver.solve(cover);
        ++sol.lp_solves;
        if (res.status != LpStatus::kOptimal) throw InternalError("solve_relaxation: cover pass failed");
        sol.cover_value = res.objective_value;
        if (res.objective_value < double(target) - opt.tol) {
            sol.feasible = false;
            return sol;
        }
        auto found = find_cuts(ws, spread(res.x), sweep, opt.b, opt.tol, have);
        if (found.empty()) break;
        add_cuts(found, cover);
    }

    // Lean pass: same region plus the target row, minimal total mean mass.
    LpProblem lean = base;
    lean.rows.assign(cover.rows.begin(), cover.rows.end());
    lean.objective.assign(nv, 0.0);
    for (int v = 0; v < nv; ++v) {
        const auto& t = tasks[ws.vars[v]];
        lean.objective[v] = -(t.truncated.mean() + t.exceptional_mean);
    }
    LpProblem::Row cover_row;
    cover_row.coeffs.assign(nv, 1.0);
    cover_row.sense = LpProblem::Sense::kGe;
    cover_row.rhs = double(target) - opt.tol;
    lean.rows.push_back(std::move(cover_row));
    for (;;) {
        LpResult res = solver.solve(lean);
        ++sol.lp_solves;
        if (res.status == LpStatus::kInfeasible) {
            sol.feasible = false;
            return sol;
        }
        if (res.status != LpStatus::kOptimal) throw InternalError("solve_relaxation: lean pass failed");
        auto found = find_cuts(ws, spread(res.x), sweep, opt.b, opt.tol, have);
        if (found.empty()) {
            sol.feasible = true;
            sol.lean_value = -res.objective_value;
            sol.y = spread(res.x);
            for (double& v : sol.y) v = std::clamp(v, 0.0, 1.0);
            return sol;
        }
        add_cuts(found, lean);
    }
}

} // namespace gms
