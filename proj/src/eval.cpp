#include "genmakespan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "genmakespan/errors.hpp"
#include "genmakespan/lp.hpp"
#include "genmakespan/rng.hpp"

namespace gms {

namespace {

void validate_selection(const SetSystemInstance& sys, const std::vector<DiscreteDistribution>& dists,
                        const std::vector<int>& selection) {
    if (int(dists.size()) != sys.n_tasks) throw ArgumentError("evaluate: distribution count mismatch");
    for (size_t a = 0; a < selection.size(); ++a) {
        if (selection[a] < 0 || selection[a] >= sys.n_tasks)
            throw ArgumentError("evaluate: task id out of range");
        if (a > 0 && selection[a] <= selection[a - 1])
            throw ArgumentError("evaluate: selection must be sorted unique");
    }
}

std::vector<int> touched_resources(const SetSystemInstance& sys, const std::vector<int>& selection) {
    std::vector<int> touched;
    for (int j : selection)
        for (int i : sys.task_resources[j]) touched.push_back(i);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    return touched;
}

} // namespace

double evaluate_exact(const SetSystemInstance& sys, const std::vector<DiscreteDistribution>& dists,
                      const std::vector<int>& selection) {
    validate_selection(sys, dists, selection);
    if (selection.empty()) return 0.0;
    double outcomes = 1.0;
    for (int j : selection) outcomes *= dists[j].support_size();
    if (outcomes > 1e6) throw ResourceLimitError("evaluate_exact: joint support too large");

    std::vector<int> touched = touched_resources(sys, selection);
    std::vector<double> load(sys.n_resources, 0.0);
    double acc = 0.0;
    // Depth-first product walk, maintaining loads incrementally.
    std::vector<int> pick(selection.size(), 0);
    size_t depth = 0;
    double prob = 1.0;
    for (;;) {
        if (depth == selection.size()) {
            double worst = 0.0;
            for (int i : touched) worst = std::max(worst, load[i]);
            acc += prob * worst;
            // Backtrack to the deepest level with an unused atom.
            while (depth > 0) {
                --depth;
                int j = selection[depth];
                const auto& atom = dists[j].atoms()[pick[depth]];
                prob /= atom.prob;
                for (int i : sys.task_resources[j]) load[i] -= atom.value;
                if (++pick[depth] < dists[j].support_size()) break;
                pick[depth] = 0;
            }
            if (depth == 0 && pick[0] == 0) return acc;
        }
        int j = selection[depth];
        const auto& atom = dists[j].atoms()[pick[depth]];
        prob *= atom.prob;
        for (int i : sys.task_resources[j]) load[i] += atom.value;
        ++depth;
    }
}

McEstimate evaluate_mc(const SetSystemInstance& sys, const std::vector<DiscreteDistribution>& dists,
                       const std::vector<int>& selection, std::int64_t samples, std::uint64_t seed,
                       int threads) {
    validate_selection(sys, dists, selection);
    if (samples < 1) throw ArgumentError("evaluate_mc: needs at least one sample");
    if (threads < 1) throw ArgumentError("evaluate_mc: needs at least one thread");

    constexpr std::int64_t kChunk = 4096;
    const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> sum(chunks, 0.0), sum_sq(chunks, 0.0);

    auto run_chunk = [&](std::int64_t c) {
        Rng rng(Rng::mix(seed, std::uint64_t(c)));
        std::vector<double> load(sys.n_resources, 0.0);
        const std::int64_t count = std::min(kChunk, samples - c * kChunk);
        double s = 0.0, s2 = 0.0;
        for (std::int64_t it = 0; it < count; ++it) {
            double worst = 0.0;
            for (int j : selection) {
                double v = dists[j].sample(rng);
                if (v == 0.0) continue;
                for (int i : sys.task_resources[j]) {
                    load[i] += v;
                    worst = std::max(worst, load[i]);
                }
            }
            for (int j : selection)
                for (int i : sys.task_resources[j]) load[i] = 0.0;
            s += worst;
            s2 += worst * worst;
        }
        sum[c] = s;
        sum_sq[c] = s2;
    };

    if (threads == 1 || chunks == 1) {
        for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        const int workers = int(std::min<std::int64_t>(threads, chunks));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::int64_t c = w; c < chunks; c += workers) run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    double total = 0.0, total_sq = 0.0;
    for (std::int64_t c = 0; c < chunks; ++c) {
        total += sum[c];
        total_sq += sum_sq[c];
    }
    McEstimate est;
    est.samples = samples;
    est.mean = total / double(samples);
    if (samples > 1) {
        double var = (total_sq - total * total / double(samples)) / double(samples - 1);
        est.std_error = std::sqrt(std::max(var, 0.0) / double(samples));
    }
    return est;
}

BruteForceResult brute_force_opt(const SetSystemInstance& sys,
                                 const std::vector<DiscreteDistribution>& dists, int target) {
    if (int(dists.size()) != sys.n_tasks) throw ArgumentError("brute_force_opt: distribution count mismatch");
    if (target < 1 || target > sys.n_tasks) throw ArgumentError("brute_force_opt: bad target");
    double subsets = 1.0;
    for (int a = 0; a < target; ++a) subsets = subsets * (sys.n_tasks - a) / (a + 1);
    if (subsets > 1e5) throw ResourceLimitError("brute_force_opt: too many selections");

    BruteForceResult best;
    std::vector<int> pick(target);
    for (int a = 0; a < target; ++a) pick[a] = a;
    bool first = true;
    for (;;) {
        double v = evaluate_exact(sys, dists, pick);
        if (first || v < best.value) {
            best.value = v;
            best.selection = pick;
            first = false;
        }
        // Next combination in lexicographic order.
        int a = target - 1;
        while (a >= 0 && pick[a] == sys.n_tasks - target + a) --a;
        if (a < 0) break;
        ++pick[a];
        for (int c = a + 1; c < target; ++c) pick[c] = pick[c - 1] + 1;
    }
    return best;
}

std::vector<std::pair<int, int>> check_lambda_safe(const SetSystemInstance& sys,
                                                   const std::vector<int>& dangerous,
                                                   const ExtendResult& ext) {
    if (int(ext.cover.size()) != sys.n_resources)
        throw ArgumentError("check_lambda_safe: cover count mismatch");
    std::vector<char> in_danger(sys.n_tasks, 0);
    for (int r : dangerous) {
        if (r < 0 || r >= sys.n_resources) throw ArgumentError("check_lambda_safe: resource out of range");
        for (int j : sys.resource_tasks[r]) in_danger[j] = 1;
    }
    std::vector<std::pair<int, int>> bad;
    std::vector<char> covered(sys.n_tasks, 0);
    for (int i = 0; i < sys.n_resources; ++i) {
        std::vector<int> marks;
        for (int r : ext.cover[i])
            for (int j : sys.resource_tasks[r])
                if (!covered[j]) {
                    covered[j] = 1;
                    marks.push_back(j);
                }
        for (int j : sys.resource_tasks[i])
            if (in_danger[j] && !covered[j]) bad.push_back({i, j});
        for (int j : marks) covered[j] = 0;
    }
    return bad;
}

LpPointCheck check_lp_constraints(const SetSystemInstance& sys,
                                  const std::vector<SplitDistribution>& tasks,
                                  const std::vector<double>& y, double b, double slack,
                                  std::uint64_t seed, double tol) {
    if (int(tasks.size()) != sys.n_tasks || int(y.size()) != sys.n_tasks)
        throw ArgumentError("check_lp_constraints: size mismatch");
    LpPointCheck rep;
    double exc = 0.0;
    for (int j = 0; j < sys.n_tasks; ++j) {
        if (y[j] < -tol || y[j] > 1.0 + tol) rep.bounds_ok = false;
        exc += y[j] * tasks[j].exceptional_mean;
    }
    if (exc > 2.0 + tol) rep.exceptional_ok = false;

    rep.exhaustive = sys.n_resources <= 12;
    auto probe = [&](std::int64_t k, const std::vector<int>& group, const std::vector<double>& beta) {
        std::vector<char> seen(sys.n_tasks, 0);
        double loadv = 0.0;
        for (int i : group)
            for (int j : sys.resource_tasks[i])
                if (!seen[j]) {
                    seen[j] = 1;
                    loadv += beta[j] * y[j];
                }
        double excess = loadv - slack * b * double(k);
        if (excess > rep.worst_group_excess) {
            rep.worst_group_excess = excess;
            rep.worst_k = k;
            rep.worst_group = group;
        }
        if (excess > tol) rep.groups_ok = false;
    };
    for (int k = 1; k <= sys.n_resources; ++k) {
        std::vector<double> beta(sys.n_tasks);
        for (int j = 0; j < sys.n_tasks; ++j) beta[j] = effective_size(tasks[j].truncated, k);
        if (rep.exhaustive) {
            std::vector<int> group(k);
            for (int a = 0; a < k; ++a) group[a] = a;
            for (;;) {
                probe(k, group, beta);
                int a = k - 1;
                while (a >= 0 && group[a] == sys.n_resources - k + a) --a;
                if (a < 0) break;
                ++group[a];
                for (int c = a + 1; c < k; ++c) group[c] = group[c - 1] + 1;
            }
        } else {
            std::vector<double> w(sys.n_tasks);
            for (int j = 0; j < sys.n_tasks; ++j) w[j] = beta[j] * y[j];
            probe(k, greedy_max_coverage(sys, w, k).resources, beta);
            Rng rng(Rng::mix(seed, std::uint64_t(k)));
            for (int trial = 0; trial < 1000; ++trial) {
                // Partial Fisher-Yates draw of k distinct resources.
                std::vector<int> ids(sys.n_resources);
                for (int i = 0; i < sys.n_resources; ++i) ids[i] = i;
                for (int a = 0; a < k; ++a) std::swap(ids[a], ids[a + rng.next_int(sys.n_resources - a)]);
                ids.resize(k);
                std::sort(ids.begin(), ids.end());
                probe(k, ids, beta);
            }
        }
    }
    return rep;
}

} // namespace gms
