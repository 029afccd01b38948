#pragma once

// Independent reference implementations used to pin expected values.
// Everything here is deliberately naive: direct summation, full
// enumeration, long double. The production code must agree with these,
// not the other way around.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "genmakespan/distribution.hpp"
#include "genmakespan/set_system.hpp"

namespace oracle {

// Every task loading both resource i and some dangerous resource must load
// a resource of the cover R_i. Returns the offending (resource, task) pairs.
inline std::vector<std::pair<int, int>> cover_violations(const gms::SetSystemInstance& sys,
                                                         const std::vector<int>& dangerous,
                                                         const gms::ExtendResult& ext) {
    std::vector<char> in_ld(sys.n_tasks, 0);
    for (int r : dangerous)
        for (int j : sys.resource_tasks[r]) in_ld[j] = 1;
    std::vector<std::pair<int, int>> bad;
    for (int i = 0; i < sys.n_resources; ++i) {
        std::vector<char> in_lr(sys.n_tasks, 0);
        for (int r : ext.cover[i])
            for (int j : sys.resource_tasks[r]) in_lr[j] = 1;
        for (int j : sys.resource_tasks[i])
            if (in_ld[j] && !in_lr[j]) bad.push_back({i, j});
    }
    return bad;
}

// beta_k by direct summation of E[k^X], no log-space tricks.
// Only valid while k^max_value stays inside long double range.
inline long double effective_size_direct(const gms::DiscreteDistribution& x, std::int64_t k) {
    if (k == 1) {
        long double m = 0.0L;
        for (const auto& a : x.atoms()) m += (long double)a.value * a.prob;
        return m;
    }
    long double s = 0.0L;
    for (const auto& a : x.atoms()) s += (long double)a.prob * powl((long double)k, a.value);
    return logl(s) / logl((long double)k);
}

// Closed form for Bernoulli(p) on {0,1}: log_k(1 + p(k-1)).
inline long double effective_size_bernoulli(double p, std::int64_t k) {
    if (k == 1) return p;
    return logl(1.0L + (long double)p * ((long double)k - 1.0L)) / logl((long double)k);
}

// Exact max coverage by trying every k-subset of resources.
inline double max_coverage_exact(const gms::SetSystemInstance& sys, const std::vector<double>& weight,
                                 int k) {
    std::vector<int> pick;
    double best = 0.0;
    std::function<void(int)> rec = [&](int next) {
        if (int(pick.size()) == k) {
            std::vector<char> covered(sys.n_tasks, 0);
            double v = 0.0;
            for (int i : pick)
                for (int j : sys.resource_tasks[i])
                    if (!covered[j]) {
                        covered[j] = 1;
                        v += weight[j];
                    }
            best = std::max(best, v);
            return;
        }
        if (sys.n_resources - next < k - int(pick.size())) return;
        for (int i = next; i < sys.n_resources; ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return best;
}

// Worst group overflow of a fractional point: max over all groups of size k
// of the beta_k-weighted load, for every k. Returns the largest ratio of
// load to k; a point honoring every group row within factor `slack` keeps
// this at most slack * b.
inline double worst_group_ratio(const gms::SetSystemInstance& sys,
                                const std::vector<gms::SplitDistribution>& tasks,
                                const std::vector<double>& y) {
    double worst = 0.0;
    for (int k = 1; k <= sys.n_resources; ++k) {
        std::vector<double> w(sys.n_tasks);
        for (int j = 0; j < sys.n_tasks; ++j)
            w[j] = double(gms::effective_size(tasks[j].truncated, k)) * y[j];
        worst = std::max(worst, max_coverage_exact(sys, w, k) / double(k));
    }
    return worst;
}

// Exact P[sum_i Y_i >= c] by enumerating the product of the supports.
inline double tail_probability(const std::vector<gms::DiscreteDistribution>& ys, double c) {
    double total = 0.0;
    std::function<void(size_t, double, double)> rec = [&](size_t i, double sum, double prob) {
        if (i == ys.size()) {
            if (sum >= c - 1e-12) total += prob;  // borderline sums counted against us
            return;
        }
        for (const auto& a : ys[i].atoms()) rec(i + 1, sum + a.value, prob * a.prob);
    };
    rec(0, 0.0, 1.0);
    return total;
}

} // namespace oracle
