#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "genmakespan/errors.hpp"
#include "genmakespan/eval.hpp"
#include "genmakespan/lp.hpp"
#include "genmakespan/rng.hpp"
#include "genmakespan/set_system.hpp"
#include "oracles.hpp"

using namespace gms;

namespace {

// Direct enumeration of E[max load]: loops the joint support recursively
// with no incremental bookkeeping.
double expected_max_direct(const SetSystemInstance& sys, const std::vector<DiscreteDistribution>& dists,
                           const std::vector<int>& sel) {
    double acc = 0.0;
    std::vector<double> load(sys.n_resources, 0.0);
    std::function<void(size_t, double)> rec = [&](size_t idx, double prob) {
        if (idx == sel.size()) {
            double worst = 0.0;
            for (double v : load) worst = std::max(worst, v);
            acc += prob * worst;
            return;
        }
        for (const auto& atom : dists[sel[idx]].atoms()) {
            for (int i : sys.task_resources[sel[idx]]) load[i] += atom.value;
            rec(idx + 1, prob * atom.prob);
            for (int i : sys.task_resources[sel[idx]]) load[i] -= atom.value;
        }
    };
    rec(0, 1.0);
    return acc;
}

} // namespace

TEST_CASE("exact evaluation hand cases") {
    auto shared = SetSystemInstance::from_resource_tasks(2, {{0, 1}});
    auto apart = SetSystemInstance::from_resource_tasks(2, {{0}, {1}});
    std::vector<DiscreteDistribution> ber = {DiscreteDistribution::bernoulli(0.5),
                                             DiscreteDistribution::bernoulli(0.5)};
    CHECK(evaluate_exact(shared, ber, {0, 1}) == doctest::Approx(1.0));
    CHECK(evaluate_exact(apart, ber, {0, 1}) == doctest::Approx(0.75));
    CHECK(evaluate_exact(apart, ber, {}) == 0.0);
    CHECK(evaluate_exact(apart, ber, {1}) == doctest::Approx(0.5));

    std::vector<DiscreteDistribution> mixed = {DiscreteDistribution({{0.0, 0.5}, {2.0, 0.5}}),
                                               DiscreteDistribution::constant(1.0)};
    CHECK(evaluate_exact(shared, mixed, {0, 1}) == doctest::Approx(2.0));
    CHECK(evaluate_exact(apart, mixed, {0, 1}) == doctest::Approx(1.5));

    CHECK_THROWS_AS(evaluate_exact(apart, ber, {1, 0}), ArgumentError);
    CHECK_THROWS_AS(evaluate_exact(apart, ber, {2}), ArgumentError);
    CHECK_THROWS_AS(evaluate_exact(apart, {ber[0]}, {0}), ArgumentError);
}

TEST_CASE("exact evaluation matches direct enumeration") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(Rng::mix(51, seed));
        int n = 2 + rng.next_int(6), m = 1 + rng.next_int(4);
        std::vector<std::vector<int>> lists(m);
        for (int j = 0; j < n; ++j) {
            lists[rng.next_int(m)].push_back(j);
            if (rng.next_double() < 0.3) {
                int extra = rng.next_int(m);
                if (!std::count(lists[extra].begin(), lists[extra].end(), j)) lists[extra].push_back(j);
            }
        }
        for (auto& l : lists) std::sort(l.begin(), l.end());
        auto sys = SetSystemInstance::from_resource_tasks(n, lists);
        std::vector<DiscreteDistribution> dists;
        for (int j = 0; j < n; ++j) {
            int atoms = 1 + rng.next_int(3);
            std::vector<Atom> as;
            double left = 1.0;
            for (int a = 0; a < atoms; ++a) {
                double p = a + 1 == atoms ? left : left * rng.next_range(0.2, 0.8);
                as.push_back({a + rng.next_range(0.1, 0.9), p});
                left -= p;
            }
            dists.push_back(DiscreteDistribution(as));
        }
        std::vector<int> sel;
        for (int j = 0; j < n; ++j)
            if (rng.next_double() < 0.7) sel.push_back(j);
        CHECK(evaluate_exact(sys, dists, sel) ==
              doctest::Approx(expected_max_direct(sys, dists, sel)).epsilon(1e-12));
    }
}

TEST_CASE("exact evaluation outcome cap") {
    int n = 20;
    std::vector<std::vector<int>> lists(1);
    std::vector<DiscreteDistribution> dists;
    std::vector<int> sel;
    for (int j = 0; j < n; ++j) {
        lists[0].push_back(j);
        dists.push_back(DiscreteDistribution::bernoulli(0.5));
        sel.push_back(j);
    }
    auto sys = SetSystemInstance::from_resource_tasks(n, lists);
    CHECK_THROWS_AS(evaluate_exact(sys, dists, sel), ResourceLimitError);
}

TEST_CASE("monte carlo agrees with exact and is thread-stable") {
    auto sys = SetSystemInstance::from_resource_tasks(3, {{0, 1}, {1, 2}});
    std::vector<DiscreteDistribution> dists = {DiscreteDistribution::bernoulli(0.4),
                                               DiscreteDistribution({{0.5, 0.5}, {1.5, 0.5}}),
                                               DiscreteDistribution::bernoulli(0.7, 0.8)};
    std::vector<int> sel = {0, 1, 2};
    double exact = evaluate_exact(sys, dists, sel);
    McEstimate est = evaluate_mc(sys, dists, sel, 100000, 2026);
    CHECK(std::abs(est.mean - exact) <= 4.0 * est.std_error);
    CHECK(est.std_error > 0.0);
    CHECK(est.samples == 100000);

    McEstimate again = evaluate_mc(sys, dists, sel, 100000, 2026);
    CHECK(again.mean == est.mean);
    CHECK(again.std_error == est.std_error);
    for (int threads : {2, 3, 7}) {
        McEstimate multi = evaluate_mc(sys, dists, sel, 100000, 2026, threads);
        CHECK(multi.mean == est.mean);
        CHECK(multi.std_error == est.std_error);
    }
    McEstimate other = evaluate_mc(sys, dists, sel, 100000, 2027);
    CHECK(other.mean != est.mean);

    CHECK_THROWS_AS(evaluate_mc(sys, dists, sel, 0, 1), ArgumentError);
    CHECK_THROWS_AS(evaluate_mc(sys, dists, sel, 10, 1, 0), ArgumentError);
}

TEST_CASE("brute force reference") {
    auto sys = SetSystemInstance::from_resource_tasks(4, {{0, 1, 2, 3}});
    std::vector<DiscreteDistribution> dists = {DiscreteDistribution::bernoulli(0.4),
                                               DiscreteDistribution::bernoulli(0.2),
                                               DiscreteDistribution::bernoulli(0.5),
                                               DiscreteDistribution::bernoulli(0.1)};
    BruteForceResult best = brute_force_opt(sys, dists, 2);
    // Same resource, so the value is the sum of the two smallest means.
    CHECK(best.value == doctest::Approx(0.3));
    CHECK(best.selection == std::vector<int>{1, 3});

    std::vector<DiscreteDistribution> equal_means(4, DiscreteDistribution::bernoulli(0.5));
    BruteForceResult tie = brute_force_opt(sys, equal_means, 2);
    CHECK(tie.selection == std::vector<int>{0, 1});

    CHECK_THROWS_AS(brute_force_opt(sys, dists, 0), ArgumentError);
    CHECK_THROWS_AS(brute_force_opt(sys, dists, 5), ArgumentError);

    int n = 50;
    std::vector<std::vector<int>> lists(1);
    std::vector<DiscreteDistribution> many;
    for (int j = 0; j < n; ++j) {
        lists[0].push_back(j);
        many.push_back(DiscreteDistribution::bernoulli(0.5));
    }
    auto big = SetSystemInstance::from_resource_tasks(n, lists);
    CHECK_THROWS_AS(brute_force_opt(big, many, 25), ResourceLimitError);
}

TEST_CASE("lambda safety checker") {
    auto sys = SetSystemInstance::from_resource_tasks(3, {{0, 1}, {1, 2}, {2}});
    ExtendResult good;
    good.marked = {0, 1};
    good.cover = {{0}, {0, 1}, {1}};
    good.lambda = 2;
    CHECK(check_lambda_safe(sys, {0, 1}, good).empty());

    // Resource 1 shares task 1 with dangerous resource 0, but its cover
    // misses it.
    ExtendResult hole;
    hole.marked = {0};
    hole.cover = {{0}, {2}, {2}};
    hole.lambda = 2;
    auto bad = check_lambda_safe(sys, {0}, hole);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0] == std::pair<int, int>{1, 1});

    CHECK_THROWS_AS(check_lambda_safe(sys, {3}, good), ArgumentError);
    ExtendResult short_cover;
    short_cover.cover = {{0}};
    CHECK_THROWS_AS(check_lambda_safe(sys, {0}, short_cover), ArgumentError);

    // The production checker and the test oracle must agree.
    CHECK(oracle::cover_violations(sys, {0}, hole) == bad);
}

TEST_CASE("lp point checker") {
    auto sys = SetSystemInstance::from_resource_tasks(4, {{0, 1}, {2, 3}});
    std::vector<SplitDistribution> tasks;
    for (int j = 0; j < 4; ++j)
        tasks.push_back(split_at_one(DiscreteDistribution::bernoulli(0.5)));

    std::vector<double> y(4, 1.0);
    LpPointCheck rep = check_lp_constraints(sys, tasks, y, 4.0, 1.0, 1);
    CHECK(rep.ok());
    CHECK(rep.exhaustive);

    LpPointCheck tight = check_lp_constraints(sys, tasks, y, 0.25, 1.0, 1);
    CHECK_FALSE(tight.groups_ok);
    CHECK(tight.worst_k >= 1);
    CHECK(tight.worst_group_excess > 0.0);

    std::vector<double> oob = {1.5, 0.0, 0.0, 0.0};
    CHECK_FALSE(check_lp_constraints(sys, tasks, oob, 4.0, 1.0, 1).bounds_ok);

    std::vector<SplitDistribution> heavy;
    for (int j = 0; j < 4; ++j)
        heavy.push_back(split_at_one(DiscreteDistribution({{0.5, 0.25}, {4.0, 0.75}})));
    CHECK_FALSE(check_lp_constraints(sys, heavy, y, 4.0, 1.0, 1).exceptional_ok);
}

TEST_CASE("lp point checker samples large instances") {
    // Thirteen resources forces the sampled path; the overload sits on a
    // single resource, which greedy coverage finds immediately.
    std::vector<std::vector<int>> lists(13);
    int n = 6;
    for (int j = 0; j < n; ++j) lists[0].push_back(j);
    auto sys = SetSystemInstance::from_resource_tasks(n, lists);
    std::vector<SplitDistribution> tasks;
    for (int j = 0; j < n; ++j) tasks.push_back(split_at_one(DiscreteDistribution::constant(1.0)));
    std::vector<double> y(n, 1.0);
    LpPointCheck rep = check_lp_constraints(sys, tasks, y, 0.5, 1.0, 7);
    CHECK_FALSE(rep.exhaustive);
    CHECK_FALSE(rep.groups_ok);
    CHECK(rep.worst_k == 1);
    CHECK(rep.worst_group == std::vector<int>{0});

    LpPointCheck fine = check_lp_constraints(sys, tasks, y, 7.0, 1.0, 7);
    CHECK(fine.ok());
}

TEST_CASE("relaxation output passes the point checker") {
    auto sys = SetSystemInstance::from_resource_tasks(5, {{0, 1, 2}, {2, 3, 4}, {1, 3}});
    std::vector<SplitDistribution> tasks;
    for (int j = 0; j < 5; ++j)
        tasks.push_back(split_at_one(DiscreteDistribution::bernoulli(0.2 + 0.15 * j)));
    LpSolution sol = solve_relaxation(sys, tasks, 3);
    REQUIRE(sol.feasible);
    LpPointCheck rep = check_lp_constraints(sys, tasks, sol.y, 4.0, kCoverSlack, 3);
    CHECK(rep.ok());
    CHECK(rep.exhaustive);
}
