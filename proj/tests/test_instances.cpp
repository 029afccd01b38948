#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "genmakespan/errors.hpp"
#include "genmakespan/eval.hpp"
#include "genmakespan/instances.hpp"

using namespace gms;

namespace {

std::vector<SplitDistribution> split_scaled(const std::vector<DiscreteDistribution>& dists,
                                            double divisor) {
    std::vector<SplitDistribution> out;
    out.reserve(dists.size());
    for (const auto& d : dists) out.push_back(split_at_one(scale(d, divisor)));
    return out;
}

} // namespace

TEST_CASE("the line gap construction is a full binary tree of intervals") {
    SUBCASE("smallest depth") {
        InstanceFile inst = gen_line_gap(1);
        CHECK(inst.kind() == FamilyKind::kLine);
        CHECK(inst.n_tasks() == 3);
        CHECK(inst.target == 3);
        const auto& geo = std::get<LineGeometry>(inst.family);
        CHECK(geo.num_points == 2);
        CHECK(geo.intervals ==
              std::vector<std::pair<int, int>>{{0, 1}, {0, 0}, {1, 1}});
        CHECK(inst.tasks[0].support_size() == 1);  // the root interval always fires
        CHECK(inst.tasks[0].mean() == 1.0);
        CHECK(inst.tasks[1].mean() == 0.5);
        CHECK(inst.tasks[2].mean() == 0.5);
    }
    SUBCASE("depth three widths and membership counts") {
        InstanceFile inst = gen_line_gap(3);
        CHECK(inst.n_tasks() == 15);
        const auto& geo = std::get<LineGeometry>(inst.family);
        CHECK(geo.num_points == 8);
        int idx = 0;
        for (int d = 0; d <= 3; ++d) {
            const int width = 8 >> d;
            for (int i = 0; i < (1 << d); ++i, ++idx) {
                CHECK(geo.intervals[idx].second - geo.intervals[idx].first + 1 == width);
                CHECK(inst.tasks[idx].mean() == doctest::Approx(std::ldexp(1.0, -d)));
            }
        }
        SetSystem sys = inst.build();
        for (const auto& row : sys.instance().resource_tasks)
            CHECK(int(row.size()) == 4);  // one interval per depth through each point
    }
    SUBCASE("depth bounds") {
        CHECK_THROWS_AS(gen_line_gap(0), ArgumentError);
        CHECK_THROWS_AS(gen_line_gap(21), ArgumentError);
    }
}

TEST_CASE("the line gap relaxation accepts the all-ones point") {
    for (int depth = 1; depth <= 3; ++depth) {
        InstanceFile inst = gen_line_gap(depth);
        SetSystem sys = inst.build();
        auto splits = split_scaled(inst.tasks, 1.0);
        std::vector<double> y(std::size_t(inst.n_tasks()), 1.0);
        LpPointCheck check = check_lp_constraints(sys.instance(), splits, y, 4.0, 1.0, 99);
        CHECK(check.ok());
        CHECK(check.exhaustive);  // at most 8 resources, every group enumerated
    }
}

TEST_CASE("the group gap construction enumerates choice functions") {
    SUBCASE("two groups of two") {
        InstanceFile inst = gen_general_gap(2);
        CHECK(inst.n_tasks() == 4);
        CHECK(inst.target == 4);
        const auto& sys = std::get<SetSystemInstance>(inst.family);
        CHECK(sys.n_resources == 4);
        std::set<std::vector<int>> rows;
        for (const auto& row : sys.resource_tasks) {
            REQUIRE(row.size() == 2);
            CHECK((row[0] == 0 || row[0] == 1));
            CHECK((row[1] == 2 || row[1] == 3));
            rows.insert(row);
        }
        CHECK(rows.size() == 4);  // all choice functions, no repeats
    }
    SUBCASE("three groups of three") {
        InstanceFile inst = gen_general_gap(3);
        CHECK(inst.n_tasks() == 9);
        const auto& sys = std::get<SetSystemInstance>(inst.family);
        CHECK(sys.n_resources == 27);
        for (int j = 0; j < 9; ++j)
            CHECK(int(sys.task_resources[j].size()) == 9);  // q^(q-1) choice functions fix j
        for (const auto& d : inst.tasks) CHECK(d.mean() == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("group size bounds") {
        CHECK_THROWS_AS(gen_general_gap(1), ArgumentError);
        CHECK_THROWS_AS(gen_general_gap(7), ArgumentError);
    }
}

TEST_CASE("the scaled group gap satisfies the relaxation at the documented budget") {
    const double budget = 2.0 * std::exp(2.0);
    SUBCASE("exhaustive at the smallest size") {
        InstanceFile inst = gen_general_gap(2);
        SetSystem sys = inst.build();
        auto splits = split_scaled(inst.tasks, 1.0);  // log2(2) = 1
        std::vector<double> y(4, 1.0);
        LpPointCheck check = check_lp_constraints(sys.instance(), splits, y, budget, 1.0, 3);
        CHECK(check.ok());
        CHECK(check.exhaustive);
    }
    SUBCASE("probed at q = 3") {
        InstanceFile inst = gen_general_gap(3);
        SetSystem sys = inst.build();
        auto splits = split_scaled(inst.tasks, std::log2(3.0));
        for (const auto& s : splits) {
            CHECK(s.exceptional_mean == 0.0);  // scaled coins never exceed 1
            CHECK(s.truncated.max_value() <= 1.0);
        }
        std::vector<double> y(9, 1.0);
        LpPointCheck check = check_lp_constraints(sys.instance(), splits, y, budget, 1.0, 3);
        CHECK(check.ok());
    }
}

TEST_CASE("random generation is seeded and validated") {
    SUBCASE("fixed seed reproduces the file bytes") {
        InstanceFile a = gen_random(FamilyKind::kLine, 10, "bernoulli", 5, 7);
        InstanceFile b = gen_random(FamilyKind::kLine, 10, "bernoulli", 5, 7);
        CHECK(instance_to_json(a) == instance_to_json(b));
    }
    SUBCASE("different seeds give different instances") {
        std::set<std::string> seen;
        for (std::uint64_t seed = 0; seed < 10; ++seed)
            seen.insert(instance_to_json(gen_random(FamilyKind::kLine, 8, "bernoulli", 4, seed)));
        CHECK(seen.size() == 10);
    }
    SUBCASE("line intervals stay in the coordinate range") {
        InstanceFile inst = gen_random(FamilyKind::kLine, 10, "bernoulli", 5, 3);
        const auto& geo = std::get<LineGeometry>(inst.family);
        CHECK(geo.intervals.size() == 10);
        for (const auto& [lo, hi] : geo.intervals) {
            CHECK(lo >= 0);
            CHECK(lo <= hi);
            CHECK(hi < geo.num_points);
        }
        inst.validate();
    }
    SUBCASE("trees decode to the right edge count and materialize") {
        InstanceFile inst = gen_random(FamilyKind::kTree, 9, "bernoulli", 3, 11);
        const auto& geo = std::get<TreeGeometry>(inst.family);
        CHECK(int(geo.edges.size()) == geo.num_vertices - 1);
        CHECK(geo.paths.size() == 9);
        SetSystem sys = inst.build();
        CHECK(sys.instance().n_tasks == 9);
    }
    SUBCASE("planar families materialize") {
        InstanceFile rect = gen_random(FamilyKind::kRect, 6, "finite", 3, 2);
        CHECK(rect.build().instance().n_tasks == 6);
        for (const auto& d : rect.tasks) {
            CHECK(d.support_size() == 3);
            CHECK(d.mean() > 0.0);
        }
        InstanceFile disk = gen_random(FamilyKind::kDisk, 5, "bernoulli", 2, 2);
        CHECK(disk.build().instance().n_tasks == 5);
        const auto& geo = std::get<DiskGeometry>(disk.family);
        for (const auto& d : geo.disks) {
            CHECK(d.r >= 0.05);
            CHECK(d.r <= 0.5);
        }
    }
    SUBCASE("argument domains") {
        CHECK_THROWS_AS(gen_random(FamilyKind::kLine, 0, "bernoulli", 1, 0), ArgumentError);
        CHECK_THROWS_AS(gen_random(FamilyKind::kLine, 5, "bernoulli", 0, 0), ArgumentError);
        CHECK_THROWS_AS(gen_random(FamilyKind::kLine, 5, "bernoulli", 6, 0), ArgumentError);
        CHECK_THROWS_AS(gen_random(FamilyKind::kLine, 5, "uniform", 2, 0), ArgumentError);
        CHECK_THROWS_AS(gen_random(FamilyKind::kExplicit, 5, "bernoulli", 2, 0), ArgumentError);
    }
}

TEST_CASE("instance files round-trip byte-exactly") {
    std::vector<InstanceFile> fixtures;
    fixtures.push_back(gen_line_gap(2));
    fixtures.push_back(gen_general_gap(2));
    fixtures.push_back(gen_random(FamilyKind::kLine, 7, "bernoulli", 3, 5));
    fixtures.push_back(gen_random(FamilyKind::kTree, 6, "finite", 2, 6));
    fixtures.push_back(gen_random(FamilyKind::kRect, 5, "finite", 2, 7));
    fixtures.push_back(gen_random(FamilyKind::kDisk, 4, "bernoulli", 2, 8));
    fixtures.back().known_opt = 1.25;

    for (const InstanceFile& inst : fixtures) {
        const std::string text = instance_to_json(inst);
        InstanceFile back = instance_from_json(text);
        CHECK(instance_to_json(back) == text);
        CHECK(back.target == inst.target);
        CHECK(back.name == inst.name);
        CHECK(back.kind() == inst.kind());
        REQUIRE(back.tasks.size() == inst.tasks.size());
        for (std::size_t j = 0; j < inst.tasks.size(); ++j)
            CHECK(back.tasks[j] == inst.tasks[j]);
        CHECK(back.known_opt == inst.known_opt);
    }

    const std::string path = "roundtrip_fixture.json";
    save_instance(fixtures[0], path);
    InstanceFile loaded = load_instance(path);
    CHECK(instance_to_json(loaded) == instance_to_json(fixtures[0]));
    save_instance(loaded, path);
    InstanceFile again = load_instance(path);
    CHECK(instance_to_json(again) == instance_to_json(loaded));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_instance(path), ValidationError);
}

TEST_CASE("malformed instance files are rejected") {
    const std::string good = instance_to_json(gen_random(FamilyKind::kLine, 3, "bernoulli", 2, 1));
    auto corrupt = [&](const std::string& from, const std::string& to) {
        std::string t = good;
        const auto pos = t.find(from);
        REQUIRE(pos != std::string::npos);
        t.replace(pos, from.size(), to);
        return t;
    };

    CHECK_THROWS_AS(instance_from_json("{"), ValidationError);
    CHECK_THROWS_AS(instance_from_json("[1, 2]"), ValidationError);
    CHECK_THROWS_AS(instance_from_json(corrupt("genmakespan-instance", "other-format")),
                    ValidationError);
    CHECK_THROWS_AS(instance_from_json(corrupt("\"version\": 1", "\"version\": 2")),
                    ValidationError);
    CHECK_THROWS_AS(instance_from_json(corrupt("\"target\": 2", "\"target\": 99")),
                    ValidationError);
    CHECK_THROWS_AS(instance_from_json(corrupt("\"kind\": \"line\"", "\"kind\": \"oval\"")),
                    ValidationError);
    CHECK_THROWS_AS(instance_from_json(corrupt("\"points\": 3", "\"points\": 1")),
                    ValidationError);

    // Probability mass off by more than the renormalization tolerance.
    const std::string bad_task =
        "{\"format\": \"genmakespan-instance\", \"version\": 1, \"name\": \"x\","
        " \"family\": {\"kind\": \"line\", \"points\": 1, \"intervals\": [[0, 0]]},"
        " \"target\": 1, \"tasks\": [[[0.5, 0.4]]]}";
    CHECK_THROWS_AS(instance_from_json(bad_task), ValidationError);

    const std::string missing_tasks =
        "{\"format\": \"genmakespan-instance\", \"version\": 1, \"name\": \"x\","
        " \"family\": {\"kind\": \"line\", \"points\": 1, \"intervals\": [[0, 0]]},"
        " \"target\": 1}";
    CHECK_THROWS_AS(instance_from_json(missing_tasks), ValidationError);
}

TEST_CASE("result files serialize stably") {
    ResultFile res;
    res.instance_name = "fixture";
    res.target = 2;
    res.options.seed = 9;
    res.options.samples = 1234;
    res.chosen = {0, 3};
    res.guess = 0.75;
    res.estimate = {1.5, 0.01, 1234};
    res.report.partition_ok = true;
    res.report.selection_ok = true;
    res.report.attempts = 1;
    res.report.branch = 1;
    res.grid.push_back({0.75, true, true, 1.5});
    res.grid.push_back({1.5, true, true, 1.6});

    const std::string text = result_to_json(res);
    CHECK(text == result_to_json(res));
    CHECK(text.find("\"format\": \"genmakespan-result\"") != std::string::npos);
    CHECK(text.find("\"seed\": 9") != std::string::npos);
    CHECK(text.find("\"guess\": 0.75") != std::string::npos);
    CHECK(text.find("\"branch\": 1") != std::string::npos);

    save_result(res, "result_fixture.json");
    save_result(res, "result_fixture_2.json");
    std::ifstream a("result_fixture.json"), b("result_fixture_2.json");
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(sa == text);
    std::remove("result_fixture.json");
    std::remove("result_fixture_2.json");
}
