#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "genmakespan/distribution.hpp"
#include "genmakespan/rounding.hpp"
#include "genmakespan/set_system.hpp"

namespace gms {

// Task family of an instance: one of the geometric families, or an explicit
// incidence structure.
using InstancePayload =
    std::variant<LineGeometry, TreeGeometry, RectGeometry, DiskGeometry, SetSystemInstance>;

// One solvable problem, exactly what the on-disk instance format holds.
// The geometry is stored unmaterialized so generator output stays cheap;
// build() produces the working set system.
struct InstanceFile {
    std::string name;
    InstancePayload family;
    std::vector<DiscreteDistribution> tasks;
    int target = 0;
    std::optional<double> known_opt;

    int n_tasks() const;
    FamilyKind kind() const;
    SetSystem build() const;

    // Structural checks without materializing: geometry ranges, task count
    // against the family, target bounds.
    void validate() const;
};

// Binary-tree interval construction: 2^depth line points, one interval per
// tree node (width m/2^d at depth d), firing with probability 2^-d. Every
// point lies on exactly depth+1 intervals. Target is all tasks.
InstanceFile gen_line_gap(int depth);

// Group construction: q groups of q coin tasks each firing with probability
// 1/q; one resource per choice function picking one task per group, q^q
// resources materialized explicitly. Target is all tasks. Refuses q > 6.
InstanceFile gen_general_gap(int group_size);

// Seeded random instance: uniform interval endpoints, random tree from a
// random Pruefer sequence with random path endpoints, uniform rectangle
// corners, or uniform disk centers with log-uniform radii. profile selects
// the size law: "bernoulli" (random p and scale) or "finite" (three-atom
// supports). Pure in (parameters, seed).
InstanceFile gen_random(FamilyKind family, int n, const std::string& profile, int target,
                        std::uint64_t seed);

std::string instance_to_json(const InstanceFile& inst);
InstanceFile instance_from_json(const std::string& text);
void save_instance(const InstanceFile& inst, const std::string& path);
InstanceFile load_instance(const std::string& path);

// Full record of one solve run: the effective configuration beside the
// outcome, so a result file alone reproduces its run.
struct ResultFile {
    std::string instance_name;
    int target = 0;
    SolveOptions options;
    std::vector<int> chosen;
    double guess = 0.0;
    McEstimate estimate;
    AssertionReport report;
    std::vector<GuessOutcome> grid;
};

std::string result_to_json(const ResultFile& res);
void save_result(const ResultFile& res, const std::string& path);

} // namespace gms
