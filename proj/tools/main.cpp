#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "genmakespan/errors.hpp"
#include "genmakespan/eval.hpp"
#include "genmakespan/instances.hpp"
#include "genmakespan/lp.hpp"
#include "genmakespan/rounding.hpp"

namespace {

using namespace gms;

// Exit codes: 0 ok, 2 unusable input (flags, files), 3 resource limit,
// 4 infeasible relaxation, 1 anything else.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitResource = 3;
constexpr int kExitInfeasible = 4;

struct GenArgs {
    std::string kind = "random";
    std::string out;
    int depth = 3;
    int q = 3;
    std::string family = "line";
    int n = 10;
    int target = 5;
    std::string profile = "bernoulli";
    std::uint64_t seed = 0;
};

struct SolveArgs {
    std::string in;
    std::string out;
    double b = 4.0;
    double alpha_bar = 4.0;
    std::int64_t samples = 100000;
    std::int64_t guess_samples = 10000;
    int repetitions = 64;
    int max_cuts = 500;
    bool fast_k = false;
    int threads = 1;
    std::uint64_t seed = 0;
};

struct GapArgs {
    std::string construction = "general";
    int max_depth = 4;
    int max_q = 4;
    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
    std::string out;
};

struct CompareArgs {
    std::string in;
    std::string ledger;
    SolveArgs solve;
};

FamilyKind parse_family(const std::string& name) {
    if (name == "line") return FamilyKind::kLine;
    if (name == "tree") return FamilyKind::kTree;
    if (name == "rect") return FamilyKind::kRect;
    if (name == "disk") return FamilyKind::kDisk;
    throw ArgumentError("unknown family '" + name + "'");
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

SolveOptions to_options(const SolveArgs& a) {
    SolveOptions opt;
    opt.b = a.b;
    opt.alpha_bar = a.alpha_bar;
    opt.fast_k = a.fast_k;
    opt.max_cuts = a.max_cuts;
    opt.repetitions = a.repetitions;
    opt.samples = a.guess_samples;
    opt.final_samples = a.samples;
    opt.threads = a.threads;
    opt.seed = a.seed;
    return opt;
}

int run_gen(const GenArgs& a) {
    InstanceFile inst;
    if (a.kind == "line-gap") {
        inst = gen_line_gap(a.depth);
    } else if (a.kind == "general-gap") {
        inst = gen_general_gap(a.q);
    } else {
        inst = gen_random(parse_family(a.family), a.n, a.profile, a.target, a.seed);
    }
    save_instance(inst, a.out);
    std::cout << "wrote " << a.out << ": " << inst.name << " (n=" << inst.n_tasks()
              << ", t=" << inst.target << ")\n";
    return kExitOk;
}

int run_solve(const SolveArgs& a) {
    InstanceFile inst = load_instance(a.in);
    SetSystem sys = inst.build();
    const SolveOptions opt = to_options(a);
    Solution sol = solve_end_to_end(sys, inst.tasks, inst.target, opt);

    ResultFile res;
    res.instance_name = inst.name;
    res.target = inst.target;
    res.options = opt;
    res.chosen = sol.chosen;
    res.guess = sol.guess;
    res.estimate = sol.estimate;
    res.report = sol.report;
    res.grid = sol.grid;
    save_result(res, a.out);

    std::cout << inst.name << ": chose " << sol.chosen.size() << " of " << inst.n_tasks()
              << " tasks at guess B=" << fmt(sol.guess) << "\n"
              << "  makespan estimate " << fmt(sol.estimate.mean) << " +- "
              << fmt(sol.estimate.std_error) << " (" << sol.estimate.samples << " samples)\n"
              << "  selection_ok=" << (sol.report.selection_ok ? "yes" : "no")
              << " attempts=" << sol.report.attempts << "\n"
              << "wrote " << a.out << "\n";
    return kExitOk;
}

// One table row per sweep parameter: certify the all-ones point at the
// construction's budget, then estimate the true all-tasks makespan on the
// unscaled sizes. The ratio column is makespan over the certified guess.
int run_gap(const GapArgs& a) {
    std::ostringstream table;
    table << "# gap-experiment construction=" << a.construction << " samples=" << a.samples
          << " seed=" << a.seed << "\n";
    table << "param\tlp_bound\tmakespan\tstderr\tratio\tcert\n";

    const bool line = a.construction == "line";
    if (!line && a.construction != "general")
        throw ArgumentError("construction must be 'line' or 'general'");

    const int lo = line ? 1 : 2;
    const int hi = line ? a.max_depth : a.max_q;
    if (hi < lo) throw ArgumentError("empty sweep range");
    for (int param = lo; param <= hi; ++param) {
        InstanceFile inst = line ? gen_line_gap(param) : gen_general_gap(param);
        SetSystem sys = inst.build();
        const double guess = line ? 1.0 : std::log2(double(param));
        const double budget = line ? 4.0 : 2.0 * std::exp(2.0);

        std::vector<SplitDistribution> splits;
        splits.reserve(inst.tasks.size());
        for (const auto& d : inst.tasks) splits.push_back(split_at_one(scale(d, guess)));
        std::vector<double> ones(inst.tasks.size(), 1.0);
        const LpPointCheck cert =
            check_lp_constraints(sys.instance(), splits, ones, budget, 1.0, a.seed);

        std::vector<int> all(inst.tasks.size());
        for (std::size_t j = 0; j < all.size(); ++j) all[j] = int(j);
        const McEstimate mc =
            evaluate_mc(sys.instance(), inst.tasks, all, a.samples, Rng::mix(a.seed, param));

        table << param << "\t" << fmt(guess) << "\t" << fmt(mc.mean) << "\t"
              << fmt(mc.std_error) << "\t" << fmt(mc.mean / guess) << "\t"
              << (cert.ok() ? "ok" : "fail") << "\n";
    }

    std::cout << table.str();
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw ValidationError("cannot open '" + a.out + "' for writing");
        f << table.str();
    }
    return kExitOk;
}

int run_compare(const CompareArgs& a) {
    InstanceFile inst = load_instance(a.in);
    SetSystem sys = inst.build();
    Solution sol = solve_end_to_end(sys, inst.tasks, inst.target, to_options(a.solve));
    const double algo = evaluate_exact(sys.instance(), inst.tasks, sol.chosen);
    const BruteForceResult best = brute_force_opt(sys.instance(), inst.tasks, inst.target);
    const double ratio = best.value > 0.0 ? algo / best.value : (algo > 0.0 ? HUGE_VAL : 1.0);

    std::cout << inst.name << ": algorithm " << fmt(algo) << " optimal " << fmt(best.value)
              << " ratio " << fmt(ratio) << "\n";

    if (!a.ledger.empty()) {
        const bool fresh = !std::ifstream(a.ledger).good();
        std::ofstream f(a.ledger, std::ios::binary | std::ios::app);
        if (!f) throw ValidationError("cannot open '" + a.ledger + "' for appending");
        if (fresh) f << "instance,n,target,algorithm,optimal,ratio\n";
        f << inst.name << "," << inst.n_tasks() << "," << inst.target << "," << fmt(algo) << ","
          << fmt(best.value) << "," << fmt(ratio) << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic makespan minimization over geometric set systems"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* cmd_gen = app.add_subcommand("gen", "generate an instance file");
    cmd_gen->add_option("--kind", gen.kind, "line-gap | general-gap | random")
        ->check(CLI::IsMember({"line-gap", "general-gap", "random"}));
    cmd_gen->add_option("--out", gen.out, "instance file to write")->required();
    cmd_gen->add_option("--depth", gen.depth, "line-gap tree depth");
    cmd_gen->add_option("--q", gen.q, "general-gap group size");
    cmd_gen->add_option("--family", gen.family, "random family: line | tree | rect | disk");
    cmd_gen->add_option("-n,--tasks", gen.n, "random task count");
    cmd_gen->add_option("--target", gen.target, "selection target");
    cmd_gen->add_option("--profile", gen.profile, "size profile: bernoulli | finite");
    cmd_gen->add_option("--seed", gen.seed, "generator seed");

    SolveArgs solve;
    CLI::App* cmd_solve = app.add_subcommand("solve", "solve an instance file");
    cmd_solve->add_option("--in", solve.in, "instance file")->required();
    cmd_solve->add_option("--out", solve.out, "result file to write")->required();
    cmd_solve->add_option("--b", solve.b, "relaxation budget factor");
    cmd_solve->add_option("--alpha-bar", solve.alpha_bar, "rounding threshold factor");
    cmd_solve->add_option("--samples", solve.samples, "final estimate sample count");
    cmd_solve->add_option("--guess-samples", solve.guess_samples, "per-guess sample count");
    cmd_solve->add_option("--repetitions", solve.repetitions, "tree rounding repetitions");
    cmd_solve->add_option("--max-cuts", solve.max_cuts, "cutting plane budget");
    cmd_solve->add_flag("--fast-k", solve.fast_k, "sweep only doubly exponential group sizes");
    cmd_solve->add_option("--threads", solve.threads, "worker threads");
    cmd_solve->add_option("--seed", solve.seed, "run seed");

    GapArgs gap;
    CLI::App* cmd_gap = app.add_subcommand("gap-experiment", "sweep a gap construction");
    cmd_gap->add_option("--construction", gap.construction, "line | general")
        ->check(CLI::IsMember({"line", "general"}));
    cmd_gap->add_option("--max-depth", gap.max_depth, "line sweep upper depth");
    cmd_gap->add_option("--max-q", gap.max_q, "general sweep upper group size");
    cmd_gap->add_option("--samples", gap.samples, "samples per estimate");
    cmd_gap->add_option("--seed", gap.seed, "estimate seed");
    cmd_gap->add_option("--out", gap.out, "also write the table to this file");

    CompareArgs cmp;
    CLI::App* cmd_cmp = app.add_subcommand("compare-oracle", "solve and compare to brute force");
    cmd_cmp->add_option("--in", cmp.in, "instance file")->required();
    cmd_cmp->add_option("--ledger", cmp.ledger, "CSV ledger to append to");
    cmd_cmp->add_option("--b", cmp.solve.b, "relaxation budget factor");
    cmd_cmp->add_option("--alpha-bar", cmp.solve.alpha_bar, "rounding threshold factor");
    cmd_cmp->add_option("--samples", cmp.solve.samples, "final estimate sample count");
    cmd_cmp->add_option("--guess-samples", cmp.solve.guess_samples, "per-guess sample count");
    cmd_cmp->add_option("--threads", cmp.solve.threads, "worker threads");
    cmd_cmp->add_option("--seed", cmp.solve.seed, "run seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (cmd_gen->parsed()) return run_gen(gen);
        if (cmd_solve->parsed()) return run_solve(solve);
        if (cmd_gap->parsed()) return run_gap(gap);
        return run_compare(cmp);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
