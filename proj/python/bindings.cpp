// Python bindings for the solver core. The surface mirrors the CLI: build
// or load an instance, solve it, evaluate selections, serialize results.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "genmakespan/distribution.hpp"
#include "genmakespan/errors.hpp"
#include "genmakespan/eval.hpp"
#include "genmakespan/instances.hpp"
#include "genmakespan/rounding.hpp"
#include "genmakespan/set_system.hpp"

namespace py = pybind11;
using namespace gms;

namespace {

DiscreteDistribution dist_from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Atom> atoms;
    atoms.reserve(pairs.size());
    for (const auto& [v, p] : pairs) atoms.push_back({v, p});
    return DiscreteDistribution(std::move(atoms));
}

std::vector<std::pair<double, double>> dist_to_pairs(const DiscreteDistribution& d) {
    std::vector<std::pair<double, double>> out;
    out.reserve(d.atoms().size());
    for (const auto& a : d.atoms()) out.push_back({a.value, a.prob});
    return out;
}

Solution solve_instance(const InstanceFile& inst, const SolveOptions& opt) {
    const SetSystem sys = inst.build();
    py::gil_scoped_release release;
    return solve_end_to_end(sys, inst.tasks, inst.target, opt);
}

std::string render_result(const InstanceFile& inst, const Solution& sol,
                          const SolveOptions& opt) {
    const ResultFile res{inst.name,  inst.target,  opt,        sol.chosen,
                         sol.guess,  sol.estimate, sol.report, sol.grid};
    return result_to_json(res);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stochastic makespan minimization on geometric set systems";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

    py::class_<DiscreteDistribution>(m, "DiscreteDistribution")
        .def(py::init(&dist_from_pairs), py::arg("atoms"),
             "Build from [(value, prob), ...]; probabilities must sum to 1.")
        .def_static("constant", &DiscreteDistribution::constant, py::arg("value"))
        .def_static("bernoulli", &DiscreteDistribution::bernoulli, py::arg("p"),
                    py::arg("scale") = 1.0)
        .def_property_readonly("atoms", &dist_to_pairs)
        .def_property_readonly("mean", &DiscreteDistribution::mean)
        .def_property_readonly("max_value", &DiscreteDistribution::max_value)
        .def_property_readonly("support_size", &DiscreteDistribution::support_size)
        .def(py::self == py::self)
        .def("__repr__", [](const DiscreteDistribution& d) {
            return "DiscreteDistribution(" + std::to_string(d.support_size()) + " atoms, mean " +
                   std::to_string(d.mean()) + ")";
        });

    m.def("effective_size", &effective_size, py::arg("dist"), py::arg("k"),
          "log_k E[k^X]; k = 1 gives the mean.");
    m.def(
        "split_at_one",
        [](const DiscreteDistribution& d) {
            const SplitDistribution s = split_at_one(d);
            return std::make_pair(s.truncated, s.exceptional_mean);
        },
        py::arg("dist"), "Returns (truncated part, exceptional mean).");
    m.def("scale", &scale, py::arg("dist"), py::arg("divisor"),
          "Divide every value by the divisor.");

    py::enum_<FamilyKind>(m, "FamilyKind")
        .value("line", FamilyKind::kLine)
        .value("tree", FamilyKind::kTree)
        .value("rect", FamilyKind::kRect)
        .value("disk", FamilyKind::kDisk)
        .value("explicit", FamilyKind::kExplicit);

    py::class_<InstanceFile>(m, "Instance")
        .def_readonly("name", &InstanceFile::name)
        .def_readonly("target", &InstanceFile::target)
        .def_readonly("known_opt", &InstanceFile::known_opt)
        .def_readonly("tasks", &InstanceFile::tasks)
        .def_property_readonly("n_tasks", &InstanceFile::n_tasks)
        .def_property_readonly("kind", &InstanceFile::kind)
        .def_property_readonly("n_resources",
                               [](const InstanceFile& f) { return f.build().instance().n_resources; })
        .def("validate", &InstanceFile::validate)
        .def("to_json", [](const InstanceFile& f) { return instance_to_json(f); })
        .def_static("from_json", [](const std::string& text) { return instance_from_json(text); },
                    py::arg("text"))
        .def("save", [](const InstanceFile& f, const std::string& path) { save_instance(f, path); },
             py::arg("path"))
        .def_static("load", [](const std::string& path) { return load_instance(path); },
                    py::arg("path"))
        .def("__repr__", [](const InstanceFile& f) {
            return "Instance('" + f.name + "', n=" + std::to_string(f.n_tasks()) +
                   ", target=" + std::to_string(f.target) + ")";
        });

    m.def("gen_line_gap", &gen_line_gap, py::arg("depth"));
    m.def("gen_general_gap", &gen_general_gap, py::arg("group_size"));
    m.def("gen_random", &gen_random, py::arg("family"), py::arg("n"), py::arg("profile"),
          py::arg("target"), py::arg("seed"));

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init([](double b, double alpha_bar, bool fast_k, int max_cuts, int repetitions,
                         std::int64_t samples, std::int64_t final_samples, int threads,
                         std::uint64_t seed) {
                 SolveOptions o;
                 o.b = b;
                 o.alpha_bar = alpha_bar;
                 o.fast_k = fast_k;
                 o.max_cuts = max_cuts;
                 o.repetitions = repetitions;
                 o.samples = samples;
                 o.final_samples = final_samples;
                 o.threads = threads;
                 o.seed = seed;
                 return o;
             }),
             py::arg("b") = 4.0, py::arg("alpha_bar") = 4.0, py::arg("fast_k") = false,
             py::arg("max_cuts") = 500, py::arg("repetitions") = 64, py::arg("samples") = 10000,
             py::arg("final_samples") = 100000, py::arg("threads") = 1, py::arg("seed") = 0)
        .def_readwrite("b", &SolveOptions::b)
        .def_readwrite("alpha_bar", &SolveOptions::alpha_bar)
        .def_readwrite("fast_k", &SolveOptions::fast_k)
        .def_readwrite("max_cuts", &SolveOptions::max_cuts)
        .def_readwrite("repetitions", &SolveOptions::repetitions)
        .def_readwrite("samples", &SolveOptions::samples)
        .def_readwrite("final_samples", &SolveOptions::final_samples)
        .def_readwrite("threads", &SolveOptions::threads)
        .def_readwrite("seed", &SolveOptions::seed);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("samples", &McEstimate::samples)
        .def("__repr__", [](const McEstimate& e) {
            return "McEstimate(mean=" + std::to_string(e.mean) + ", std_error=" +
                   std::to_string(e.std_error) + ")";
        });

    py::class_<AssertionReport>(m, "AssertionReport")
        .def_readonly("partition_ok", &AssertionReport::partition_ok)
        .def_readonly("dangerous_bound_ok", &AssertionReport::dangerous_bound_ok)
        .def_readonly("fractional_ok", &AssertionReport::fractional_ok)
        .def_readonly("fractional_ratio", &AssertionReport::fractional_ratio)
        .def_readonly("assembled_ok", &AssertionReport::assembled_ok)
        .def_readonly("assembled_ratio", &AssertionReport::assembled_ratio)
        .def_readonly("chosen_load_ok", &AssertionReport::chosen_load_ok)
        .def_readonly("chosen_load_ratio", &AssertionReport::chosen_load_ratio)
        .def_readonly("exceptional_ok", &AssertionReport::exceptional_ok)
        .def_readonly("exceptional_total", &AssertionReport::exceptional_total)
        .def_readonly("selection_ok", &AssertionReport::selection_ok)
        .def_readonly("reward_met", &AssertionReport::reward_met)
        .def_readonly("attempts", &AssertionReport::attempts)
        .def_readonly("branch", &AssertionReport::branch);

    py::class_<GuessOutcome>(m, "GuessOutcome")
        .def_readonly("guess", &GuessOutcome::guess)
        .def_readonly("feasible", &GuessOutcome::feasible)
        .def_readonly("selection_ok", &GuessOutcome::selection_ok)
        .def_readonly("estimate", &GuessOutcome::estimate);

    py::class_<Solution>(m, "Solution")
        .def_readonly("chosen", &Solution::chosen)
        .def_readonly("high", &Solution::high)
        .def_readonly("low", &Solution::low)
        .def_readonly("target", &Solution::target)
        .def_readonly("b", &Solution::b)
        .def_readonly("alpha_bar", &Solution::alpha_bar)
        .def_readonly("guess", &Solution::guess)
        .def_readonly("estimate", &Solution::estimate)
        .def_readonly("report", &Solution::report)
        .def_readonly("grid", &Solution::grid)
        .def("__repr__", [](const Solution& s) {
            return "Solution(" + std::to_string(s.chosen.size()) + " tasks, estimate " +
                   std::to_string(s.estimate.mean) + ")";
        });

    m.def("solve", &solve_instance, py::arg("instance"), py::arg("options") = SolveOptions(),
          "Run the full pipeline on an instance; the target comes from the instance.");

    m.def(
        "evaluate_exact",
        [](const InstanceFile& inst, const std::vector<int>& selection) {
            return evaluate_exact(inst.build().instance(), inst.tasks, selection);
        },
        py::arg("instance"), py::arg("selection"));
    m.def(
        "evaluate_mc",
        [](const InstanceFile& inst, const std::vector<int>& selection, std::int64_t samples,
           std::uint64_t seed, int threads) {
            const SetSystemInstance sys = inst.build().instance();
            py::gil_scoped_release release;
            return evaluate_mc(sys, inst.tasks, selection, samples, seed, threads);
        },
        py::arg("instance"), py::arg("selection"), py::arg("samples") = 100000,
        py::arg("seed") = 0, py::arg("threads") = 1);

    py::class_<BruteForceResult>(m, "BruteForceResult")
        .def_readonly("value", &BruteForceResult::value)
        .def_readonly("selection", &BruteForceResult::selection);
    m.def(
        "brute_force_opt",
        [](const InstanceFile& inst, int target) {
            return brute_force_opt(inst.build().instance(), inst.tasks, target);
        },
        py::arg("instance"), py::arg("target"));

    m.def("result_json", &render_result, py::arg("instance"), py::arg("solution"),
          py::arg("options"),
          "Serialize a solve outcome exactly as the command line tool writes it.");
}
