#include "genmakespan/instances.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "genmakespan/errors.hpp"
#include "genmakespan/rng.hpp"

namespace gms {

namespace {

using ojson = nlohmann::ordered_json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& what) {
    throw ValidationError("instance file: " + what);
}

const ojson& field(const ojson& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing field '") + key + "'");
    return *it;
}

int as_int(const ojson& j, const char* what) {
    if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
    return j.get<int>();
}

double as_double(const ojson& j, const char* what) {
    if (!j.is_number()) bad(std::string(what) + " must be a number");
    return j.get<double>();
}

std::string as_string(const ojson& j, const char* what) {
    if (!j.is_string()) bad(std::string(what) + " must be a string");
    return j.get<std::string>();
}

const ojson& as_pair(const ojson& j, const char* what) {
    if (!j.is_array() || j.size() != 2) bad(std::string(what) + " must be a two-element array");
    return j;
}

ojson int_pairs(const std::vector<std::pair<int, int>>& v) {
    ojson a = ojson::array();
    for (const auto& [x, y] : v) a.push_back(ojson::array({x, y}));
    return a;
}

std::vector<std::pair<int, int>> read_int_pairs(const ojson& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array");
    std::vector<std::pair<int, int>> out;
    out.reserve(j.size());
    for (const ojson& e : j) {
        const ojson& p = as_pair(e, what);
        out.emplace_back(as_int(p[0], what), as_int(p[1], what));
    }
    return out;
}

ojson family_to_json(const InstancePayload& family) {
    return std::visit(
        overloaded{
            [](const LineGeometry& g) {
                ojson j;
                j["kind"] = "line";
                j["points"] = g.num_points;
                j["intervals"] = int_pairs(g.intervals);
                return j;
            },
            [](const TreeGeometry& g) {
                ojson j;
                j["kind"] = "tree";
                j["vertices"] = g.num_vertices;
                j["edges"] = int_pairs(g.edges);
                j["paths"] = int_pairs(g.paths);
                return j;
            },
            [](const RectGeometry& g) {
                ojson j;
                j["kind"] = "rect";
                ojson rects = ojson::array();
                for (const auto& r : g.rects)
                    rects.push_back(ojson::array({r.x1, r.y1, r.x2, r.y2}));
                j["rects"] = std::move(rects);
                return j;
            },
            [](const DiskGeometry& g) {
                ojson j;
                j["kind"] = "disk";
                ojson disks = ojson::array();
                for (const auto& d : g.disks) disks.push_back(ojson::array({d.cx, d.cy, d.r}));
                j["disks"] = std::move(disks);
                return j;
            },
            [](const SetSystemInstance& s) {
                ojson j;
                j["kind"] = "explicit";
                j["tasks"] = s.n_tasks;
                j["resource_tasks"] = s.resource_tasks;
                return j;
            },
        },
        family);
}

InstancePayload family_from_json(const ojson& j) {
    if (!j.is_object()) bad("family must be an object");
    const std::string kind = as_string(field(j, "kind"), "family kind");
    if (kind == "line") {
        LineGeometry g;
        g.num_points = as_int(field(j, "points"), "points");
        g.intervals = read_int_pairs(field(j, "intervals"), "intervals");
        return g;
    }
    if (kind == "tree") {
        TreeGeometry g;
        g.num_vertices = as_int(field(j, "vertices"), "vertices");
        g.edges = read_int_pairs(field(j, "edges"), "edges");
        g.paths = read_int_pairs(field(j, "paths"), "paths");
        return g;
    }
    if (kind == "rect") {
        RectGeometry g;
        const ojson& rects = field(j, "rects");
        if (!rects.is_array()) bad("rects must be an array");
        for (const ojson& e : rects) {
            if (!e.is_array() || e.size() != 4) bad("each rect must be [x1, y1, x2, y2]");
            g.rects.push_back({as_double(e[0], "rect"), as_double(e[1], "rect"),
                               as_double(e[2], "rect"), as_double(e[3], "rect")});
        }
        return g;
    }
    if (kind == "disk") {
        DiskGeometry g;
        const ojson& disks = field(j, "disks");
        if (!disks.is_array()) bad("disks must be an array");
        for (const ojson& e : disks) {
            if (!e.is_array() || e.size() != 3) bad("each disk must be [cx, cy, r]");
            g.disks.push_back(
                {as_double(e[0], "disk"), as_double(e[1], "disk"), as_double(e[2], "disk")});
        }
        return g;
    }
    if (kind == "explicit") {
        const int n = as_int(field(j, "tasks"), "tasks");
        const ojson& lists = field(j, "resource_tasks");
        if (!lists.is_array()) bad("resource_tasks must be an array");
        std::vector<std::vector<int>> rt;
        rt.reserve(lists.size());
        for (const ojson& e : lists) {
            if (!e.is_array()) bad("resource_tasks entries must be arrays");
            std::vector<int> row;
            row.reserve(e.size());
            for (const ojson& v : e) row.push_back(as_int(v, "resource_tasks"));
            rt.push_back(std::move(row));
        }
        try {
            return SetSystemInstance::from_resource_tasks(n, std::move(rt));
        } catch (const std::exception& e) {
            bad(std::string("explicit family rejected: ") + e.what());
        }
    }
    bad("unknown family kind '" + kind + "'");
}

ojson tasks_to_json(const std::vector<DiscreteDistribution>& tasks) {
    ojson out = ojson::array();
    for (const auto& d : tasks) {
        ojson atoms = ojson::array();
        for (const Atom& a : d.atoms()) atoms.push_back(ojson::array({a.value, a.prob}));
        out.push_back(std::move(atoms));
    }
    return out;
}

std::vector<DiscreteDistribution> tasks_from_json(const ojson& j) {
    if (!j.is_array()) bad("tasks must be an array");
    std::vector<DiscreteDistribution> out;
    out.reserve(j.size());
    for (const ojson& t : j) {
        if (!t.is_array() || t.empty()) bad("each task must be a nonempty array of atoms");
        std::vector<Atom> atoms;
        atoms.reserve(t.size());
        for (const ojson& e : t) {
            const ojson& p = as_pair(e, "atom");
            atoms.push_back({as_double(p[0], "atom value"), as_double(p[1], "atom probability")});
        }
        try {
            out.emplace_back(std::move(atoms));
        } catch (const std::exception& e) {
            bad("task " + std::to_string(out.size()) + " rejected: " + e.what());
        }
    }
    return out;
}

std::string family_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::kLine: return "line";
        case FamilyKind::kTree: return "tree";
        case FamilyKind::kRect: return "rect";
        case FamilyKind::kDisk: return "disk";
        default: return "explicit";
    }
}

// Standard Pruefer decoding; every sequence over [0, n) yields a tree.
std::vector<std::pair<int, int>> decode_pruefer(const std::vector<int>& seq, int n) {
    std::vector<int> degree(n, 1);
    for (int s : seq) ++degree[s];
    std::set<int> leaves;
    for (int i = 0; i < n; ++i)
        if (degree[i] == 1) leaves.insert(i);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);
    for (int s : seq) {
        const int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(leaf, s);
        if (--degree[s] == 1) leaves.insert(s);
    }
    const int u = *leaves.begin();
    const int v = *std::next(leaves.begin());
    edges.emplace_back(u, v);
    return edges;
}

} // namespace

int InstanceFile::n_tasks() const {
    return std::visit(overloaded{
                          [](const LineGeometry& g) { return int(g.intervals.size()); },
                          [](const TreeGeometry& g) { return int(g.paths.size()); },
                          [](const RectGeometry& g) { return int(g.rects.size()); },
                          [](const DiskGeometry& g) { return int(g.disks.size()); },
                          [](const SetSystemInstance& s) { return s.n_tasks; },
                      },
                      family);
}

FamilyKind InstanceFile::kind() const {
    return std::visit(overloaded{
                          [](const LineGeometry&) { return FamilyKind::kLine; },
                          [](const TreeGeometry&) { return FamilyKind::kTree; },
                          [](const RectGeometry&) { return FamilyKind::kRect; },
                          [](const DiskGeometry&) { return FamilyKind::kDisk; },
                          [](const SetSystemInstance&) { return FamilyKind::kExplicit; },
                      },
                      family);
}

SetSystem InstanceFile::build() const {
    return std::visit(
        overloaded{
            [](const SetSystemInstance& s) { return SetSystem::from_explicit(s); },
            [](const auto& g) { return SetSystem::materialize(GeometryFamily{g}); },
        },
        family);
}

void InstanceFile::validate() const {
    std::visit(
        overloaded{
            [](const LineGeometry& g) {
                if (g.num_points < 1) bad("line needs at least one point");
                for (const auto& [lo, hi] : g.intervals)
                    if (lo < 0 || hi < lo || hi >= g.num_points)
                        bad("interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "] outside the point range");
            },
            [](const TreeGeometry& g) {
                if (g.num_vertices < 1) bad("tree needs at least one vertex");
                if (int(g.edges.size()) != g.num_vertices - 1)
                    bad("tree edge count must be one less than the vertex count");
                for (const auto& [a, b] : g.edges)
                    if (a < 0 || a >= g.num_vertices || b < 0 || b >= g.num_vertices || a == b)
                        bad("tree edge endpoint out of range");
                for (const auto& [u, v] : g.paths)
                    if (u < 0 || u >= g.num_vertices || v < 0 || v >= g.num_vertices)
                        bad("path endpoint out of range");
            },
            [](const RectGeometry& g) {
                for (const auto& r : g.rects) {
                    if (!std::isfinite(r.x1) || !std::isfinite(r.y1) || !std::isfinite(r.x2) ||
                        !std::isfinite(r.y2))
                        bad("rect coordinates must be finite");
                    if (!(r.x1 < r.x2) || !(r.y1 < r.y2)) bad("rect corners must be ordered");
                }
            },
            [](const DiskGeometry& g) {
                for (const auto& d : g.disks) {
                    if (!std::isfinite(d.cx) || !std::isfinite(d.cy) || !std::isfinite(d.r))
                        bad("disk parameters must be finite");
                    if (!(d.r > 0.0)) bad("disk radius must be positive");
                }
            },
            [](const SetSystemInstance& s) { s.validate(); },
        },
        family);
    const int n = n_tasks();
    if (int(tasks.size()) != n)
        bad("task count " + std::to_string(tasks.size()) + " does not match the family's " +
            std::to_string(n));
    if (target < 0 || target > n) bad("target " + std::to_string(target) + " out of range");
    if (known_opt && !(*known_opt >= 0.0 && std::isfinite(*known_opt)))
        bad("known_opt must be a finite nonnegative number");
}

InstanceFile gen_line_gap(int depth) {
    if (depth < 1 || depth > 20)
        throw ArgumentError("gen_line_gap: depth must be between 1 and 20");
    const int m = 1 << depth;
    LineGeometry geo;
    geo.num_points = m;
    std::vector<DiscreteDistribution> tasks;
    for (int d = 0; d <= depth; ++d) {
        const int width = m >> d;
        const double p = std::ldexp(1.0, -d);
        for (int i = 0; i < (1 << d); ++i) {
            geo.intervals.emplace_back(i * width, (i + 1) * width - 1);
            tasks.push_back(DiscreteDistribution::bernoulli(p));
        }
    }
    InstanceFile out;
    out.name = "line-gap-h" + std::to_string(depth);
    out.target = int(geo.intervals.size());
    out.family = std::move(geo);
    out.tasks = std::move(tasks);
    return out;
}

InstanceFile gen_general_gap(int group_size) {
    if (group_size < 2 || group_size > 6)
        throw ArgumentError("gen_general_gap: group size must be between 2 and 6");
    const int q = group_size;
    const int n = q * q;
    int m = 1;
    for (int i = 0; i < q; ++i) m *= q;
    // Resource i is the choice function given by the base-q digits of i:
    // digit g picks the member of group g.
    std::vector<std::vector<int>> lists(m);
    for (int i = 0; i < m; ++i) {
        std::vector<int>& row = lists[i];
        row.reserve(q);
        int rest = i;
        for (int g = 0; g < q; ++g) {
            row.push_back(g * q + rest % q);
            rest /= q;
        }
    }
    InstanceFile out;
    out.name = "general-gap-q" + std::to_string(q);
    out.family = SetSystemInstance::from_resource_tasks(n, std::move(lists));
    out.tasks.assign(n, DiscreteDistribution::bernoulli(1.0 / q));
    out.target = n;
    return out;
}

InstanceFile gen_random(FamilyKind family, int n, const std::string& profile, int target,
                        std::uint64_t seed) {
    if (n < 1) throw ArgumentError("gen_random: need at least one task");
    if (target < 1 || target > n) throw ArgumentError("gen_random: target out of range");
    const bool finite_profile = profile == "finite";
    if (!finite_profile && profile != "bernoulli")
        throw ArgumentError("gen_random: unknown profile '" + profile + "'");

    Rng rng(seed);
    InstanceFile out;
    switch (family) {
        case FamilyKind::kLine: {
            LineGeometry geo;
            geo.num_points = std::max(2, n);
            for (int j = 0; j < n; ++j) {
                int a = int(rng.next_below(std::uint64_t(geo.num_points)));
                int b = int(rng.next_below(std::uint64_t(geo.num_points)));
                if (a > b) std::swap(a, b);
                geo.intervals.emplace_back(a, b);
            }
            out.family = std::move(geo);
            break;
        }
        case FamilyKind::kTree: {
            TreeGeometry geo;
            geo.num_vertices = std::max(2, n);
            std::vector<int> seq(std::size_t(std::max(0, geo.num_vertices - 2)));
            for (int& s : seq) s = int(rng.next_below(std::uint64_t(geo.num_vertices)));
            geo.edges = decode_pruefer(seq, geo.num_vertices);
            for (int j = 0; j < n; ++j) {
                const int u = int(rng.next_below(std::uint64_t(geo.num_vertices)));
                int v = int(rng.next_below(std::uint64_t(geo.num_vertices)));
                if (v == u) v = (u + 1) % geo.num_vertices;
                geo.paths.emplace_back(u, v);
            }
            out.family = std::move(geo);
            break;
        }
        case FamilyKind::kRect: {
            RectGeometry geo;
            for (int j = 0; j < n; ++j) {
                double x1 = rng.next_double(), x2 = rng.next_double();
                double y1 = rng.next_double(), y2 = rng.next_double();
                if (x1 > x2) std::swap(x1, x2);
                if (y1 > y2) std::swap(y1, y2);
                if (x1 == x2) x2 = x1 + 0.01;
                if (y1 == y2) y2 = y1 + 0.01;
                geo.rects.push_back({x1, y1, x2, y2});
            }
            out.family = std::move(geo);
            break;
        }
        case FamilyKind::kDisk: {
            DiskGeometry geo;
            for (int j = 0; j < n; ++j) {
                const double cx = rng.next_double();
                const double cy = rng.next_double();
                const double r = std::exp(rng.next_range(std::log(0.05), std::log(0.5)));
                geo.disks.push_back({cx, cy, r});
            }
            out.family = std::move(geo);
            break;
        }
        default:
            throw ArgumentError("gen_random: no random generator for the explicit family");
    }

    for (int j = 0; j < n; ++j) {
        if (finite_profile) {
            const double v1 = rng.next_range(0.0, 0.4);
            const double v2 = v1 + rng.next_range(0.05, 0.5);
            const double v3 = v2 + rng.next_range(0.05, 0.6);
            const double p1 = rng.next_range(0.2, 0.5);
            const double p2 = rng.next_range(0.2, 0.4);
            out.tasks.push_back(
                DiscreteDistribution({{v1, p1}, {v2, p2}, {v3, 1.0 - p1 - p2}}));
        } else {
            out.tasks.push_back(DiscreteDistribution::bernoulli(rng.next_range(0.1, 0.9),
                                                                rng.next_range(0.3, 1.5)));
        }
    }
    out.target = target;
    out.name = "random-" + family_name(family) + "-n" + std::to_string(n) + "-t" +
               std::to_string(target) + "-s" + std::to_string(seed);
    return out;
}

std::string instance_to_json(const InstanceFile& inst) {
    ojson j;
    j["format"] = "genmakespan-instance";
    j["version"] = 1;
    j["name"] = inst.name;
    j["family"] = family_to_json(inst.family);
    j["target"] = inst.target;
    if (inst.known_opt) j["known_opt"] = *inst.known_opt;
    j["tasks"] = tasks_to_json(inst.tasks);
    return j.dump(2) + "\n";
}

InstanceFile instance_from_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception& e) {
        bad(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("top level must be an object");
    if (as_string(field(j, "format"), "format") != "genmakespan-instance")
        bad("format tag is not 'genmakespan-instance'");
    if (as_int(field(j, "version"), "version") != 1) bad("unsupported version");
    InstanceFile out;
    out.name = as_string(field(j, "name"), "name");
    out.family = family_from_json(field(j, "family"));
    out.target = as_int(field(j, "target"), "target");
    if (j.contains("known_opt")) out.known_opt = as_double(j.at("known_opt"), "known_opt");
    out.tasks = tasks_from_json(field(j, "tasks"));
    out.validate();
    return out;
}

void save_instance(const InstanceFile& inst, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open '" + path + "' for writing");
    f << instance_to_json(inst);
    if (!f) throw ValidationError("short write to '" + path + "'");
}

InstanceFile load_instance(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return instance_from_json(buf.str());
}

std::string result_to_json(const ResultFile& res) {
    ojson j;
    j["format"] = "genmakespan-result";
    j["version"] = 1;
    j["instance"] = res.instance_name;
    j["target"] = res.target;
    ojson cfg;
    cfg["b"] = res.options.b;
    cfg["alpha_bar"] = res.options.alpha_bar;
    cfg["fast_k"] = res.options.fast_k;
    cfg["max_cuts"] = res.options.max_cuts;
    cfg["repetitions"] = res.options.repetitions;
    cfg["samples"] = res.options.samples;
    cfg["final_samples"] = res.options.final_samples;
    cfg["threads"] = res.options.threads;
    cfg["seed"] = res.options.seed;
    j["config"] = std::move(cfg);
    j["chosen"] = res.chosen;
    j["guess"] = res.guess;
    ojson est;
    est["mean"] = res.estimate.mean;
    est["std_error"] = res.estimate.std_error;
    est["samples"] = res.estimate.samples;
    j["estimate"] = std::move(est);
    ojson rep;
    rep["partition_ok"] = res.report.partition_ok;
    rep["dangerous_bound_ok"] = res.report.dangerous_bound_ok;
    rep["fractional_ok"] = res.report.fractional_ok;
    rep["fractional_ratio"] = res.report.fractional_ratio;
    rep["assembled_ok"] = res.report.assembled_ok;
    rep["assembled_ratio"] = res.report.assembled_ratio;
    rep["chosen_load_ok"] = res.report.chosen_load_ok;
    rep["chosen_load_ratio"] = res.report.chosen_load_ratio;
    rep["exceptional_ok"] = res.report.exceptional_ok;
    rep["exceptional_total"] = res.report.exceptional_total;
    rep["selection_ok"] = res.report.selection_ok;
    rep["reward_met"] = res.report.reward_met;
    rep["attempts"] = res.report.attempts;
    rep["branch"] = res.report.branch;
    j["report"] = std::move(rep);
    ojson grid = ojson::array();
    for (const GuessOutcome& g : res.grid) {
        ojson row;
        row["guess"] = g.guess;
        row["feasible"] = g.feasible;
        row["selection_ok"] = g.selection_ok;
        row["estimate"] = g.estimate;
        grid.push_back(std::move(row));
    }
    j["grid"] = std::move(grid);
    return j.dump(2) + "\n";
}

void save_result(const ResultFile& res, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open '" + path + "' for writing");
    f << result_to_json(res);
    if (!f) throw ValidationError("short write to '" + path + "'");
}

} // namespace gms
