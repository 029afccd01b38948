#include "genmakespan/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "genmakespan/errors.hpp"

namespace gms {

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms, int max_support)
    : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ValidationError("distribution: empty support");
    if (int(atoms_.size()) > max_support)
        throw ValidationError("distribution: support size " + std::to_string(atoms_.size()) +
                              " exceeds cap " + std::to_string(max_support));
    double total = 0.0;
    double prev = -std::numeric_limits<double>::infinity();
    for (const Atom& a : atoms_) {
        if (!std::isfinite(a.value) || a.value < 0.0)
            throw ValidationError("distribution: values must be finite and nonnegative");
        if (a.value <= prev)
            throw ValidationError("distribution: values must be strictly increasing");
        prev = a.value;
        if (!(a.prob > 0.0) || a.prob > 1.0 + 1e-9)
            throw ValidationError("distribution: probabilities must lie in (0, 1]");
        total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError("distribution: probabilities sum to " + std::to_string(total));
    if (total != 1.0) {
        // Renormalize so the left-to-right float sum lands on 1.0 exactly:
        // the last probability becomes 1 - prefix, which re-sums to 1 in
        // every rounding case, making reconstruction from stored atoms the
        // identity (serialized distributions round-trip bit-exactly).
        for (Atom& a : atoms_) a.prob /= total;
        double prefix = 0.0;
        for (std::size_t i = 0; i + 1 < atoms_.size(); ++i) prefix += atoms_[i].prob;
        const double last = 1.0 - prefix;
        if (!(last > 0.0))
            throw ValidationError("distribution: terminal probability vanishes under "
                                  "renormalization");
        atoms_.back().prob = last;
    }
}

DiscreteDistribution DiscreteDistribution::constant(double v) {
    return DiscreteDistribution({{v, 1.0}});
}

DiscreteDistribution DiscreteDistribution::bernoulli(double p, double value) {
    if (!(p > 0.0) || p > 1.0) throw ArgumentError("bernoulli: p must be in (0, 1]");
    if (value == 0.0) return constant(0.0);
    if (p == 1.0) return constant(value);
    return DiscreteDistribution({{0.0, 1.0 - p}, {value, p}});
}

bool DiscreteDistribution::operator==(const DiscreteDistribution& o) const {
    if (atoms_.size() != o.atoms_.size()) return false;
    for (size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].value != o.atoms_[i].value || atoms_[i].prob != o.atoms_[i].prob)
            return false;
    return true;
}

double DiscreteDistribution::mean() const {
    double m = 0.0;
    for (const Atom& a : atoms_) m += a.value * a.prob;
    return m;
}

double DiscreteDistribution::sample(Rng& rng) const {
    double u = rng.next_double();
    double cum = 0.0;
    for (const Atom& a : atoms_) {
        cum += a.prob;
        if (u < cum) return a.value;
    }
    return atoms_.back().value;  // u landed in the rounding slack
}

double effective_size(const DiscreteDistribution& x, std::int64_t k) {
    if (k < 1) throw ArgumentError("effective_size: k must be >= 1");
    if (k == 1) return x.mean();
    const double s = std::log(double(k));
    // log E[e^{s X}] via log-sum-exp over log(p_i) + s*v_i.
    double hi = -std::numeric_limits<double>::infinity();
    for (const Atom& a : x.atoms()) hi = std::max(hi, std::log(a.prob) + s * a.value);
    double acc = 0.0;
    for (const Atom& a : x.atoms()) acc += std::exp(std::log(a.prob) + s * a.value - hi);
    return (hi + std::log(acc)) / s;
}

SplitDistribution split_at_one(const DiscreteDistribution& x) {
    std::vector<Atom> kept;
    double extra_zero_mass = 0.0;
    double exceptional_mean = 0.0;
    for (const Atom& a : x.atoms()) {
        if (a.value > 1.0) {
            extra_zero_mass += a.prob;
            exceptional_mean += a.value * a.prob;
        } else {
            kept.push_back(a);
        }
    }
    if (extra_zero_mass > 0.0) {
        if (!kept.empty() && kept.front().value == 0.0) {
            kept.front().prob += extra_zero_mass;
        } else {
            kept.insert(kept.begin(), {0.0, extra_zero_mass});
        }
    }
    return {DiscreteDistribution(std::move(kept)), exceptional_mean};
}

DiscreteDistribution scale(const DiscreteDistribution& x, double b) {
    if (!(b > 0.0) || !std::isfinite(b)) throw ArgumentError("scale: b must be positive and finite");
    std::vector<Atom> atoms = x.atoms();
    for (Atom& a : atoms) a.value /= b;
    return DiscreteDistribution(std::move(atoms));
}

ScalingGrid build_scaling_grid(const std::vector<DiscreteDistribution>& tasks, int n) {
    if (tasks.empty()) throw ArgumentError("build_scaling_grid: no tasks");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const DiscreteDistribution& d : tasks) {
        double m = d.mean();
        hi = std::max(hi, m);
        if (m > 0.0) lo = std::min(lo, m);
    }
    if (!(hi > 0.0) || !std::isfinite(lo))
        throw ArgumentError("build_scaling_grid: needs a task with positive mean");

    ScalingGrid grid;
    grid.lower = lo;
    grid.upper = double(n) * hi;
    double g = lo;
    while (g < 2.0 * grid.upper) {
        grid.guesses.push_back(g);
        g *= 2.0;
    }
    grid.guesses.push_back(g);      // first guess >= 2U
    grid.guesses.push_back(2.0 * g);  // one extra, so OPT <= U is bracketed
    return grid;
}

} // namespace gms
