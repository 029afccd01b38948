#pragma once

#include <cstdint>
#include <vector>

#include "genmakespan/rng.hpp"

namespace gms {

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

// Finite, nonnegative discrete distribution.
//
// Invariants after construction:
//   - support values are finite, >= 0, strictly increasing
//   - probabilities are in (0, 1] and sum to 1 exactly (input may be off by
//     up to 1e-9; it is renormalized)
//   - 1 <= support size <= max_support
class DiscreteDistribution {
public:
    static constexpr int kDefaultMaxSupport = 10000;

    explicit DiscreteDistribution(std::vector<Atom> atoms,
                                  int max_support = kDefaultMaxSupport);

    // Point mass at v.
    static DiscreteDistribution constant(double v);

    // Value `scale` with probability p, else 0. p in (0,1].
    static DiscreteDistribution bernoulli(double p, double scale = 1.0);

    const std::vector<Atom>& atoms() const { return atoms_; }
    int support_size() const { return int(atoms_.size()); }
    double mean() const;
    double max_value() const { return atoms_.back().value; }

    // Inverse-CDF draw; consumes exactly one next_double().
    double sample(Rng& rng) const;

    bool operator==(const DiscreteDistribution& o) const;

private:
    std::vector<Atom> atoms_;
};

// Effective size: for k >= 2,
//
//   beta_k(X) = log_k E[k^X]  =  (1/ln k) * ln E[e^{(ln k) X}],
//
// and beta_1(X) = E[X]. Computed in log-space (log-sum-exp) so large k
// (up to m^2 and beyond) cannot overflow. Satisfies
// E[X] <= beta_k(X) <= max(X), and is nondecreasing in k.
double effective_size(const DiscreteDistribution& x, std::int64_t k);

// X split at the truncation threshold 1: the truncated part keeps the mass
// on values <= 1 and moves the mass of values > 1 to value 0; the
// exceptional part is summarized by its contribution to the mean.
// E[X] = E[truncated] + exceptional_mean.
struct SplitDistribution {
    DiscreteDistribution truncated;
    double exceptional_mean = 0.0;
};

SplitDistribution split_at_one(const DiscreteDistribution& x);

// X/b pointwise. b > 0.
DiscreteDistribution scale(const DiscreteDistribution& x, double b);

// Doubling grid of makespan guesses. With L = min positive task mean and
// U = n * max task mean, guesses run L, 2L, 4L, ... one step past the first
// value >= 2U, so some guess B satisfies B/2 <= OPT <= B whenever
// L <= OPT <= U.
struct ScalingGrid {
    double lower = 0.0;   // L
    double upper = 0.0;   // U
    std::vector<double> guesses;
};

// Zero-mean tasks are ignored for L (callers select them for free).
// Requires at least one task with positive mean.
ScalingGrid build_scaling_grid(const std::vector<DiscreteDistribution>& tasks, int n);

} // namespace gms
