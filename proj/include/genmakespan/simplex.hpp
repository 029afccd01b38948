#pragma once

#include <vector>

namespace gms {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// maximize objective . x  subject to the rows and x >= 0.
// Upper bounds on variables are expressed as ordinary rows by callers.
struct LpProblem {
    enum class Sense { kLe, kGe, kEq };
    struct Row {
        std::vector<double> coeffs;  // size num_vars
        Sense sense = Sense::kLe;
        double rhs = 0.0;
    };
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<Row> rows;
};

struct LpResult {
    LpStatus status = LpStatus::kInfeasible;
    double objective_value = 0.0;
    std::vector<double> x;
};

// Swappable exact-LP interface. The cutting-plane layer only talks to this.
class LpSolver {
public:
    virtual ~LpSolver() = default;
    virtual LpResult solve(const LpProblem& problem) const = 0;
};

// Dense two-phase primal simplex over doubles, Bland's rule throughout.
// Deterministic: identical problems pivot identically. Intended for the
// desk-scale explicit LPs this library produces, not for large models.
class DenseSimplex : public LpSolver {
public:
    explicit DenseSimplex(double tol = 1e-9) : tol_(tol) {}
    LpResult solve(const LpProblem& problem) const override;

private:
    double tol_;
};

} // namespace gms
