#include "genmakespan/simplex.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "genmakespan/errors.hpp"

namespace gms {

namespace {

// Tableau layout: work rows 0..m-1, then the phase-2 objective row, then
// (during phase 1 only) the phase-1 objective row. Column layout:
// structural | slack/surplus | artificial | rhs.
struct Tableau {
    std::vector<std::vector<double>> a;
    std::vector<int> basis;     // basic column per work row
    int m = 0;                  // work rows
    int cols = 0;               // columns excluding rhs
    int rhs = 0;                // rhs column index
    double tol = 1e-9;

    void pivot(int prow, int pcol) {
        double pv = a[prow][pcol];
        for (double& v : a[prow]) v /= pv;
        a[prow][pcol] = 1.0;  // kill residual FP noise on the pivot itself
        for (size_t r = 0; r < a.size(); ++r) {
            if (int(r) == prow) continue;
            double f = a[r][pcol];
            if (f == 0.0) continue;
            for (int c = 0; c <= rhs; ++c) a[r][c] -= f * a[prow][c];
            a[r][pcol] = 0.0;
        }
        basis[prow] = pcol;
    }

    // Bland: entering = lowest eligible column, leaving = min ratio with
    // lowest basic column as tie-break. Returns false when optimal.
    // Throws on unboundedness.
    bool step(int objrow, int allowed_cols) {
        int enter = -1;
        for (int j = 0; j < allowed_cols; ++j) {
            if (a[objrow][j] < -tol) { enter = j; break; }
        }
        if (enter < 0) return false;
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (a[i][enter] > tol) {
                double ratio = a[i][rhs] / a[i][enter];
                if (ratio < best - tol || (ratio < best + tol &&
                                           (leave < 0 || basis[i] < basis[leave]))) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) throw LpStatus::kUnbounded;
        pivot(leave, enter);
        return true;
    }
};

} // namespace

LpResult DenseSimplex::solve(const LpProblem& p) const {
    const int n = p.num_vars;
    if (int(p.objective.size()) != n) throw ArgumentError("simplex: objective size mismatch");
    for (const auto& row : p.rows)
        if (int(row.coeffs.size()) != n) throw ArgumentError("simplex: row size mismatch");

    // Normalize senses so every rhs is nonnegative.
    struct NRow { std::vector<double> c; LpProblem::Sense s; double b; };
    std::vector<NRow> rows;
    rows.reserve(p.rows.size());
    for (const auto& row : p.rows) {
        NRow r{row.coeffs, row.sense, row.rhs};
        if (r.b < 0.0) {
            for (double& v : r.c) v = -v;
            r.b = -r.b;
            if (r.s == LpProblem::Sense::kLe) r.s = LpProblem::Sense::kGe;
            else if (r.s == LpProblem::Sense::kGe) r.s = LpProblem::Sense::kLe;
        }
        rows.push_back(std::move(r));
    }

    const int m = int(rows.size());
    int n_slack = 0, n_art = 0;
    for (const auto& r : rows) {
        if (r.s != LpProblem::Sense::kEq) ++n_slack;
        if (r.s != LpProblem::Sense::kLe) ++n_art;
    }

    Tableau t;
    t.tol = tol_;
    t.m = m;
    t.cols = n + n_slack + n_art;
    t.rhs = t.cols;
    t.basis.assign(m, -1);
    t.a.assign(m + 2, std::vector<double>(t.cols + 1, 0.0));
    const int obj2 = m, obj1 = m + 1;
    const int art_begin = n + n_slack;

    int slack_at = n, art_at = art_begin;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t.a[i][j] = rows[i].c[j];
        t.a[i][t.rhs] = rows[i].b;
        switch (rows[i].s) {
            case LpProblem::Sense::kLe:
                t.a[i][slack_at] = 1.0;
                t.basis[i] = slack_at++;
                break;
            case LpProblem::Sense::kGe:
                t.a[i][slack_at] = -1.0;
                ++slack_at;
                t.a[i][art_at] = 1.0;
                t.basis[i] = art_at++;
                break;
            case LpProblem::Sense::kEq:
                t.a[i][art_at] = 1.0;
                t.basis[i] = art_at++;
                break;
        }
    }

    // Phase-2 objective row: z - c.x = 0.
    for (int j = 0; j < n; ++j) t.a[obj2][j] = -p.objective[j];
    // Phase-1 objective row: minimize the artificial sum; eliminate the
    // initially-basic artificials so reduced costs start consistent.
    for (int j = art_begin; j < t.cols; ++j) t.a[obj1][j] = 1.0;
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] >= art_begin) {
            for (int c = 0; c <= t.rhs; ++c) t.a[obj1][c] -= t.a[i][c];
        }
    }

    const long max_pivots = 200000;
    long pivots = 0;
    LpResult out;

    try {
        if (n_art > 0) {
            while (t.step(obj1, art_begin)) {
                if (++pivots > max_pivots)
                    throw ResourceLimitError("simplex: phase-1 pivot cap exceeded");
            }
            double infeas = -t.a[obj1][t.rhs];
            if (infeas > tol_ * 10.0) {
                out.status = LpStatus::kInfeasible;
                return out;
            }
            // Drive leftover degenerate artificials out of the basis.
            for (int i = 0; i < m; ++i) {
                if (t.basis[i] < art_begin) continue;
                int piv = -1;
                for (int j = 0; j < art_begin; ++j) {
                    if (std::abs(t.a[i][j]) > tol_) { piv = j; break; }
                }
                if (piv >= 0) {
                    t.pivot(i, piv);
                } else {
                    // Redundant row: everything in it is zero. Park the
                    // artificial at zero; it can never re-enter play since
                    // entering columns stop at art_begin below.
                    t.a[i][t.rhs] = 0.0;
                }
            }
        }
        while (t.step(obj2, art_begin)) {
            if (++pivots > max_pivots)
                throw ResourceLimitError("simplex: phase-2 pivot cap exceeded");
        }
    } catch (LpStatus s) {
        out.status = s;
        return out;
    }

    out.status = LpStatus::kOptimal;
    out.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < n) out.x[t.basis[i]] = t.a[i][t.rhs];
    }
    for (double& v : out.x) {
        if (std::abs(v) < tol_) v = 0.0;
    }
    out.objective_value = 0.0;
    for (int j = 0; j < n; ++j) out.objective_value += p.objective[j] * out.x[j];
    return out;
}

} // namespace gms
