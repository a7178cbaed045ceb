#include "emlp/linprog.hpp"

#include <algorithm>

namespace emlp {

namespace {

void validate(const LPProblem& p) {
    if (p.num_vars <= 0) throw Error("lp: no variables");
    if (static_cast<int>(p.objective.size()) != p.num_vars)
        throw Error("lp: objective length mismatch");
    for (const auto& row : p.rows) {
        if (static_cast<int>(row.coeffs.size()) != p.num_vars)
            throw Error("lp: row length mismatch");
        if (!row.lo && !row.hi) throw Error("lp: row without bounds");
        if (row.lo && row.hi && *row.lo > *row.hi) throw Error("lp: empty row interval");
    }
}

Rational exact_violation(const LPProblem& p, const std::vector<Rational>& x) {
    Rational worst = 0;
    for (const auto& row : p.rows) {
        Rational v = 0;
        for (int j = 0; j < p.num_vars; ++j)
            if (row.coeffs[j] != 0) v += row.coeffs[j] * x[j];
        if (row.lo && v < *row.lo) worst = std::max(worst, Rational(*row.lo - v));
        if (row.hi && v > *row.hi) worst = std::max(worst, Rational(v - *row.hi));
    }
    return worst;
}

} // namespace

LPSolution solve(const LPProblem& p, LPMode mode) {
    validate(p);
    const int m = static_cast<int>(p.rows.size());
    const int n = p.num_vars;
    const long max_iter = 2000 + 40L * (m + n);
    LPSolution sol;
    sol.mode = mode;

    if (mode == LPMode::Exact) {
        detail::DenseRowMatrix<Rational> a(m, n);
        detail::RowBounds<Rational> b;
        b.resize(m);
        for (int r = 0; r < m; ++r) {
            for (int j = 0; j < n; ++j) a.row(r)[j] = p.rows[r].coeffs[j];
            b.set(r, p.rows[r].lo.has_value(), p.rows[r].lo.value_or(0),
                  p.rows[r].hi.has_value(), p.rows[r].hi.value_or(0));
        }
        detail::Simplex<Rational, detail::DenseRowMatrix<Rational>> s(a, p.objective, b);
        auto res = s.run(PivotRule::Bland, max_iter);
        sol.status = res.status;
        sol.iterations = res.iterations;
        if (res.status == LPStatus::Optimal) {
            sol.x = std::move(res.x);
            sol.objective = res.objective;
        }
        return sol;
    }

    detail::DenseRowMatrix<double> a(m, n);
    detail::RowBounds<double> b;
    b.resize(m);
    std::vector<double> c(n);
    for (int j = 0; j < n; ++j) c[j] = to_double(p.objective[j]);
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j < n; ++j) a.row(r)[j] = to_double(p.rows[r].coeffs[j]);
        b.set(r, p.rows[r].lo.has_value(), p.rows[r].lo ? to_double(*p.rows[r].lo) : 0.0,
              p.rows[r].hi.has_value(), p.rows[r].hi ? to_double(*p.rows[r].hi) : 0.0);
    }
    detail::Simplex<double, detail::DenseRowMatrix<double>> s(a, c, b);
    auto res = s.run(PivotRule::Dantzig, max_iter);
    if (res.status == LPStatus::IterationLimit || res.status == LPStatus::NumericalFailure) {
        detail::Simplex<double, detail::DenseRowMatrix<double>> s2(a, c, b);
        res = s2.run(PivotRule::Bland, 4 * max_iter);
    }
    sol.status = res.status;
    sol.iterations = res.iterations;
    if (res.status == LPStatus::Optimal) {
        sol.x.resize(n);
        for (int j = 0; j < n; ++j) sol.x[j] = rational_from_double(res.x[j]);
        sol.objective = 0;
        for (int j = 0; j < n; ++j)
            if (sol.x[j] != 0) sol.objective += p.objective[j] * sol.x[j];
        sol.max_violation = exact_violation(p, sol.x);
    }
    return sol;
}

} // namespace emlp
