#include "support/minisimplex.hpp"

#include <algorithm>

namespace emlp::testing {

namespace {

struct Tableau {
    int m, n;                              // constraint rows, total columns
    std::vector<std::vector<Rational>> t;  // (m+1) x (n+1); row 0 = objective
    std::vector<int> basis;                // basic column per constraint row

    void pivot(int row, int col) {
        Rational inv = t[row][col];
        for (auto& v : t[row]) v /= inv;
        for (int r = 0; r <= m; ++r) {
            if (r == row || t[r][col] == 0) continue;
            Rational f = t[r][col];
            for (int k = 0; k <= n; ++k)
                if (t[row][k] != 0) t[r][k] -= f * t[row][k];
        }
        basis[row - 1] = col;
    }

    // Bland: smallest improving column, smallest-ratio row with smallest
    // basis column on ties.  Returns false when optimal, throws-free
    // unbounded signalled via *unbounded.
    bool step(bool* unbounded) {
        int col = -1;
        for (int k = 0; k < n; ++k)
            if (t[0][k] > 0) { col = k; break; }
        if (col < 0) return false;
        int row = -1;
        Rational best;
        for (int r = 1; r <= m; ++r) {
            if (t[r][col] <= 0) continue;
            Rational ratio = t[r][n] / t[r][col];
            if (row < 0 || ratio < best ||
                (ratio == best && basis[r - 1] < basis[row - 1])) {
                row = r;
                best = ratio;
            }
        }
        if (row < 0) {
            *unbounded = true;
            return false;
        }
        pivot(row, col);
        return true;
    }
};

} // namespace

TableauResult tableau_solve(const std::vector<std::vector<Rational>>& a,
                            const std::vector<Rational>& b, const std::vector<Rational>& c) {
    const int m = static_cast<int>(a.size());
    const int n = m == 0 ? static_cast<int>(c.size()) : static_cast<int>(a[0].size());
    Tableau tab;
    tab.m = m;
    tab.n = n + m; // artificials appended
    tab.t.assign(m + 1, std::vector<Rational>(tab.n + 1, Rational(0)));
    tab.basis.resize(m);
    for (int r = 0; r < m; ++r) {
        Rational rhs = b[r];
        int sign = rhs < 0 ? -1 : 1;
        for (int k = 0; k < n; ++k) tab.t[r + 1][k] = sign * a[r][k];
        tab.t[r + 1][n + r] = 1;
        tab.t[r + 1][tab.n] = sign * rhs;
        tab.basis[r] = n + r;
    }
    // phase 1: maximize -(sum of artificials); objective row in terms of
    // nonbasic columns is the sum of the constraint rows
    for (int r = 1; r <= m; ++r)
        for (int k = 0; k <= tab.n; ++k)
            if (k < n || k == tab.n) tab.t[0][k] += tab.t[r][k];
    for (int r = 0; r < m; ++r) tab.t[0][n + r] = 0;
    bool unbounded = false;
    while (tab.step(&unbounded)) {}
    TableauResult res;
    if (tab.t[0][tab.n] != 0) return res; // infeasible
    // drive remaining artificial basics out
    for (int r = 1; r <= m; ++r) {
        if (tab.basis[r - 1] < n) continue;
        int col = -1;
        for (int k = 0; k < n; ++k)
            if (tab.t[r][k] != 0) { col = k; break; }
        if (col >= 0) tab.pivot(r, col);
    }
    res.feasible = true;
    // rebuild without artificial columns; rows still led by an artificial
    // are redundant (all-zero over the original columns) and are dropped
    Tableau t2;
    t2.n = n;
    t2.t.push_back(std::vector<Rational>(n + 1, Rational(0)));
    for (int r = 1; r <= m; ++r) {
        if (tab.basis[r - 1] >= n) continue;
        std::vector<Rational> row(tab.t[r].begin(), tab.t[r].begin() + n);
        row.push_back(tab.t[r][tab.n]);
        t2.t.push_back(std::move(row));
        t2.basis.push_back(tab.basis[r - 1]);
    }
    t2.m = static_cast<int>(t2.t.size()) - 1;
    // phase 2 objective, reduced against the basis
    for (int k = 0; k < n; ++k) t2.t[0][k] = c[k];
    for (int r = 1; r <= t2.m; ++r) {
        int bc = t2.basis[r - 1];
        if (t2.t[0][bc] != 0) {
            Rational f = t2.t[0][bc];
            for (int k = 0; k <= n; ++k)
                if (t2.t[r][k] != 0) t2.t[0][k] -= f * t2.t[r][k];
        }
    }
    unbounded = false;
    while (t2.step(&unbounded)) {}
    if (unbounded) {
        res.bounded = false;
        return res;
    }
    res.x.assign(n, Rational(0));
    for (int r = 0; r < t2.m; ++r) res.x[t2.basis[r]] = t2.t[r + 1][n];
    res.objective = 0;
    for (int k = 0; k < n; ++k)
        if (res.x[k] != 0) res.objective += c[k] * res.x[k];
    return res;
}

} // namespace emlp::testing
