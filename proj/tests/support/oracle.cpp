#include "support/oracle.hpp"

#include "support/minisimplex.hpp"

namespace emlp::testing {

CellSet bruteforce_facial(const DesignMatrix& a, const CellSet& s) {
    const std::uint64_t m = a.space()->size();
    if (m > 4096) throw Error("oracle cap exceeded");
    if (s.is_empty()) throw Error("oracle: empty seed set");

    // constraint matrix: Ã λ = x̃ with x̃ the barycenter of the S columns
    const int rows = a.hrows();
    std::vector<std::vector<Rational>> mat(rows, std::vector<Rational>(m, Rational(0)));
    std::vector<std::int8_t> col;
    for (std::uint64_t i = 0; i < m; ++i) {
        a.hcolumn(i, col);
        for (int r = 0; r < rows; ++r) mat[r][i] = int(col[r]);
    }
    std::vector<Rational> x(rows, Rational(0));
    s.for_each([&](std::uint64_t i) {
        for (int r = 0; r < rows; ++r) x[r] += mat[r][i];
    });
    Rational w(1, BigInt(s.size()));
    for (auto& v : x) v *= w;

    CellSet f = s;
    for (std::uint64_t i = 0; i < m; ++i) {
        if (f.contains(i)) continue;
        std::vector<Rational> c(m, Rational(0));
        c[i] = 1;
        auto res = tableau_solve(mat, x, c);
        if (!res.feasible) throw Error("oracle: barycenter representation infeasible");
        if (!res.bounded) throw Error("oracle: unexpectedly unbounded");
        if (res.objective > 0)
            for (std::uint64_t k = 0; k < m; ++k)
                if (res.x[k] > 0) f.insert(k);
    }
    return f;
}

} // namespace emlp::testing
