#include "emlp/facial.hpp"

#include <algorithm>

namespace emlp {

namespace {

using detail::Int8RowMatrix;
using detail::RowBounds;
using detail::Simplex;
using detail::SimplexResult;

struct ScaledPoint {
    std::vector<Rational> x;
    std::vector<BigInt> scaled; // x * denom, coprime integers
    BigInt denom = 1;
};

ScaledPoint scale_point(std::vector<Rational> x) {
    ScaledPoint p;
    BigInt lcm = 1;
    for (const auto& q : x) {
        if (q == 0) continue;
        BigInt den = denominator(q);
        lcm = lcm / gcd(lcm, den) * den;
    }
    p.scaled.resize(x.size());
    BigInt g = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        p.scaled[i] = numerator(x[i]) * (lcm / denominator(x[i]));
        g = gcd(g, p.scaled[i]);
    }
    if (g > 1) {
        for (auto& v : p.scaled) v /= g;
        p.denom = lcm / g;
    } else {
        p.denom = lcm;
    }
    p.x = std::move(x);
    return p;
}

/// Exact row activities of the scaled point (activity = denom * a_r·x).
std::vector<BigInt> exact_activities(const Int8RowMatrix& rows, const ScaledPoint& p) {
    const int m = rows.rows(), n = rows.cols();
    std::vector<BigInt> act(m);
    bool small = fits_int64(p.scaled, (std::int64_t(1) << 62) / std::max(1, n) - 1);
    if (small) {
        std::vector<std::int64_t> xs(n);
        for (int j = 0; j < n; ++j) xs[j] = p.scaled[j].convert_to<std::int64_t>();
        for (int r = 0; r < m; ++r) {
            const std::int8_t* row = rows.row(r);
            std::int64_t acc = 0;
            for (int j = 0; j < n; ++j)
                if (row[j]) acc += row[j] * xs[j];
            act[r] = acc;
        }
    } else {
        for (int r = 0; r < m; ++r) {
            const std::int8_t* row = rows.row(r);
            BigInt acc = 0;
            for (int j = 0; j < n; ++j)
                if (row[j]) acc += row[j] * p.scaled[j];
            act[r] = acc;
        }
    }
    return act;
}

struct ExactCheck {
    bool basis_ok = false;   // basis matrix nonsingular
    bool feasible = false;   // all row bounds hold exactly
    bool optimal = false;    // exact optimality conditions hold
    ScaledPoint point;
    std::vector<BigInt> activity;
    Rational objective = 0;
};

/// Re-derive the vertex of a simplex basis in exact arithmetic and check
/// feasibility and optimality of the proposed basis.
ExactCheck exact_check(const Int8RowMatrix& rows, const RowBounds<Rational>& b,
                       const std::vector<Rational>& c, const SimplexBasis& basis) {
    ExactCheck out;
    const int n = rows.cols();
    const int k = static_cast<int>(basis.basic_x.size());
    std::vector<std::vector<Rational>> kmat(k, std::vector<Rational>(k));
    std::vector<Rational> rhs(k);
    for (int a = 0; a < k; ++a) {
        for (int j = 0; j < k; ++j)
            kmat[a][j] = int(rows.entry(basis.act_row[a], basis.basic_x[j]));
        rhs[a] = basis.act_side[a] ? b.hi[basis.act_row[a]] : b.lo[basis.act_row[a]];
    }
    auto xb = solve_square(kmat, rhs);
    if (!xb) return out;
    out.basis_ok = true;
    std::vector<Rational> x(n, Rational(0));
    for (int j = 0; j < k; ++j) x[basis.basic_x[j]] = (*xb)[j];
    out.point = scale_point(std::move(x));
    out.activity = exact_activities(rows, out.point);
    // feasibility
    out.feasible = true;
    for (int r = 0; r < rows.rows() && out.feasible; ++r) {
        Rational v(out.activity[r]);
        v /= Rational(out.point.denom);
        if (b.lo_fin[r] && v < b.lo[r]) out.feasible = false;
        if (b.hi_fin[r] && v > b.hi[r]) out.feasible = false;
    }
    if (!out.feasible) return out;
    // optimality: K^T lambda = c_B, sign conditions, zero reduced costs
    std::vector<std::vector<Rational>> kt(k, std::vector<Rational>(k));
    for (int a = 0; a < k; ++a)
        for (int j = 0; j < k; ++j) kt[a][j] = kmat[j][a];
    std::vector<Rational> cb(k);
    for (int j = 0; j < k; ++j) cb[j] = c[basis.basic_x[j]];
    auto lam = solve_square(kt, cb);
    if (!lam) return out;
    out.optimal = true;
    for (int a = 0; a < k && out.optimal; ++a) {
        int w = basis.act_row[a];
        bool equality = b.lo_fin[w] && b.hi_fin[w] && b.lo[w] == b.hi[w];
        if (equality) continue;
        if (basis.act_side[a] == 0 && (*lam)[a] > 0) out.optimal = false;
        if (basis.act_side[a] == 1 && (*lam)[a] < 0) out.optimal = false;
    }
    if (out.optimal) {
        std::vector<bool> in_basis(n, false);
        for (int j : basis.basic_x) in_basis[j] = true;
        for (int j = 0; j < n && out.optimal; ++j) {
            if (in_basis[j]) continue;
            Rational r = c[j];
            for (int a = 0; a < k; ++a) {
                int e = rows.entry(basis.act_row[a], j);
                if (e) r -= (*lam)[a] * e;
            }
            if (r != 0) out.optimal = false;
        }
    }
    out.objective = 0;
    for (int j = 0; j < n; ++j)
        if (out.point.x[j] != 0) out.objective += c[j] * out.point.x[j];
    return out;
}

RowBounds<double> to_double_bounds(const RowBounds<Rational>& b) {
    RowBounds<double> d;
    const int m = static_cast<int>(b.lo.size());
    d.resize(m);
    for (int r = 0; r < m; ++r)
        d.set(r, b.lo_fin[r], to_double(b.lo[r]), b.hi_fin[r], to_double(b.hi[r]));
    return d;
}

/// Solve max c·x over the given rows/bounds, returning an exactly verified
/// optimal point.  Float search first, exact warm-started cleanup when the
/// proposed basis fails an exact check, exact from scratch as a last resort.
ExactCheck certified_solve(const Int8RowMatrix& rows, const RowBounds<Rational>& b,
                           const std::vector<Rational>& c, LPMode mode) {
    const int m = rows.rows(), n = rows.cols();
    const long max_iter = 5000 + 60L * (m + n);
    SimplexBasis warm;
    bool have_warm = false;
    if (mode == LPMode::Float) {
        auto bd = to_double_bounds(b);
        std::vector<double> cd(n);
        for (int j = 0; j < n; ++j) cd[j] = to_double(c[j]);
        Simplex<double, Int8RowMatrix> s(rows, cd, bd);
        auto res = s.run(PivotRule::Dantzig, max_iter);
        if (res.status == LPStatus::IterationLimit || res.status == LPStatus::NumericalFailure) {
            Simplex<double, Int8RowMatrix> s2(rows, cd, bd);
            res = s2.run(PivotRule::Bland, 4 * max_iter);
        }
        if (res.status == LPStatus::Optimal) {
            auto check = exact_check(rows, b, c, res.basis);
            if (check.basis_ok && check.feasible && check.optimal) return check;
            warm = res.basis;
            have_warm = check.basis_ok && check.feasible;
        } else if (res.status == LPStatus::Unbounded) {
            throw Error("facial LP unexpectedly unbounded");
        }
    }
    // exact cleanup
    std::vector<Rational> cr(c);
    Simplex<Rational, Int8RowMatrix> s(rows, cr, b);
    if (have_warm && !s.set_basis(warm))
        have_warm = false;
    if (!have_warm) {
        Simplex<Rational, Int8RowMatrix> fresh(rows, cr, b);
        auto res = fresh.run(PivotRule::Bland, 16 * max_iter);
        if (res.status != LPStatus::Optimal)
            throw Error("facial LP: exact solve failed");
        auto check = exact_check(rows, b, c, res.basis);
        if (!(check.basis_ok && check.feasible && check.optimal))
            throw Error("facial LP: exact verification failed after exact solve");
        return check;
    }
    auto res = s.run(PivotRule::Bland, 16 * max_iter);
    if (res.status != LPStatus::Optimal)
        throw Error("facial LP: exact cleanup failed");
    auto check = exact_check(rows, b, c, res.basis);
    if (!(check.basis_ok && check.feasible && check.optimal))
        throw Error("facial LP: exact verification failed after cleanup");
    return check;
}

} // namespace

FacialSolver::FacialSolver(const DesignMatrix& a, LPMode mode) : a_(a), mode_(mode) {
    if (a_.space()->size() > kExplicitCap)
        throw CapExceeded("facial solver: cell space exceeds the explicit cap");
}

void FacialSolver::ensure_rows() {
    if (rows_) return;
    const int m = static_cast<int>(a_.space()->size());
    const int n = a_.hrows();
    rows_.emplace(m, n);
    std::vector<std::int8_t> col;
    for (int i = 0; i < m; ++i) {
        a_.hcolumn(i, col);
        std::copy(col.begin(), col.end(), rows_->row(i));
    }
}

CellSet FacialSolver::closure(const CellSet& s) {
    return closure_impl_(s, nullptr);
}

FacialSet FacialSolver::closure_cert(const CellSet& s) {
    FaceCertificate cert;
    FacialSet out{closure_impl_(s, &cert), -1, std::nullopt};
    if (!out.cells.is_full() && !cert.gtilde.empty()) {
        if (!verify_certificate(a_, out.cells, cert))
            throw Error("facial closure: certificate verification failed");
        out.certificate = std::move(cert);
    }
    return out;
}

FacialSet FacialSolver::closure_full(const CellSet& s) {
    FacialSet out = closure_cert(s);
    out.dimension = face_dimension(a_, out.cells);
    return out;
}

CellSet FacialSolver::closure_impl_(const CellSet& s, FaceCertificate* cert_out) {
    if (!s.space()->same_vars(*a_.space())) throw Error("facial closure: space mismatch");
    if (s.is_empty()) throw Error("facial closure: empty seed set");
    ensure_rows();
    const int m = static_cast<int>(a_.space()->size());
    const int n = a_.hrows();

    // 0 = seed (equality rows), 1 = candidate, 2 = certified off-face
    std::vector<std::int8_t> state(m, 1);
    s.for_each([&](std::uint64_t i) { state[i] = 0; });

    std::vector<Rational> cert_sum(n, Rational(0));
    bool have_cert = false;

    for (;;) {
        std::int64_t n_candidates = 0;
        for (int i = 0; i < m; ++i)
            if (state[i] == 1) ++n_candidates;
        if (n_candidates == 0) break;

        // objective: sum of candidate columns
        std::vector<std::int64_t> csum(n, 0);
        for (int i = 0; i < m; ++i) {
            if (state[i] != 1) continue;
            const std::int8_t* row = rows_->row(i);
            for (int j = 0; j < n; ++j) csum[j] += row[j];
        }
        std::vector<Rational> c(n);
        for (int j = 0; j < n; ++j) c[j] = csum[j];

        RowBounds<Rational> b;
        b.resize(m);
        for (int i = 0; i < m; ++i) {
            if (state[i] == 0) b.set(i, true, 0, true, 0);
            else if (state[i] == 1) b.set(i, true, 0, true, 1);
            else b.set(i, true, 0, false, 0);
        }

        auto check = certified_solve(*rows_, b, c, mode_);
        if (check.objective == 0) break;

        std::int64_t removed = 0;
        for (int i = 0; i < m; ++i)
            if (state[i] == 1 && check.activity[i] > 0) { state[i] = 2; ++removed; }
        if (removed == 0)
            throw Error("facial closure: positive optimum without positive activities");
        if (cert_out) {
            for (int j = 0; j < n; ++j) cert_sum[j] += check.point.x[j];
            have_cert = true;
        }
    }

    CellSet f(s.space());
    for (int i = 0; i < m; ++i)
        if (state[i] != 2) f.insert(i);
    if (cert_out && have_cert) cert_out->gtilde = std::move(cert_sum);
    return f;
}

bool FacialSolver::is_facial(const CellSet& f, FaceCertificate* cert) {
    if (!f.space()->same_vars(*a_.space())) throw Error("is_facial: space mismatch");
    if (f.is_full()) return true; // improper face
    ensure_rows();
    const int m = static_cast<int>(a_.space()->size());
    const int n = a_.hrows();

    // variables (g̃, s): maximize s subject to
    //   <g̃, f̃_i> = 0            for i in F
    //   <g̃, f̃_i> - s >= 0, s <= 1 otherwise
    Int8RowMatrix rows(m + 1, n + 1);
    RowBounds<Rational> b;
    b.resize(m + 1);
    for (int i = 0; i < m; ++i) {
        std::copy(rows_->row(i), rows_->row(i) + n, rows.row(i));
        if (f.contains(i)) {
            b.set(i, true, 0, true, 0);
        } else {
            rows.row(i)[n] = -1;
            b.set(i, true, 0, false, 0);
        }
    }
    rows.row(m)[n] = 1;
    b.set(m, false, 0, true, 1);
    std::vector<Rational> c(n + 1, Rational(0));
    c[n] = 1;

    auto check = certified_solve(rows, b, c, mode_);
    if (check.objective <= 0) return false;
    if (cert) {
        cert->gtilde.assign(check.point.x.begin(), check.point.x.begin() + n);
        // normalize so off-face values are >= 1
        Rational s = check.point.x[n];
        for (auto& g : cert->gtilde) g /= s;
        if (!verify_certificate(a_, f, *cert))
            throw Error("is_facial: certificate verification failed");
    }
    return true;
}

FacialSet facial_closure(const DesignMatrix& a, const CellSet& s, LPMode mode) {
    FacialSolver solver(a, mode);
    return solver.closure_full(s);
}

Verdict facial_set_of_data(const DesignMatrix& a, const Counts& counts, LPMode mode) {
    auto support = counts.support_set(a.space());
    if (support.is_empty()) throw Error("facial set of data: no observations");
    Verdict v;
    v.facial_set = facial_closure(a, support, mode);
    v.mle_exists = v.facial_set.cells.is_full();
    v.method = "exact-lp";
    return v;
}

bool is_facial(const DesignMatrix& a, const CellSet& f, LPMode mode) {
    FacialSolver solver(a, mode);
    return solver.is_facial(f);
}

bool verify_certificate(const DesignMatrix& a, const CellSet& f, const FaceCertificate& cert) {
    if (static_cast<int>(cert.gtilde.size()) != a.hrows()) return false;
    auto p = scale_point(cert.gtilde);
    if (p.denom <= 0) return false;
    auto act = a.apply_homog(p.scaled);
    const std::uint64_t m = a.space()->size();
    for (std::uint64_t i = 0; i < m; ++i) {
        if (f.contains(i)) {
            if (act[i] != 0) return false;
        } else {
            if (act[i] <= 0) return false;
        }
    }
    return true;
}

} // namespace emlp
