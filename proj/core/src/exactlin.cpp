#include "emlp/exactlin.hpp"

#include <algorithm>

namespace emlp {

namespace {

int first_nonzero(const std::vector<Rational>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) return static_cast<int>(i);
    return -1;
}

} // namespace

std::vector<Rational> RationalEchelon::reduce(std::vector<Rational> v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Rational& c = v[pivots_[r]];
        if (c == 0) continue;
        Rational f = c; // pivot entries are 1
        for (int k = 0; k < dim_; ++k)
            if (rows_[r][k] != 0) v[k] -= f * rows_[r][k];
    }
    return v;
}

bool RationalEchelon::in_span(const std::vector<Rational>& v) const {
    auto res = reduce(v);
    return first_nonzero(res) < 0;
}

bool RationalEchelon::insert(std::vector<Rational> v) {
    v = reduce(std::move(v));
    int p = first_nonzero(v);
    if (p < 0) return false;
    Rational inv = v[p];
    for (auto& x : v) x /= inv;
    // keep the form reduced: clear column p in existing rows
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Rational& c = rows_[r][p];
        if (c == 0) continue;
        Rational f = c;
        for (int k = 0; k < dim_; ++k)
            if (v[k] != 0) rows_[r][k] -= f * v[k];
    }
    // insertion position: keep pivot columns increasing
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(v));
    pivots_.insert(pivots_.begin() + pos, p);
    return true;
}

std::vector<std::vector<Rational>> RationalEchelon::nullspace() const {
    std::vector<bool> is_pivot(dim_, false);
    for (int p : pivots_) is_pivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < dim_; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> k(dim_, Rational(0));
        k[f] = 1;
        for (std::size_t r = 0; r < rows_.size(); ++r)
            k[pivots_[r]] = -rows_[r][f];
        basis.push_back(std::move(k));
    }
    return basis;
}

std::optional<std::vector<Rational>> SpanTracker::insert_or_coords(
    const std::vector<Rational>& v) {
    std::vector<Rational> res = v;
    std::vector<Rational> combo(rows_.size(), Rational(0));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Rational& c = res[pivots_[r]];
        if (c == 0) continue;
        Rational f = c / rows_[r][pivots_[r]];
        for (int k = 0; k < dim_; ++k)
            if (rows_[r][k] != 0) res[k] -= f * rows_[r][k];
        for (std::size_t j = 0; j < transform_[r].size(); ++j)
            combo[j] += f * transform_[r][j];
    }
    int p = first_nonzero(res);
    if (p < 0) {
        combo.resize(rank(), Rational(0));
        return combo;
    }
    // accepted: res = v - sum combo_j basis_j, so as a combination of the
    // accepted originals the new row is e_new - combo
    std::vector<Rational> t(rank() + 1, Rational(0));
    for (std::size_t j = 0; j < combo.size(); ++j) t[j] = -combo[j];
    t[rank()] = 1;
    rows_.push_back(std::move(res));
    pivots_.push_back(p);
    for (auto& tr : transform_) tr.resize(rank() + 1, Rational(0));
    transform_.push_back(std::move(t));
    return std::nullopt;
}

std::optional<std::vector<Rational>> SpanTracker::coords(const std::vector<Rational>& v) const {
    std::vector<Rational> res = v;
    std::vector<Rational> combo(rows_.size(), Rational(0));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Rational& c = res[pivots_[r]];
        if (c == 0) continue;
        Rational f = c / rows_[r][pivots_[r]];
        for (int k = 0; k < dim_; ++k)
            if (rows_[r][k] != 0) res[k] -= f * rows_[r][k];
        for (std::size_t j = 0; j < transform_[r].size(); ++j)
            combo[j] += f * transform_[r][j];
    }
    if (first_nonzero(res) >= 0) return std::nullopt;
    combo.resize(rows_.size(), Rational(0));
    return combo;
}

std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
    const int n = static_cast<int>(b.size());
    std::vector<int> perm(n);
    for (int col = 0, row = 0; col < n && row < n; ++col, ++row) {
        int piv = -1;
        for (int r = row; r < n; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        if (piv < 0) return std::nullopt;
        std::swap(a[row], a[piv]);
        std::swap(b[row], b[piv]);
        Rational inv = a[row][col];
        for (int r = row + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            Rational f = a[r][col] / inv;
            for (int k = col; k < n; ++k)
                if (a[row][k] != 0) a[r][k] -= f * a[row][k];
            b[r] -= f * b[row];
        }
        perm[row] = col;
    }
    std::vector<Rational> x(n, Rational(0));
    for (int row = n - 1; row >= 0; --row) {
        Rational acc = b[row];
        for (int k = row + 1; k < n; ++k)
            if (a[row][k] != 0) acc -= a[row][k] * x[k];
        x[row] = acc / a[row][row];
    }
    return x;
}

std::vector<BigInt> scale_to_integers(const std::vector<Rational>& v) {
    BigInt lcm = 1;
    for (const auto& q : v) {
        if (q == 0) continue;
        BigInt den = denominator(q);
        lcm = lcm / gcd(lcm, den) * den;
    }
    std::vector<BigInt> out(v.size());
    BigInt g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = numerator(v[i]) * (lcm / denominator(v[i]));
        g = gcd(g, out[i]);
    }
    if (g > 1)
        for (auto& x : out) x /= g;
    return out;
}

bool fits_int64(const std::vector<BigInt>& v, std::int64_t bound) {
    BigInt b = bound;
    for (const auto& x : v)
        if (x > b || x < -b) return false;
    return true;
}

} // namespace emlp
