#include "emlp/design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace emlp {

DesignMatrix::DesignMatrix(Complex complex, Schema schema)
    : complex_(std::move(complex)), schema_(std::move(schema)) {
    if (complex_.num_vertices() != schema_.arity())
        throw Error("design: complex vertices and schema variables differ");
    for (int v = 0; v < schema_.arity(); ++v)
        if (complex_.vertex_name(v) != schema_.name(v))
            throw Error("design: vertex/variable order mismatch at position " +
                        std::to_string(v));
    space_ = CellSpace::full(schema_);
    faces_ = complex_.faces();
    for (const auto& face : faces_) {
        block_offset_.push_back(n_rows_);
        std::vector<int> stride(face.size());
        int count = 1;
        for (int k = static_cast<int>(face.size()) - 1; k >= 0; --k) {
            stride[k] = count;
            count *= schema_.levels(face[k]) - 1;
        }
        block_stride_.push_back(std::move(stride));
        n_rows_ += count;
        if (n_rows_ > (1 << 20)) throw Error("design: parameter count exceeds limit");
    }
}

int DesignMatrix::row_of(const std::vector<int>& face,
                         const std::vector<std::uint8_t>& levels) const {
    auto it = std::lower_bound(faces_.begin(), faces_.end(), face,
                               [](const auto& a, const auto& b) {
                                   if (a.size() != b.size()) return a.size() < b.size();
                                   return a < b;
                               });
    if (it == faces_.end() || *it != face) throw Error("design: no such face");
    std::size_t fi = it - faces_.begin();
    if (levels.size() != face.size()) throw Error("design: level tuple arity mismatch");
    int row = block_offset_[fi];
    for (std::size_t k = 0; k < face.size(); ++k) {
        if (levels[k] < 1 || levels[k] >= schema_.levels(face[k]))
            throw Error("design: level out of range");
        row += (levels[k] - 1) * block_stride_[fi][k];
    }
    return row;
}

std::pair<std::vector<int>, std::vector<std::uint8_t>> DesignMatrix::row_face_levels(int j) const {
    if (j < 0 || j >= n_rows_) throw Error("design: row index out of range");
    std::size_t fi = 0;
    while (fi + 1 < faces_.size() && block_offset_[fi + 1] <= j) ++fi;
    int rem = j - block_offset_[fi];
    const auto& face = faces_[fi];
    std::vector<std::uint8_t> levels(face.size());
    for (std::size_t k = 0; k < face.size(); ++k) {
        levels[k] = static_cast<std::uint8_t>(rem / block_stride_[fi][k] + 1);
        rem %= block_stride_[fi][k];
    }
    return {face, levels};
}

std::string DesignMatrix::row_label(int j) const {
    auto [face, levels] = row_face_levels(j);
    std::ostringstream os;
    os << "S(j)={";
    for (std::size_t k = 0; k < face.size(); ++k)
        os << (k ? "," : "") << schema_.name(face[k]);
    os << "}, levels=(";
    for (std::size_t k = 0; k < face.size(); ++k)
        os << (k ? "," : "") << int(levels[k]);
    os << ")";
    return os.str();
}

std::vector<std::string> DesignMatrix::row_labels() const {
    std::vector<std::string> out;
    out.reserve(n_rows_);
    for (int j = 0; j < n_rows_; ++j) out.push_back(row_label(j));
    return out;
}

void DesignMatrix::hcolumn(std::uint64_t cell_index, std::vector<std::int8_t>& out) const {
    out.assign(hrows(), 0);
    out[0] = 1;
    std::vector<std::uint8_t> digits;
    digits.resize(schema_.arity());
    for (int v = 0; v < schema_.arity(); ++v) {
        std::uint64_t r = schema_.levels(v);
        digits[v] = static_cast<std::uint8_t>(cell_index % r);
        cell_index /= r;
    }
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
        const auto& face = faces_[fi];
        int row = block_offset_[fi];
        bool active = true;
        for (std::size_t k = 0; k < face.size() && active; ++k) {
            std::uint8_t d = digits[face[k]];
            if (d == 0) active = false;
            else row += (d - 1) * block_stride_[fi][k];
        }
        if (active) out[1 + row] = 1;
    }
}

template <class T>
std::vector<T> DesignMatrix::apply_homog(const std::vector<T>& gtilde) const {
    if (static_cast<int>(gtilde.size()) != hrows())
        throw Error("design: parameter vector has wrong length");
    std::uint64_t n = space_->size();
    if (n > kExplicitCap) throw CapExceeded("design: cell space exceeds the explicit cap");
    std::vector<T> out(n, gtilde[0]);
    const int p = schema_.arity();
    std::vector<std::uint8_t> digits(p, 0);
    for (std::uint64_t idx = 0;; ++idx) {
        T& acc = out[idx];
        for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
            const auto& face = faces_[fi];
            int row = block_offset_[fi];
            bool active = true;
            for (std::size_t k = 0; k < face.size(); ++k) {
                std::uint8_t d = digits[face[k]];
                if (d == 0) { active = false; break; }
                row += (d - 1) * block_stride_[fi][k];
            }
            if (active) acc += gtilde[1 + row];
        }
        if (idx + 1 == n) break;
        for (int v = 0; v < p; ++v) {
            if (digits[v] + 1 < schema_.levels(v)) { ++digits[v]; break; }
            digits[v] = 0;
        }
    }
    return out;
}

template std::vector<double> DesignMatrix::apply_homog(const std::vector<double>&) const;
template std::vector<std::int64_t> DesignMatrix::apply_homog(const std::vector<std::int64_t>&) const;
template std::vector<BigInt> DesignMatrix::apply_homog(const std::vector<BigInt>&) const;
template std::vector<Rational> DesignMatrix::apply_homog(const std::vector<Rational>&) const;

template <class T>
std::vector<T> DesignMatrix::accumulate_weighted(const std::vector<T>& w) const {
    std::uint64_t n = space_->size();
    if (w.size() != n) throw Error("design: weight vector has wrong length");
    std::vector<T> out(n_rows_, T(0));
    const int p = schema_.arity();
    std::vector<std::uint8_t> digits(p, 0);
    for (std::uint64_t idx = 0;; ++idx) {
        if (w[idx] != T(0)) {
            for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
                const auto& face = faces_[fi];
                int row = block_offset_[fi];
                bool active = true;
                for (std::size_t k = 0; k < face.size(); ++k) {
                    std::uint8_t d = digits[face[k]];
                    if (d == 0) { active = false; break; }
                    row += (d - 1) * block_stride_[fi][k];
                }
                if (active) out[row] += w[idx];
            }
        }
        if (idx + 1 == n) break;
        for (int v = 0; v < p; ++v) {
            if (digits[v] + 1 < schema_.levels(v)) { ++digits[v]; break; }
            digits[v] = 0;
        }
    }
    return out;
}

template std::vector<double> DesignMatrix::accumulate_weighted(const std::vector<double>&) const;
template std::vector<Rational> DesignMatrix::accumulate_weighted(const std::vector<Rational>&) const;

SuffStat DesignMatrix::sufficient_statistic(const Counts& counts) const {
    if (!(counts.schema() == schema_)) throw Error("design: counts schema mismatch");
    SuffStat s;
    s.t.assign(n_rows_, 0);
    s.n = counts.total();
    for (const auto& [cell, cnt] : counts.cells()) {
        for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
            const auto& face = faces_[fi];
            int row = block_offset_[fi];
            bool active = true;
            for (std::size_t k = 0; k < face.size(); ++k) {
                std::uint8_t d = cell[face[k]];
                if (d == 0) { active = false; break; }
                row += (d - 1) * block_stride_[fi][k];
            }
            if (active) s.t[row] += cnt;
        }
    }
    return s;
}

std::vector<Rational> DesignMatrix::mean_statistic(const Counts& counts) const {
    SuffStat s = sufficient_statistic(counts);
    std::vector<Rational> out(n_rows_);
    for (int j = 0; j < n_rows_; ++j)
        out[j] = Rational(BigInt(s.t[j]), BigInt(s.n));
    return out;
}

int exact_rank_on(const DesignMatrix& a, const CellSet& f) {
    RationalEchelon ech(a.hrows());
    std::vector<std::int8_t> col;
    std::vector<Rational> v(a.hrows());
    bool done = false;
    f.for_each([&](std::uint64_t idx) {
        if (done || ech.rank() == a.hrows()) { done = true; return; }
        a.hcolumn(idx, col);
        for (int k = 0; k < a.hrows(); ++k) v[k] = int(col[k]);
        ech.insert(v);
    });
    return ech.rank();
}

int face_dimension(const DesignMatrix& a, const CellSet& f) {
    if (f.is_empty()) throw Error("face_dimension: empty cell set");
    return exact_rank_on(a, f) - 1;
}

std::vector<std::vector<Rational>> kernel_basis_on(const DesignMatrix& a, const CellSet& f) {
    RationalEchelon ech(a.hrows());
    std::vector<std::int8_t> col;
    std::vector<Rational> v(a.hrows());
    f.for_each([&](std::uint64_t idx) {
        a.hcolumn(idx, col);
        for (int k = 0; k < a.hrows(); ++k) v[k] = int(col[k]);
        ech.insert(v);
    });
    return ech.nullspace();
}

namespace {

/// Run f on each (sparse) basis vector of ker Ã, given the RREF of the rows
/// of Ã as vectors over I.  f receives (free_column, pivot coefficient list).
template <class F>
void for_each_kernel_vector(const DesignMatrix& a, F&& f) {
    std::uint64_t n = a.space()->size();
    if (n > kExplicitCap) throw CapExceeded("log-kernel check above explicit cap");
    RationalEchelon ech(static_cast<int>(n));
    std::vector<Rational> row(n);
    for (int j = 0; j < a.hrows(); ++j) {
        std::vector<Rational> unit(a.hrows(), Rational(0));
        unit[j] = 1;
        auto vals = a.apply_homog(unit);
        ech.insert(std::move(vals));
    }
    std::vector<bool> is_pivot(n, false);
    for (int p : ech.pivots()) is_pivot[p] = true;
    for (std::uint64_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        // kernel vector: 1 at free, -row_r[free] at each pivot
        std::vector<std::pair<std::uint64_t, Rational>> sparse;
        sparse.emplace_back(free, Rational(1));
        for (std::size_t r = 0; r < ech.rows().size(); ++r)
            if (ech.rows()[r][free] != 0)
                sparse.emplace_back(ech.pivots()[r], -ech.rows()[r][free]);
        f(sparse);
    }
}

} // namespace

bool log_kernel_membership(const DesignMatrix& a, const std::vector<Rational>& p) {
    if (p.size() != a.space()->size()) throw Error("log-kernel check: wrong vector length");
    for (const auto& q : p)
        if (q <= 0) throw Error("log-kernel check requires a strictly positive vector");
    bool ok = true;
    for_each_kernel_vector(a, [&](const std::vector<std::pair<std::uint64_t, Rational>>& v) {
        if (!ok) return;
        // exact multiplicative test: prod p_i^{v_i} = 1 with v scaled integer
        std::vector<Rational> coeffs;
        for (auto& [i, c] : v) coeffs.push_back(c);
        auto ints = scale_to_integers(coeffs);
        Rational num(1), den(1);
        for (std::size_t k = 0; k < v.size(); ++k) {
            long e = ints[k].convert_to<long>();
            const Rational& base = p[v[k].first];
            if (e > 0)
                for (long t = 0; t < e; ++t) num *= base;
            else
                for (long t = 0; t < -e; ++t) den *= base;
        }
        if (num != den) ok = false;
    });
    return ok;
}

bool log_kernel_membership(const DesignMatrix& a, const std::vector<double>& p, double tol) {
    if (p.size() != a.space()->size()) throw Error("log-kernel check: wrong vector length");
    std::vector<double> logp(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0)) throw Error("log-kernel check requires a strictly positive vector");
        logp[i] = std::log(p[i]);
    }
    bool ok = true;
    for_each_kernel_vector(a, [&](const std::vector<std::pair<std::uint64_t, Rational>>& v) {
        if (!ok) return;
        double acc = 0, scale = 1;
        for (auto& [i, c] : v) {
            double cd = to_double(c);
            acc += cd * logp[i];
            scale = std::max(scale, std::abs(cd * logp[i]));
        }
        if (std::abs(acc) > tol * scale) ok = false;
    });
    return ok;
}

} // namespace emlp
