#pragma once

#include <cstdint>
#include <limits>
#include <type_traits>
#include <vector>

#include "emlp/rational.hpp"

namespace emlp {

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };
enum class PivotRule { Dantzig, Bland };

/// Final basis of a simplex run: basic structural variables and the active
/// rows (nonbasic slacks) pinned at a bound, positionally aligned.
struct SimplexBasis {
    std::vector<int> basic_x;
    std::vector<int> act_row;
    std::vector<std::int8_t> act_side; // 0 = lower bound, 1 = upper bound
};

namespace detail {

/// Dense row-major 0/1(/-1) constraint matrix.
class Int8RowMatrix {
public:
    Int8RowMatrix(int m, int n) : m_(m), n_(n), a_(std::size_t(m) * n, 0) {}
    int rows() const { return m_; }
    int cols() const { return n_; }
    std::int8_t* row(int r) { return a_.data() + std::size_t(r) * n_; }
    const std::int8_t* row(int r) const { return a_.data() + std::size_t(r) * n_; }
    std::int8_t entry(int r, int j) const { return a_[std::size_t(r) * n_ + j]; }

private:
    int m_, n_;
    std::vector<std::int8_t> a_;
};

template <class S>
class DenseRowMatrix {
public:
    DenseRowMatrix(int m, int n) : m_(m), n_(n), a_(std::size_t(m) * n, S(0)) {}
    int rows() const { return m_; }
    int cols() const { return n_; }
    S* row(int r) { return a_.data() + std::size_t(r) * n_; }
    const S* row(int r) const { return a_.data() + std::size_t(r) * n_; }
    S entry(int r, int j) const { return a_[std::size_t(r) * n_ + j]; }

private:
    int m_, n_;
    std::vector<S> a_;
};

/// Row bounds; infinities tracked by flags.
template <class S>
struct RowBounds {
    std::vector<S> lo, hi;
    std::vector<std::uint8_t> lo_fin, hi_fin;

    void resize(int m) {
        lo.assign(m, S(0));
        hi.assign(m, S(0));
        lo_fin.assign(m, 0);
        hi_fin.assign(m, 0);
    }
    void set(int r, bool lofin, S lov, bool hifin, S hiv) {
        lo_fin[r] = lofin;
        lo[r] = lov;
        hi_fin[r] = hifin;
        hi[r] = hiv;
    }
};

template <class S>
struct LU {
    int n = 0;
    std::vector<S> a;
    std::vector<int> piv;

    bool factor(std::vector<S> m, int dim) {
        n = dim;
        a = std::move(m);
        piv.resize(n);
        for (int col = 0; col < n; ++col) {
            int p = -1;
            if constexpr (std::is_floating_point_v<S>) {
                S best = 0;
                for (int r = col; r < n; ++r) {
                    S v = std::abs(a[std::size_t(r) * n + col]);
                    if (v > best) { best = v; p = r; }
                }
                if (p < 0 || best < std::numeric_limits<S>::min() * 1e4) return false;
            } else {
                for (int r = col; r < n; ++r)
                    if (a[std::size_t(r) * n + col] != 0) { p = r; break; }
                if (p < 0) return false;
            }
            piv[col] = p;
            if (p != col)
                for (int k = 0; k < n; ++k)
                    std::swap(a[std::size_t(col) * n + k], a[std::size_t(p) * n + k]);
            S inv = a[std::size_t(col) * n + col];
            for (int r = col + 1; r < n; ++r) {
                S& f = a[std::size_t(r) * n + col];
                if (f == S(0)) continue;
                f = f / inv;
                for (int k = col + 1; k < n; ++k)
                    a[std::size_t(r) * n + k] -= f * a[std::size_t(col) * n + k];
            }
        }
        return true;
    }

    // A x = b (in place)
    void solve(std::vector<S>& b) const {
        for (int i = 0; i < n; ++i)
            if (piv[i] != i) std::swap(b[i], b[piv[i]]);
        for (int i = 0; i < n; ++i) {
            S acc = b[i];
            for (int k = 0; k < i; ++k)
                if (a[std::size_t(i) * n + k] != S(0)) acc -= a[std::size_t(i) * n + k] * b[k];
            b[i] = acc;
        }
        for (int i = n - 1; i >= 0; --i) {
            S acc = b[i];
            for (int k = i + 1; k < n; ++k)
                if (a[std::size_t(i) * n + k] != S(0)) acc -= a[std::size_t(i) * n + k] * b[k];
            b[i] = acc / a[std::size_t(i) * n + i];
        }
    }

    // A^T x = b (in place)
    void solve_transpose(std::vector<S>& b) const {
        // A = P^T L U, so A^T = U^T L^T P; solve U^T z = b, L^T w = z, x = P^T w
        for (int i = 0; i < n; ++i) {
            S acc = b[i];
            for (int k = 0; k < i; ++k)
                if (a[std::size_t(k) * n + i] != S(0)) acc -= a[std::size_t(k) * n + i] * b[k];
            b[i] = acc / a[std::size_t(i) * n + i];
        }
        for (int i = n - 1; i >= 0; --i) {
            S acc = b[i];
            for (int k = i + 1; k < n; ++k)
                if (a[std::size_t(k) * n + i] != S(0)) acc -= a[std::size_t(k) * n + i] * b[k];
            b[i] = acc;
        }
        for (int i = n - 1; i >= 0; --i)
            if (piv[i] != i) std::swap(b[i], b[piv[i]]);
    }
};

template <class S>
constexpr S simplex_eps() {
    if constexpr (std::is_floating_point_v<S>) return S(1e-9);
    else return S(0);
}

template <class S>
struct SimplexResult {
    LPStatus status = LPStatus::NumericalFailure;
    std::vector<S> x;
    S objective = S(0);
    long iterations = 0;
    SimplexBasis basis;
};

/// Active-set simplex for: maximize c^T x subject to lo <= A x <= hi, with
/// free structural variables.  Designed for few variables and many rows.
/// x = 0 with an empty active set is the starting point; rows violated at 0
/// are repaired by a phase-1 loop that maximizes each violated row activity
/// toward its bound.
template <class S, class M>
class Simplex {
public:
    Simplex(const M& a, std::vector<S> c, const RowBounds<S>& b)
        : a_(a), c_(std::move(c)), b_(b), m_(a.rows()), n_(a.cols()) {
        x_.assign(n_, S(0));
        y_.assign(m_, S(0));
        x_basic_.assign(n_, 0);
        row_state_.assign(m_, INACTIVE);
    }

    /// Install a warm-start basis.  Returns false if the basis matrix is
    /// singular.  Rows that end up violated are left to phase 1.
    bool set_basis(const SimplexBasis& basis) {
        basic_x_ = basis.basic_x;
        act_row_ = basis.act_row;
        act_side_.assign(basis.act_side.begin(), basis.act_side.end());
        std::fill(x_basic_.begin(), x_basic_.end(), 0);
        std::fill(row_state_.begin(), row_state_.end(), static_cast<std::int8_t>(INACTIVE));
        for (int j : basic_x_) x_basic_[j] = 1;
        for (std::size_t a = 0; a < act_row_.size(); ++a)
            row_state_[act_row_[a]] = act_side_[a] ? ACTIVE_HI : ACTIVE_LO;
        if (!refactor()) return false;
        // basic structural values from the pinned rows
        std::vector<S> rhs(act_row_.size());
        for (std::size_t a = 0; a < act_row_.size(); ++a)
            rhs[a] = act_side_[a] ? b_.hi[act_row_[a]] : b_.lo[act_row_[a]];
        lu_.solve(rhs);
        std::fill(x_.begin(), x_.end(), S(0));
        for (std::size_t b = 0; b < basic_x_.size(); ++b) x_[basic_x_[b]] = rhs[b];
        recompute_y();
        return true;
    }

    /// Provide exact row activities computed externally (avoids an O(mn)
    /// pass in exact arithmetic when the caller has a faster route).
    void set_activities(std::vector<S> y) { y_ = std::move(y); }

    SimplexResult<S> run(PivotRule rule, long max_iter) {
        SimplexResult<S> res;
        long iters = 0;
        // phase 1: repair rows violated at the current point, one at a time;
        // all still-violated rows are kept out of the ratio test meanwhile
        for (;;) {
            int bad = -1;
            std::int8_t side = 0;
            for (int r = 0; r < m_; ++r) {
                if (row_state_[r] == ACTIVE_LO || row_state_[r] == ACTIVE_HI) continue;
                bool vlo = b_.lo_fin[r] && y_[r] < b_.lo[r] - feas_eps();
                bool vhi = b_.hi_fin[r] && y_[r] > b_.hi[r] + feas_eps();
                row_state_[r] = (vlo || vhi) ? IGNORED : INACTIVE;
                if ((vlo || vhi) && bad < 0) {
                    bad = r;
                    side = vhi ? 1 : 0;
                }
            }
            if (bad < 0) break;
            LPStatus st = iterate(rule, max_iter, iters, bad, side);
            if (st == LPStatus::Infeasible || st == LPStatus::IterationLimit ||
                st == LPStatus::NumericalFailure) {
                res.status = st;
                res.iterations = iters;
                return res;
            }
        }
        // phase 2
        LPStatus st = iterate(rule, max_iter, iters, -1, 0);
        res.status = st;
        res.iterations = iters;
        res.x = x_;
        res.objective = S(0);
        for (int j = 0; j < n_; ++j)
            if (x_[j] != S(0)) res.objective += c_[j] * x_[j];
        res.basis.basic_x = basic_x_;
        res.basis.act_row = act_row_;
        res.basis.act_side.assign(act_side_.begin(), act_side_.end());
        return res;
    }

    const std::vector<S>& activities() const { return y_; }

private:
    enum RowState : std::int8_t { INACTIVE = 0, ACTIVE_LO = 1, ACTIVE_HI = 2, IGNORED = 3 };

    const M& a_;
    std::vector<S> c_;
    const RowBounds<S>& b_;
    int m_, n_;

    std::vector<int> basic_x_, act_row_;
    std::vector<std::int8_t> act_side_;
    std::vector<std::int8_t> x_basic_;
    std::vector<std::int8_t> row_state_;
    std::vector<S> x_, y_;
    LU<S> lu_;
    long since_refresh_ = 0;

    static S feas_eps() { return simplex_eps<S>(); }

    bool refactor() {
        const int k = static_cast<int>(basic_x_.size());
        std::vector<S> kmat(std::size_t(k) * k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                kmat[std::size_t(a) * k + b] = S(a_.entry(act_row_[a], basic_x_[b]));
        return lu_.factor(std::move(kmat), k);
    }

    void recompute_y() {
        std::vector<std::pair<int, S>> sup;
        for (int j = 0; j < n_; ++j)
            if (x_[j] != S(0)) sup.emplace_back(j, x_[j]);
        for (int r = 0; r < m_; ++r) {
            const auto* row = a_.row(r);
            S acc(0);
            for (const auto& [j, v] : sup)
                if (row[j] != 0) acc += S(row[j]) * v;
            y_[r] = acc;
        }
    }

    /// One simplex loop.  When repair_row >= 0, the objective is to push
    /// that row's activity toward its violated bound (side 0: up to lo,
    /// side 1: down to hi); the loop ends when the row reaches the bound
    /// (it is then activated) or the push tops out (infeasible).
    LPStatus iterate(PivotRule rule, long max_iter, long& iters, int repair_row,
                     std::int8_t repair_side) {
        const S eps = feas_eps();
        auto obj_coeff = [&](int j) -> S {
            if (repair_row < 0) return c_[j];
            S v = S(a_.entry(repair_row, j));
            return repair_side ? -v : v;
        };
        for (;;) {
            if (++iters > max_iter) return LPStatus::IterationLimit;
            const int k = static_cast<int>(basic_x_.size());
            // multipliers
            std::vector<S> lambda(k);
            if (k > 0) {
                for (int b = 0; b < k; ++b) lambda[b] = obj_coeff(basic_x_[b]);
                lu_.solve_transpose(lambda);
            }
            // pricing
            int enter_x = -1, release_pos = -1;
            int enter_sign = 0;
            S best_rate(0);
            long best_index = -1;
            auto consider = [&](S rate, long index, int ex, int es, int rp) {
                bool better;
                if (rule == PivotRule::Bland)
                    better = best_index < 0 || index < best_index;
                else
                    better = rate > best_rate ||
                             (rate == best_rate && (best_index < 0 || index < best_index));
                if (better) {
                    best_rate = rate;
                    best_index = index;
                    enter_x = ex;
                    enter_sign = es;
                    release_pos = rp;
                }
            };
            for (int j = 0; j < n_; ++j) {
                if (x_basic_[j]) continue;
                S r = obj_coeff(j);
                for (int a = 0; a < k; ++a) {
                    S e = S(a_.entry(act_row_[a], j));
                    if (e != S(0)) r -= lambda[a] * e;
                }
                if (r > eps) consider(r, j, j, +1, -1);
                else if (r < -eps) consider(-r, j, j, -1, -1);
            }
            for (int a = 0; a < k; ++a) {
                int w = act_row_[a];
                if (b_.lo_fin[w] && b_.hi_fin[w] && b_.lo[w] == b_.hi[w]) continue; // equality
                if (act_side_[a] == 0 && lambda[a] > eps)
                    consider(lambda[a], long(n_) + w, -1, 0, a);
                else if (act_side_[a] == 1 && lambda[a] < -eps)
                    consider(-lambda[a], long(n_) + w, -1, 0, a);
            }
            if (best_index < 0) {
                // optimal for the current objective
                if (repair_row >= 0) return LPStatus::Infeasible;
                return LPStatus::Optimal;
            }

            // direction
            std::vector<std::pair<int, S>> dsup;
            if (enter_x >= 0) {
                std::vector<S> rhs(k);
                for (int a = 0; a < k; ++a)
                    rhs[a] = S(-enter_sign) * S(a_.entry(act_row_[a], enter_x));
                if (k > 0) lu_.solve(rhs);
                dsup.emplace_back(enter_x, S(enter_sign));
                for (int b = 0; b < k; ++b)
                    if (rhs[b] != S(0)) dsup.emplace_back(basic_x_[b], rhs[b]);
            } else {
                std::vector<S> rhs(k, S(0));
                rhs[release_pos] = act_side_[release_pos] ? S(-1) : S(1);
                lu_.solve(rhs);
                for (int b = 0; b < k; ++b)
                    if (rhs[b] != S(0)) dsup.emplace_back(basic_x_[b], rhs[b]);
            }

            // activity rates and ratio test
            std::vector<S> ydot(m_, S(0));
            for (int r = 0; r < m_; ++r) {
                const auto* row = a_.row(r);
                S acc(0);
                for (const auto& [j, v] : dsup)
                    if (row[j] != 0) acc += S(row[j]) * v;
                ydot[r] = acc;
            }
            bool has_block = false, repair_hit = false;
            S best_t(0);
            int block_row = -1;
            std::int8_t block_side = 0;
            auto offer_block = [&](S t, int r, std::int8_t side) {
                if (t < S(0)) t = S(0);
                if (!has_block || t < best_t ||
                    (t == best_t && (block_row < 0 || r < block_row))) {
                    has_block = true;
                    best_t = t;
                    block_row = r;
                    block_side = side;
                }
            };
            for (int r = 0; r < m_; ++r) {
                if (row_state_[r] != INACTIVE) continue;
                if (ydot[r] > eps && b_.hi_fin[r])
                    offer_block((b_.hi[r] - y_[r]) / ydot[r], r, 1);
                else if (ydot[r] < -eps && b_.lo_fin[r])
                    offer_block((b_.lo[r] - y_[r]) / ydot[r], r, 0);
            }
            if (release_pos >= 0) {
                // released row may travel to its other bound
                int w = act_row_[release_pos];
                if (act_side_[release_pos] == 0 && b_.hi_fin[w] && ydot[w] > eps)
                    offer_block((b_.hi[w] - y_[w]) / ydot[w], w, 1);
                else if (act_side_[release_pos] == 1 && b_.lo_fin[w] && ydot[w] < -eps)
                    offer_block((b_.lo[w] - y_[w]) / ydot[w], w, 0);
            }
            if (repair_row >= 0) {
                // stop as soon as the repaired row reaches its bound
                S target = repair_side ? b_.hi[repair_row] : b_.lo[repair_row];
                if (ydot[repair_row] != S(0)) {
                    S t = (target - y_[repair_row]) / ydot[repair_row];
                    if (t >= S(0) && (!has_block || t <= best_t)) {
                        has_block = true;
                        repair_hit = true;
                        best_t = t;
                        block_row = repair_row;
                        block_side = repair_side;
                    }
                }
            }
            if (!has_block) return LPStatus::Unbounded;

            // move
            if (best_t != S(0)) {
                for (const auto& [j, v] : dsup) x_[j] += best_t * v;
                for (int r = 0; r < m_; ++r)
                    if (ydot[r] != S(0)) y_[r] += best_t * ydot[r];
            }
            // pivot bookkeeping
            if (enter_x >= 0) {
                basic_x_.push_back(enter_x);
                x_basic_[enter_x] = 1;
                act_row_.push_back(block_row);
                act_side_.push_back(block_side);
            } else {
                int w = act_row_[release_pos];
                if (block_row == w) {
                    act_side_[release_pos] = block_side; // bound flip
                } else {
                    row_state_[w] = INACTIVE;
                    act_row_[release_pos] = block_row;
                    act_side_[release_pos] = block_side;
                }
            }
            row_state_[block_row] = block_side ? ACTIVE_HI : ACTIVE_LO;
            y_[block_row] = block_side ? b_.hi[block_row] : b_.lo[block_row];
            // pin all active rows to their bounds (kills float drift)
            for (std::size_t a = 0; a < act_row_.size(); ++a)
                y_[act_row_[a]] = act_side_[a] ? b_.hi[act_row_[a]] : b_.lo[act_row_[a]];
            if (!refactor()) return LPStatus::NumericalFailure;
            if constexpr (std::is_floating_point_v<S>) {
                if (++since_refresh_ >= 256) {
                    since_refresh_ = 0;
                    // refresh basic values and activities from the pinned rows
                    std::vector<S> rhs(act_row_.size());
                    for (std::size_t a = 0; a < act_row_.size(); ++a)
                        rhs[a] = act_side_[a] ? b_.hi[act_row_[a]] : b_.lo[act_row_[a]];
                    lu_.solve(rhs);
                    std::fill(x_.begin(), x_.end(), S(0));
                    for (std::size_t b = 0; b < basic_x_.size(); ++b)
                        x_[basic_x_[b]] = rhs[b];
                    recompute_y();
                    for (std::size_t a = 0; a < act_row_.size(); ++a)
                        y_[act_row_[a]] = act_side_[a] ? b_.hi[act_row_[a]] : b_.lo[act_row_[a]];
                }
            }
            if (repair_hit) {
                return LPStatus::Optimal; // row repaired and activated
            }
        }
    }
};

} // namespace detail
} // namespace emlp
