#include "emlp/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace emlp {

namespace {

std::vector<Rational> dcolumn(const DesignMatrix& a, std::uint64_t cell, std::uint64_t zero) {
    std::vector<std::int8_t> ci, c0;
    a.hcolumn(cell, ci);
    a.hcolumn(zero, c0);
    std::vector<Rational> d(a.rows());
    for (int j = 0; j < a.rows(); ++j) d[j] = int(ci[1 + j]) - int(c0[1 + j]);
    return d;
}

double logsumexp(const std::vector<double>& vals, const std::vector<std::uint64_t>& idx) {
    double mx = -std::numeric_limits<double>::infinity();
    for (auto i : idx) mx = std::max(mx, vals[i]);
    double s = 0;
    for (auto i : idx) s += std::exp(vals[i] - mx);
    return mx + std::log(s);
}

std::string face_label(const Schema& schema, const std::vector<int>& face) {
    std::string s = "{";
    for (std::size_t k = 0; k < face.size(); ++k)
        s += (k ? "," : "") + schema.name(face[k]);
    return s + "}";
}

} // namespace

MuBasis MuBasis::select(const DesignMatrix& a, const Counts& counts, const CellSet& f1,
                        const CellSet& f2) {
    if (counts.support_size() == 0) throw Error("mu basis: empty support");
    if (!f1.is_subset_of(f2)) throw Error("mu basis: F1 not contained in F2");
    MuBasis b;
    b.a_ = &a;
    // zero cell: maximal count, smallest index on ties
    std::uint64_t best_count = 0;
    std::uint64_t zero = 0;
    bool first = true;
    for (const auto& [cell, n] : counts.cells()) {
        std::uint64_t idx = a.space()->index_of_cell(cell);
        if (first || n > best_count || (n == best_count && idx < zero)) {
            best_count = n;
            zero = idx;
            first = false;
        }
    }
    b.zero_ = zero;
    b.tracker_ = SpanTracker(a.rows());
    auto try_pool = [&](const std::vector<std::uint64_t>& pool) {
        for (std::uint64_t i : pool) {
            if (i == b.zero_) continue;
            if (!b.tracker_.insert_or_coords(dcolumn(a, i, b.zero_)))
                b.l_.push_back(i);
        }
    };
    std::vector<std::uint64_t> pool1, pool2, pool3;
    const std::uint64_t m = a.space()->size();
    for (std::uint64_t i = 0; i < m; ++i) {
        if (f1.contains(i)) pool1.push_back(i);
        else if (f2.contains(i)) pool2.push_back(i);
        else pool3.push_back(i);
    }
    try_pool(pool1);
    b.l1_size_ = b.l_.size();
    try_pool(pool2);
    b.l2_size_ = b.l_.size();
    try_pool(pool3);

    // θ-representative: Θ = D (DᵀD)^{-1}, columns over R^{|J|}
    const std::size_t nl = b.l_.size();
    std::vector<std::vector<Rational>> d(nl);
    for (std::size_t k = 0; k < nl; ++k) d[k] = dcolumn(a, b.l_[k], b.zero_);
    std::vector<std::vector<Rational>> gram(nl, std::vector<Rational>(nl));
    for (std::size_t i = 0; i < nl; ++i)
        for (std::size_t j = i; j < nl; ++j) {
            Rational s = 0;
            for (int r = 0; r < a.rows(); ++r)
                if (d[i][r] != 0 && d[j][r] != 0) s += d[i][r] * d[j][r];
            gram[i][j] = gram[j][i] = s;
        }
    b.theta_rep_.assign(nl, std::vector<double>(a.rows(), 0.0));
    for (std::size_t col = 0; col < nl; ++col) {
        std::vector<Rational> e(nl, Rational(0));
        e[col] = 1;
        auto alpha = solve_square(gram, e);
        if (!alpha) throw Error("mu basis: Gram matrix singular");
        for (int r = 0; r < a.rows(); ++r) {
            Rational acc = 0;
            for (std::size_t k = 0; k < nl; ++k)
                if (d[k][r] != 0) acc += d[k][r] * (*alpha)[k];
            b.theta_rep_[col][r] = to_double(acc);
        }
    }
    return b;
}

std::vector<Rational> MuBasis::coeff(std::uint64_t cell) const {
    auto coords = tracker_.coords(dcolumn(*a_, cell, zero_));
    if (!coords) throw Error("mu basis: cell outside the parameter span");
    return *coords;
}

std::vector<double> MuBasis::design_rows(const DesignMatrix& a, const CellSet& domain,
                                         std::size_t ncols) const {
    auto idx = domain.to_indices();
    std::vector<double> b(idx.size() * ncols, 0.0);
    std::vector<double> g(a.hrows(), 0.0);
    for (std::size_t col = 0; col < ncols; ++col) {
        g.assign(a.hrows(), 0.0);
        for (int r = 0; r < a.rows(); ++r) g[1 + r] = theta_rep_[col][r];
        auto t = a.apply_homog(g);
        double t0 = t[zero_];
        for (std::size_t row = 0; row < idx.size(); ++row)
            b[row * ncols + col] = t[idx[row]] - t0;
    }
    return b;
}

namespace {

struct MuWorkspace {
    std::vector<std::uint64_t> domain;
    std::vector<double> b;       // |domain| x ncols
    std::vector<double> n;       // counts per domain cell
    std::size_t ncols = 0;
    double total = 0;
};

MuWorkspace make_mu_workspace(const DesignMatrix& a, const Counts& counts,
                              const MuBasis& basis, const CellSet& domain,
                              std::size_t ncols) {
    MuWorkspace w;
    w.domain = domain.to_indices();
    w.ncols = ncols;
    w.b = basis.design_rows(a, domain, ncols);
    w.n.assign(w.domain.size(), 0.0);
    w.total = double(counts.total());
    for (const auto& [cell, cnt] : counts.cells()) {
        std::uint64_t idx = a.space()->index_of_cell(cell);
        auto it = std::lower_bound(w.domain.begin(), w.domain.end(), idx);
        if (it == w.domain.end() || *it != idx)
            throw Error("likelihood domain does not contain the data support");
        w.n[it - w.domain.begin()] += double(cnt);
    }
    return w;
}

} // namespace

Objective make_likelihood(const DesignMatrix& a, const Counts& counts, LikelihoodForm form,
                          const MuBasis* basis, const CellSet* domain) {
    Objective obj;
    const double total = double(counts.total());

    if (form == LikelihoodForm::Theta || form == LikelihoodForm::ThetaOnF) {
        std::vector<std::uint64_t> dom;
        if (form == LikelihoodForm::ThetaOnF) {
            if (!domain) throw Error("theta-on-F likelihood needs a domain");
            dom = domain->to_indices();
        } else {
            dom.resize(a.space()->size());
            for (std::uint64_t i = 0; i < dom.size(); ++i) dom[i] = i;
        }
        SuffStat t = a.sufficient_statistic(counts);
        auto tshared = std::make_shared<SuffStat>(std::move(t));
        auto domshared = std::make_shared<std::vector<std::uint64_t>>(std::move(dom));
        obj.dim = a.rows();
        auto core = [&a, tshared, domshared, total](const std::vector<double>& th,
                                                    std::vector<double>* grad,
                                                    std::vector<double>* fisher) {
            std::vector<double> g(a.hrows(), 0.0);
            for (int r = 0; r < a.rows(); ++r) g[1 + r] = th[r];
            auto tv = a.apply_homog(g);
            double lz = logsumexp(tv, *domshared);
            std::vector<double> p(a.space()->size(), 0.0);
            for (auto i : *domshared) p[i] = std::exp(tv[i] - lz);
            double value = -total * lz;
            for (int r = 0; r < a.rows(); ++r) value += th[r] * double(tshared->t[r]);
            if (grad || fisher) {
                auto mean = a.accumulate_weighted(p);
                if (grad)
                    for (int r = 0; r < a.rows(); ++r)
                        (*grad)[r] = double(tshared->t[r]) - total * mean[r];
                if (fisher)
                    for (int r = 0; r < a.rows(); ++r)
                        (*fisher)[r] = total * std::max(mean[r] - mean[r] * mean[r], 0.0);
            }
            return value;
        };
        obj.eval = [core](const std::vector<double>& x, std::vector<double>& grad) {
            grad.resize(x.size());
            return core(x, &grad, nullptr);
        };
        obj.curvature_diag = [core](const std::vector<double>& x, std::vector<double>& d) {
            d.resize(x.size());
            core(x, nullptr, &d);
        };
        return obj;
    }

    if (!basis) throw Error("mu likelihood needs a basis");
    std::size_t ncols = form == LikelihoodForm::MuOnF2 ? basis->l2_size() : basis->l().size();
    CellSet dom = domain ? *domain : CellSet::full(a.space());
    if (form == LikelihoodForm::MuOnF2 && !domain)
        throw Error("mu-on-F2 likelihood needs the F2 domain");
    auto w = std::make_shared<MuWorkspace>(make_mu_workspace(a, counts, *basis, dom, ncols));
    obj.dim = static_cast<int>(ncols);
    auto core = [w](const std::vector<double>& mu, std::vector<double>* grad,
                    std::vector<double>* fisher) {
        const std::size_t nd = w->domain.size(), nc = w->ncols;
        std::vector<double> vals(nd);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nd; ++i) {
            double acc = 0;
            const double* row = w->b.data() + i * nc;
            for (std::size_t k = 0; k < nc; ++k) acc += row[k] * mu[k];
            vals[i] = acc;
            mx = std::max(mx, acc);
        }
        double z = 0;
        for (std::size_t i = 0; i < nd; ++i) z += std::exp(vals[i] - mx);
        double lz = mx + std::log(z);
        double value = -w->total * lz;
        for (std::size_t i = 0; i < nd; ++i)
            if (w->n[i] != 0) value += w->n[i] * vals[i];
        if (grad) {
            std::fill(grad->begin(), grad->end(), 0.0);
            for (std::size_t i = 0; i < nd; ++i) {
                double wi = w->n[i] - w->total * std::exp(vals[i] - lz);
                if (wi == 0) continue;
                const double* row = w->b.data() + i * nc;
                for (std::size_t k = 0; k < nc; ++k) (*grad)[k] += wi * row[k];
            }
        }
        if (fisher) {
            std::vector<double> m1(nc, 0.0);
            std::fill(fisher->begin(), fisher->end(), 0.0);
            for (std::size_t i = 0; i < nd; ++i) {
                double pi = std::exp(vals[i] - lz);
                const double* row = w->b.data() + i * nc;
                for (std::size_t k = 0; k < nc; ++k) {
                    m1[k] += pi * row[k];
                    (*fisher)[k] += pi * row[k] * row[k];
                }
            }
            for (std::size_t k = 0; k < nc; ++k)
                (*fisher)[k] = w->total * std::max((*fisher)[k] - m1[k] * m1[k], 0.0);
        }
        return value;
    };
    obj.eval = [core](const std::vector<double>& x, std::vector<double>& grad) {
        grad.resize(x.size());
        return core(x, &grad, nullptr);
    };
    obj.curvature_diag = [core](const std::vector<double>& x, std::vector<double>& d) {
        d.resize(x.size());
        core(x, nullptr, &d);
    };
    return obj;
}

Objective make_poisson_surrogate(const DesignMatrix& a, const Counts& counts,
                                 const MuBasis& basis, const CellSet& domain) {
    auto w = std::make_shared<MuWorkspace>(
        make_mu_workspace(a, counts, basis, domain, basis.l2_size()));
    Objective obj;
    obj.dim = static_cast<int>(basis.l2_size());
    obj.eval = [w](const std::vector<double>& mu, std::vector<double>& grad) {
        const std::size_t nd = w->domain.size(), nc = w->ncols;
        grad.assign(nc, 0.0);
        double value = 0;
        for (std::size_t i = 0; i < nd; ++i) {
            const double* row = w->b.data() + i * nc;
            double acc = 0;
            for (std::size_t k = 0; k < nc; ++k) acc += row[k] * mu[k];
            double e = std::exp(acc);
            value += w->n[i] * acc - w->total * e;
            double wi = w->n[i] - w->total * e;
            for (std::size_t k = 0; k < nc; ++k) grad[k] += wi * row[k];
        }
        return value;
    };
    return obj;
}

std::pair<double, std::vector<double>> loglik_grad(const DesignMatrix& a, const Counts& counts,
                                                   const std::vector<double>& params,
                                                   LikelihoodForm form, const MuBasis* basis,
                                                   const CellSet* domain) {
    Objective obj = make_likelihood(a, counts, form, basis, domain);
    if (static_cast<int>(params.size()) != obj.dim)
        throw Error("loglik_grad: parameter dimension mismatch");
    std::vector<double> grad(obj.dim);
    double value = obj.eval(params, grad);
    if (!std::isfinite(value)) throw Error("loglik_grad: overflow in likelihood evaluation");
    return {value, std::move(grad)};
}

MaximizeResult maximize(const Objective& obj, const FitOptions& opts,
                        const std::vector<double>* start) {
    MaximizeResult res;
    std::vector<double> x = start ? *start : std::vector<double>(obj.dim, 0.0);
    std::vector<double> grad(obj.dim), dir(obj.dim), diag(obj.dim), xt(obj.dim), gt(obj.dim);
    std::vector<int> streak(obj.dim, 0);
    std::vector<bool> flagged(obj.dim, false);
    double f = obj.eval(x, grad);
    for (long it = 1; it <= opts.max_iter; ++it) {
        res.iterations = it;
        double gn = 0;
        for (double g : grad) gn = std::max(gn, std::abs(g));
        res.grad_norm = gn;
        if (gn <= opts.tol_grad) { res.converged = true; break; }
        if (opts.precondition && obj.curvature_diag) {
            obj.curvature_diag(x, diag);
            double md = 0;
            for (double d : diag) md = std::max(md, d);
            double floor = std::max(1e-12, 1e-10 * md);
            for (int k = 0; k < obj.dim; ++k) dir[k] = grad[k] / std::max(diag[k], floor);
        } else {
            dir = grad;
        }
        double slope = 0;
        for (int k = 0; k < obj.dim; ++k) slope += grad[k] * dir[k];
        if (slope <= 0) { res.line_search_failed = true; break; }
        double alpha = 1.0, ft = 0;
        bool accepted = false;
        while (alpha > 1e-14) {
            for (int k = 0; k < obj.dim; ++k) xt[k] = x[k] + alpha * dir[k];
            ft = obj.eval(xt, gt);
            if (std::isfinite(ft) && ft >= f + opts.armijo_c * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= opts.backtrack;
        }
        if (!accepted) { res.line_search_failed = true; break; }
        for (int k = 0; k < obj.dim; ++k) {
            double delta = alpha * dir[k];
            if (delta <= -1.0 && std::abs(dir[k]) >= 1e-2) {
                if (++streak[k] >= 5 && !flagged[k]) {
                    flagged[k] = true;
                    res.drifting.push_back(k);
                }
            } else {
                streak[k] = 0;
            }
        }
        x.swap(xt);
        grad.swap(gt);
        f = ft;
    }
    res.x = std::move(x);
    res.value = f;
    if (!res.converged) {
        double gn = 0;
        for (double g : grad) gn = std::max(gn, std::abs(g));
        res.grad_norm = gn;
        res.converged = gn <= opts.tol_grad;
    }
    std::sort(res.drifting.begin(), res.drifting.end());
    return res;
}

MaximizeResult maximize_coordinatewise(const Objective& obj, const FitOptions& opts) {
    MaximizeResult res;
    std::vector<double> x(obj.dim, 0.0), grad(obj.dim);
    double f = obj.eval(x, grad);
    for (long sweep = 1; sweep <= opts.max_iter; ++sweep) {
        res.iterations = sweep;
        for (int k = 0; k < obj.dim; ++k) {
            // 1-D concave maximization by bisection on the gradient component
            double lo = x[k] - 64, hi = x[k] + 64;
            auto gk = [&](double v) {
                std::vector<double> xv = x;
                xv[k] = v;
                obj.eval(xv, grad);
                return grad[k];
            };
            if (gk(lo) < 0)
                x[k] = lo; // diverging downward; park at the window edge
            else if (gk(hi) > 0)
                x[k] = hi;
            else {
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    (gk(mid) > 0 ? lo : hi) = mid;
                }
                x[k] = 0.5 * (lo + hi);
            }
        }
        f = obj.eval(x, grad);
        double gn = 0;
        for (double g : grad) gn = std::max(gn, std::abs(g));
        res.grad_norm = gn;
        if (gn <= opts.tol_grad) { res.converged = true; break; }
    }
    res.x = std::move(x);
    res.value = f;
    return res;
}

EmleResult emle(const DesignMatrix& a, const Counts& counts, const CellSet& ft,
                double tol_moment, FitOptions opts) {
    CellSet support = counts.support_set(a.space());
    if (!support.is_subset_of(ft))
        throw Error("emle: facial set does not contain the data support");
    EmleResult out{std::vector<double>(), MuBasis::select(a, counts, ft, ft), MaximizeResult{},
                   0.0};
    Objective obj = make_likelihood(a, counts, LikelihoodForm::MuOnF2, &out.basis, &ft);
    out.fit = maximize(obj, opts);
    auto finish = [&]() {
        auto idx = ft.to_indices();
        auto b = out.basis.design_rows(a, ft, out.basis.l2_size());
        const std::size_t nc = out.basis.l2_size();
        std::vector<double> vals(idx.size());
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < idx.size(); ++i) {
            double acc = 0;
            for (std::size_t k = 0; k < nc; ++k) acc += b[i * nc + k] * out.fit.x[k];
            vals[i] = acc;
            mx = std::max(mx, acc);
        }
        double z = 0;
        for (double v : vals) z += std::exp(v - mx);
        out.p.assign(a.space()->size(), 0.0);
        for (std::size_t i = 0; i < idx.size(); ++i)
            out.p[idx[i]] = std::exp(vals[i] - mx) / z;
        auto mean = a.accumulate_weighted(out.p);
        auto t = a.sufficient_statistic(counts);
        out.moment_residual = 0;
        for (int r = 0; r < a.rows(); ++r)
            out.moment_residual =
                std::max(out.moment_residual,
                         std::abs(mean[r] - double(t.t[r]) / double(t.n)));
    };
    finish();
    if (out.moment_residual > tol_moment) {
        FitOptions harder = opts;
        harder.tol_grad = opts.tol_grad / 1000;
        harder.max_iter = opts.max_iter * 10;
        out.fit = maximize(obj, harder, &out.fit.x);
        finish();
    }
    if (out.moment_residual > tol_moment)
        throw Error("emle: moment matching failed (wrong facial set or non-convergence)");
    for (std::uint64_t i : ft.to_indices())
        if (!(out.p[i] > 0))
            throw Error("emle: fitted support collapsed below the facial set");
    return out;
}

std::vector<double> ipf(const Complex& cx, const DesignMatrix& a, const Counts& counts,
                        const CellSet& f, double tol, long max_sweeps) {
    if (!f.space()->same_vars(*a.space())) throw Error("ipf: space mismatch");
    CellSet support = counts.support_set(a.space());
    if (!support.is_subset_of(f)) throw Error("ipf: F does not contain the data support");
    if (f.is_empty()) throw Error("ipf: empty cell set");
    const Schema& schema = a.schema();
    const double total = double(counts.total());

    struct Marg {
        std::vector<int> face;
        CellSpacePtr space;
        std::vector<double> target; // n_D / N
        std::string label;
    };
    std::vector<Marg> margs;
    for (const auto& g : cx.generators()) {
        Marg m;
        m.face = g;
        m.space = CellSpace::make(schema, g);
        m.target.assign(m.space->size(), 0.0);
        for (const auto& [cell, cnt] : counts.cells())
            m.target[m.space->index_of_cell(cell)] += double(cnt) / total;
        m.label = face_label(schema, g);
        margs.push_back(std::move(m));
    }
    auto fcells = f.to_indices();
    std::vector<double> p(a.space()->size(), 0.0);
    for (auto i : fcells) p[i] = 1.0 / double(fcells.size());

    // cell -> marginal index per generator
    std::vector<std::vector<std::uint32_t>> midx(margs.size());
    {
        std::vector<std::uint8_t> cell;
        for (std::size_t g = 0; g < margs.size(); ++g) {
            midx[g].resize(fcells.size());
            for (std::size_t c = 0; c < fcells.size(); ++c) {
                Cell full = cell_from_index(fcells[c], schema);
                midx[g][c] = static_cast<std::uint32_t>(margs[g].space->index_of_cell(full));
            }
        }
    }
    std::vector<double> cur;
    for (long sweep = 0; sweep < max_sweeps; ++sweep) {
        double residual = 0;
        for (std::size_t g = 0; g < margs.size(); ++g) {
            cur.assign(margs[g].target.size(), 0.0);
            for (std::size_t c = 0; c < fcells.size(); ++c) cur[midx[g][c]] += p[fcells[c]];
            for (std::size_t d = 0; d < cur.size(); ++d) {
                residual = std::max(residual, std::abs(cur[d] - margs[g].target[d]));
                if (margs[g].target[d] > 0 && cur[d] <= 0)
                    throw Error("ipf: division by zero fitted marginal for generator " +
                                margs[g].label);
                if (margs[g].target[d] == 0 && cur[d] > 0)
                    throw Error("ipf: division by zero for generator " + margs[g].label +
                                ": target marginal vanishes on cells of F");
            }
            for (std::size_t c = 0; c < fcells.size(); ++c) {
                double t = margs[g].target[midx[g][c]];
                double m = cur[midx[g][c]];
                if (t > 0) p[fcells[c]] *= t / m;
            }
        }
        if (residual <= tol) return p;
    }
    throw Error("ipf: failed to converge");
}

void classify(FitReport& report, const CellSet& f1, const CellSet& f2, bool ft_known) {
    if (!f1.is_subset_of(f2)) throw Error("classify: F1 not contained in F2");
    const std::uint64_t m = f1.universe();
    for (std::uint64_t i = 0; i < m; ++i) {
        ParamStatus s;
        if (f1.contains(i)) s = ParamStatus::Estimable;
        else if (!f2.contains(i)) s = ParamStatus::Diverges;
        else s = ft_known ? ParamStatus::Estimable : ParamStatus::Undetermined;
        report.status[i] = s;
        if (s == ParamStatus::Diverges) report.mu_hat.erase(i);
    }
}

std::vector<double> cell_mu_values(const DesignMatrix& a, const MuBasis& basis,
                                   const std::vector<double>& mu_params) {
    std::vector<double> g(a.hrows(), 0.0);
    for (std::size_t k = 0; k < mu_params.size(); ++k)
        for (int r = 0; r < a.rows(); ++r)
            g[1 + r] += basis.theta_rep()[k][r] * mu_params[k];
    auto t = a.apply_homog(g);
    double t0 = t[basis.zero_cell()];
    for (auto& v : t) v -= t0;
    return t;
}

std::map<std::uint64_t, double> naive_estimates(const Counts& counts, std::uint64_t zero_cell) {
    auto space = CellSpace::full(counts.schema());
    Cell zc = cell_from_index(zero_cell, counts.schema());
    std::uint64_t n0 = counts.count(zc);
    if (n0 == 0) throw Error("naive estimates: zero cell has no observations");
    std::map<std::uint64_t, double> out;
    for (const auto& [cell, n] : counts.cells())
        out[space->index_of_cell(cell)] = std::log(double(n) / double(n0));
    return out;
}

std::vector<Rational> LambdaBasis::lambda_from_mu(const std::vector<Rational>& mu_l) const {
    if (mu_l.size() != l.size()) throw Error("lambda: wrong parameter length");
    std::vector<Rational> out(mu_l.begin(), mu_l.begin() + lt_size);
    const std::size_t c = l.size() - lt_size;
    for (std::size_t j = 0; j < c; ++j) {
        Rational acc = 0;
        for (std::size_t k = 0; k < c; ++k)
            if (g_inv[j][k] != 0) acc += g_inv[j][k] * mu_l[lt_size + k];
        out.push_back(acc);
    }
    return out;
}

LambdaBasis lambda_reparam(const DesignMatrix& a, const CellSet& ft,
                           const std::vector<FaceCertificate>& certificates,
                           const MuBasis& basis) {
    LambdaBasis lb;
    lb.l = basis.l();
    lb.lt_size = basis.l1_size();
    if (basis.l1_size() != basis.l2_size())
        throw Error("lambda: basis must be selected with F1 = F2 = F_t");
    const std::size_t c = lb.l.size() - lb.lt_size;
    if (certificates.size() != c)
        throw Error("lambda: expected " + std::to_string(c) + " certificates, got " +
                    std::to_string(certificates.size()));
    lb.certificates = certificates;
    // exact per-cell coefficients of each λ_j: <g̃_j, f̃_i>
    std::vector<std::vector<Rational>> act(c);
    for (std::size_t j = 0; j < c; ++j) {
        if (static_cast<int>(certificates[j].gtilde.size()) != a.hrows())
            throw Error("lambda: certificate length mismatch");
        act[j] = a.apply_homog(certificates[j].gtilde);
        for (std::uint64_t i = 0; i < a.space()->size(); ++i) {
            if (ft.contains(i) && act[j][i] != 0)
                throw Error("lambda: certificate does not vanish on F_t");
            if (!ft.contains(i) && act[j][i] < 0)
                throw Error("lambda: certificate negative off F_t");
        }
    }
    // G over L \ L_t (coefficients on L_t vanish automatically)
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t k = 0; k < lb.lt_size; ++k)
            if (act[j][lb.l[k]] != 0)
                throw Error("lambda: certificate not tight on L_t");
    lb.g.assign(c, std::vector<Rational>(c));
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t k = 0; k < c; ++k) lb.g[j][k] = act[j][lb.l[lb.lt_size + k]];
    lb.g_inv.assign(c, std::vector<Rational>(c));
    for (std::size_t col = 0; col < c; ++col) {
        std::vector<Rational> e(c, Rational(0));
        e[col] = 1;
        auto x = solve_square(lb.g, e);
        if (!x) throw Error("lambda: certificates not independent on L \\ L_t");
        for (std::size_t j = 0; j < c; ++j) lb.g_inv[j][col] = (*x)[j];
    }
    return lb;
}

bool lambda_facet_witnesses(const DesignMatrix& a, const CellSet& ft, const LambdaBasis& lb) {
    const std::size_t c = lb.certificates.size();
    std::vector<std::vector<Rational>> act(c);
    for (std::size_t j = 0; j < c; ++j) act[j] = a.apply_homog(lb.certificates[j].gtilde);
    for (std::size_t j = 0; j < c; ++j) {
        bool found = false;
        for (std::uint64_t i = 0; i < a.space()->size() && !found; ++i) {
            if (ft.contains(i)) continue;
            if (act[j][i] <= 0) continue;
            bool others_zero = true;
            for (std::size_t k = 0; k < c && others_zero; ++k)
                if (k != j && act[k][i] != 0) others_zero = false;
            found = others_zero;
        }
        if (!found) return false;
    }
    return true;
}

} // namespace emlp
