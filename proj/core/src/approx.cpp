#include "emlp/approx.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace emlp {

namespace {

std::vector<int> schema_vars_of(const Complex& cx, const Schema& schema) {
    std::vector<int> vars;
    vars.reserve(cx.num_vertices());
    for (const auto& name : cx.vertices()) vars.push_back(schema.var_index(name));
    return vars;
}

std::string face_names(const Complex& cx, const std::vector<int>& face) {
    std::string s = "{";
    for (std::size_t k = 0; k < face.size(); ++k)
        s += (k ? "," : "") + cx.vertex_name(face[k]);
    return s + "}";
}

bool is_complete_complex(const Complex& cx) {
    return cx.generators().size() == 1 &&
           static_cast<int>(cx.generators()[0].size()) == cx.num_vertices();
}

/// Closure for a prime component given over a base-schema subspace.
CellSet component_closure(const Complex& comp, const Schema& schema, const CellSet& t,
                          LPMode mode) {
    auto vars = schema_vars_of(comp, schema);
    DesignMatrix design(comp, schema.restrict(vars));
    FacialSolver solver(design, mode);
    CellSet seed = t.rebind(design.space());
    return solver.closure(seed).rebind(t.space());
}

void validate_split(const Complex& cx, const SeparatorSplit& split) {
    std::vector<int> s = split.s, v1 = split.v1, v2 = split.v2;
    std::sort(s.begin(), s.end());
    std::sort(v1.begin(), v1.end());
    std::sort(v2.begin(), v2.end());
    std::vector<int> inter, uni;
    std::set_intersection(v1.begin(), v1.end(), v2.begin(), v2.end(), std::back_inserter(inter));
    std::set_union(v1.begin(), v1.end(), v2.begin(), v2.end(), std::back_inserter(uni));
    if (inter != s) throw Error("split: V1 ∩ V2 differs from S");
    std::vector<int> all(cx.num_vertices());
    for (int v = 0; v < cx.num_vertices(); ++v) all[v] = v;
    if (uni != all) throw Error("split: V1 ∪ V2 is not the vertex set");
    if (v1 == s || v2 == s) throw Error("split: a part equals the separator");
    for (const auto& g : cx.generators()) {
        bool in1 = std::includes(v1.begin(), v1.end(), g.begin(), g.end());
        bool in2 = std::includes(v2.begin(), v2.end(), g.begin(), g.end());
        if (!in1 && !in2)
            throw Error("split: generator " + face_names(cx, g) + " crosses the separator");
    }
}

} // namespace

CellSet facial_reducible(const Complex& cx, const Schema& schema, const CellSet& t,
                         LPMode mode) {
    auto prime = prime_components(cx);
    if (prime.components.size() == 1)
        return component_closure(prime.components[0], schema, t, mode);
    CellSet result = CellSet::full(t.space());
    for (const auto& comp : prime.components) {
        auto vars = schema_vars_of(comp, schema);
        auto space_k = CellSpace::make(schema, vars);
        CellSet t_k = t.project(space_k);
        CellSet f_k = is_complete_complex(comp) ? t_k
                                                : component_closure(comp, schema, t_k, mode);
        result.intersect_with(f_k.lift(t.space()));
    }
    return result;
}

CellSet facial_reducible_with(const Complex& cx, const Schema& schema,
                              const std::vector<SeparatorSplit>& splits, const CellSet& t,
                              LPMode mode) {
    for (const auto& split : splits) {
        validate_split(cx, split);
        if (!cx.contains(split.s))
            throw Error("split separator " + face_names(cx, split.s) +
                        " is not complete in the complex");
    }
    return facial_reducible(cx, schema, t, mode);
}

InnerApprox inner_approx(const Complex& cx, const Schema& schema, const CellSet& support,
                         const std::vector<SeparatorSplit>& splits, int max_rounds,
                         bool complete_parts, LPMode mode) {
    for (const auto& split : splits) validate_split(cx, split);
    InnerApprox out{support, 0, true};
    if (splits.empty()) return out;
    CellSet& g = out.f1;
    for (int round = 0; round < max_rounds; ++round) {
        std::uint64_t before = g.size();
        for (const auto& split : splits) {
            auto space1 = CellSpace::make(schema, split.v1);
            auto space2 = CellSpace::make(schema, split.v2);
            CellSet t1 = g.project(space1);
            CellSet t2 = g.project(space2);
            CellSet f1, f2;
            if (complete_parts) {
                f1 = std::move(t1);
                f2 = std::move(t2);
            } else {
                Complex with_s = cx.completed({split.s});
                f1 = facial_reducible(with_s.induced(split.v1), schema, t1, mode);
                f2 = facial_reducible(with_s.induced(split.v2), schema, t2, mode);
            }
            CellSet next = f1.lift(g.space());
            next.intersect_with(f2.lift(g.space()));
            g = std::move(next);
        }
        if (g.size() == before) { out.stable = true; return out; }
        ++out.rounds;
    }
    out.stable = false;
    return out;
}

namespace {

void validate_cover(const Complex& cx, const std::vector<std::vector<int>>& cover) {
    for (const auto& g : cx.generators()) {
        bool housed = false;
        for (const auto& vk : cover) {
            std::vector<int> s = vk;
            std::sort(s.begin(), s.end());
            if (std::includes(s.begin(), s.end(), g.begin(), g.end())) { housed = true; break; }
        }
        if (!housed)
            throw Error("outer cover misses generator " + face_names(cx, g));
    }
}

} // namespace

CellSet outer_approx_cells(const Complex& cx, const Schema& schema, const CellSet& support,
                           const std::vector<std::vector<int>>& cover, LPMode mode) {
    validate_cover(cx, cover);
    CellSet f2 = CellSet::full(support.space());
    for (const auto& vk : cover) {
        Complex cx_k = cx.induced(vk);
        auto vars = schema_vars_of(cx_k, schema);
        auto space_k = CellSpace::make(schema, vars);
        CellSet t_k = support.project(space_k);
        CellSet f_k = facial_reducible(cx_k, schema, t_k, mode);
        f2.intersect_with(f_k.lift(support.space()));
    }
    return f2;
}

FacialSet outer_approx(const Complex& cx, const Schema& schema, const CellSet& support,
                       const std::vector<std::vector<int>>& cover, LPMode mode) {
    validate_cover(cx, cover);
    DesignMatrix full_design(cx, schema);
    CellSet f2 = CellSet::full(support.space());
    std::vector<Rational> cert_sum(full_design.hrows(), Rational(0));
    bool have_cert = false;
    for (const auto& vk : cover) {
        Complex cx_k = cx.induced(vk);
        auto vars = schema_vars_of(cx_k, schema);
        auto space_k = CellSpace::make(schema, vars);
        CellSet t_k = support.project(space_k);
        DesignMatrix design_k(cx_k, schema.restrict(vars));
        FacialSolver solver(design_k, mode);
        FacialSet f_k = solver.closure_cert(t_k.rebind(design_k.space()));
        f2.intersect_with(f_k.cells.rebind(space_k).lift(support.space()));
        if (f_k.certificate) {
            // lift the block certificate into the full design's coordinates
            const auto& g = f_k.certificate->gtilde;
            cert_sum[0] += g[0];
            for (int j = 0; j < design_k.rows(); ++j) {
                if (g[1 + j] == 0) continue;
                auto [face, levels] = design_k.row_face_levels(j);
                std::vector<int> gface;
                for (int v : face) gface.push_back(vars[v]);
                cert_sum[1 + full_design.row_of(gface, levels)] += g[1 + j];
            }
            have_cert = true;
        }
    }
    FacialSet out{std::move(f2), -1, std::nullopt};
    out.dimension = face_dimension(full_design, out.cells);
    if (!out.cells.is_full()) {
        FaceCertificate cert{std::move(cert_sum)};
        if (!have_cert || !verify_certificate(full_design, out.cells, cert))
            throw Error("outer approximation: certificate verification failed");
        out.certificate = std::move(cert);
    }
    return out;
}

std::vector<std::vector<int>> cover_from_strategy(const Complex& cx, CoverStrategy strategy,
                                                  int k) {
    const int n = cx.num_vertices();
    std::vector<std::vector<int>> cover;
    switch (strategy) {
    case CoverStrategy::FixedK: {
        if (k < 1 || k > n) throw Error("cover: k out of range");
        // all k-subsets
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        double log_count = 0;
        for (int i = 0; i < k; ++i) log_count += std::log2(double(n - i) / (i + 1));
        if (log_count > 21) throw Error("cover: too many k-subsets");
        for (;;) {
            cover.push_back(idx);
            int i = k - 1;
            while (i >= 0 && idx[i] == n - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
        for (const auto& g : cx.generators())
            if (static_cast<int>(g.size()) >= k) cover.push_back(g);
        break;
    }
    case CoverStrategy::Balls: {
        if (k < 0) throw Error("cover: negative radius");
        auto edges = cx.skeleton_edges();
        std::vector<std::vector<int>> adj(n);
        for (auto [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        std::set<std::vector<int>> seen;
        for (int v = 0; v < n; ++v) {
            std::vector<int> dist(n, -1);
            std::queue<int> q;
            q.push(v);
            dist[v] = 0;
            std::vector<int> ball{v};
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                if (dist[u] == k) continue;
                for (int w : adj[u])
                    if (dist[w] < 0) {
                        dist[w] = dist[u] + 1;
                        ball.push_back(w);
                        q.push(w);
                    }
            }
            std::sort(ball.begin(), ball.end());
            if (seen.insert(ball).second) cover.push_back(ball);
        }
        break;
    }
    case CoverStrategy::Grid3x3All: {
        if (!cx.grid()) throw Error("cover: grid strategy requires grid metadata");
        GridInfo g = *cx.grid();
        if (g.rows < 3 || g.cols < 3) throw Error("cover: grid too small for 3x3 windows");
        for (int r = 1; r + 2 <= g.rows; ++r)
            for (int c = 1; c + 2 <= g.cols; ++c) {
                std::vector<int> w;
                for (int dr = 0; dr < 3; ++dr)
                    for (int dc = 0; dc < 3; ++dc) w.push_back(g.vertex_at(r + dr, c + dc));
                std::sort(w.begin(), w.end());
                cover.push_back(std::move(w));
            }
        break;
    }
    case CoverStrategy::Grid3x3Cover: {
        if (!cx.grid()) throw Error("cover: grid strategy requires grid metadata");
        GridInfo g = *cx.grid();
        bool by_cols = g.rows <= g.cols;
        int longd = by_cols ? g.cols : g.rows;
        int shortd = by_cols ? g.rows : g.cols;
        if (shortd > 5) {
            // full 2D tiling with stride 2
            for (int r = 1; r <= g.rows - 1; r += 2)
                for (int c = 1; c <= g.cols - 1; c += 2) {
                    std::vector<int> w;
                    for (int dr = 0; dr < 3 && r + dr <= g.rows; ++dr)
                        for (int dc = 0; dc < 3 && c + dc <= g.cols; ++dc)
                            w.push_back(g.vertex_at(r + dr, c + dc));
                    std::sort(w.begin(), w.end());
                    cover.push_back(std::move(w));
                }
        } else {
            // thin grid: full-extent windows of width <= 3 along the long axis
            for (int s = 1; s <= longd - 1; s += 2) {
                int width = std::min(3, longd - s + 1);
                std::vector<int> w;
                for (int t = 0; t < width; ++t)
                    for (int u = 1; u <= shortd; ++u)
                        w.push_back(by_cols ? g.vertex_at(u, s + t) : g.vertex_at(s + t, u));
                std::sort(w.begin(), w.end());
                cover.push_back(std::move(w));
            }
        }
        break;
    }
    }
    return cover;
}

Sandwich compare(const DesignMatrix& a, const CellSet& f1, FacialSet f2) {
    if (!f1.is_subset_of(f2.cells))
        throw Error("compare: F1 is not contained in F2");
    Sandwich s;
    s.rank1 = exact_rank_on(a, f1);
    s.rank2 = f2.dimension >= 0 ? f2.dimension + 1 : exact_rank_on(a, f2.cells);
    s.determined = (f1 == f2.cells) || (s.rank1 == s.rank2);
    s.codim_bound = s.rank2 - s.rank1;
    s.f1 = f1;
    s.f2 = std::move(f2);
    return s;
}

} // namespace emlp
