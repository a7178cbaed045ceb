#include "emlp/complex.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace emlp {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<std::vector<int>> antichain(std::vector<std::vector<int>> sets) {
    for (auto& s : sets) s = sorted_unique(std::move(s));
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < sets.size() && !dominated; ++j)
            if (i != j && sets[i].size() <= sets[j].size() && subset_of(sets[i], sets[j]))
                dominated = sets[i].size() < sets[j].size() || i > j;
        if (!dominated) out.push_back(sets[i]);
    }
    return out;
}

using Adjacency = std::vector<std::vector<int>>; // sorted neighbor lists

Adjacency build_adjacency(const Complex& cx) {
    Adjacency adj(cx.num_vertices());
    for (auto [u, v] : cx.skeleton_edges()) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& nb : adj) nb = sorted_unique(std::move(nb));
    return adj;
}

std::vector<std::vector<int>> components_avoiding(const Adjacency& adj,
                                                  const std::vector<bool>& blocked) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::vector<int>> comps;
    std::vector<bool> seen(n, false);
    for (int s = 0; s < n; ++s) {
        if (blocked[s] || seen[s]) continue;
        std::vector<int> comp;
        std::queue<int> q;
        q.push(s);
        seen[s] = true;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            comp.push_back(u);
            for (int w : adj[u])
                if (!blocked[w] && !seen[w]) { seen[w] = true; q.push(w); }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end());
    return comps;
}

std::vector<int> neighborhood_of_set(const Adjacency& adj, const std::vector<int>& comp) {
    std::vector<bool> in_comp(adj.size(), false);
    for (int v : comp) in_comp[v] = true;
    std::vector<int> nb;
    for (int v : comp)
        for (int w : adj[v])
            if (!in_comp[w]) nb.push_back(w);
    return sorted_unique(std::move(nb));
}

/// Minimal a-b separators via close-neighborhood expansion; callers filter
/// to inclusion-minimal separators below.
std::set<std::vector<int>> ab_minimal_separators(const Adjacency& adj, std::size_t cap,
                                                 bool* truncated) {
    const int n = static_cast<int>(adj.size());
    std::set<std::vector<int>> seps;
    std::vector<std::vector<int>> queue;
    auto offer = [&](std::vector<int> s) {
        if (s.empty()) return;
        if (seps.size() >= cap) { *truncated = true; return; }
        if (seps.insert(s).second) queue.push_back(std::move(s));
    };
    std::vector<bool> blocked(n);
    for (int v = 0; v < n; ++v) {
        std::fill(blocked.begin(), blocked.end(), false);
        blocked[v] = true;
        for (int w : adj[v]) blocked[w] = true;
        for (const auto& comp : components_avoiding(adj, blocked))
            offer(neighborhood_of_set(adj, comp));
    }
    while (!queue.empty() && !*truncated) {
        auto s = std::move(queue.back());
        queue.pop_back();
        for (int x : s) {
            std::fill(blocked.begin(), blocked.end(), false);
            for (int u : s) blocked[u] = true;
            blocked[x] = true;
            for (int w : adj[x]) blocked[w] = true;
            for (const auto& comp : components_avoiding(adj, blocked))
                offer(neighborhood_of_set(adj, comp));
            if (*truncated) break;
        }
    }
    return seps;
}

/// Inclusion-minimal separators: no proper subset disconnects anything the
/// full graph does not already have disconnected.
std::set<std::vector<int>> minimal_separators(const Adjacency& adj, std::size_t cap,
                                              bool* truncated) {
    auto cands = ab_minimal_separators(adj, cap, truncated);
    std::vector<bool> none(adj.size(), false);
    const std::size_t base_comps = components_avoiding(adj, none).size();
    std::vector<bool> blocked(adj.size());
    std::set<std::vector<int>> out;
    for (const auto& s : cands) {
        bool minimal = true;
        for (int skip : s) {
            std::fill(blocked.begin(), blocked.end(), false);
            for (int v : s)
                if (v != skip) blocked[v] = true;
            if (components_avoiding(adj, blocked).size() > base_comps) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.insert(s);
    }
    return out;
}

/// Build the canonical split for a separator: V1 = S plus the lex-smallest
/// full component (or the lex-smallest component when none is full), V2 =
/// everything else.
std::optional<SeparatorSplit> split_for_separator(const Adjacency& adj,
                                                  const std::vector<int>& s) {
    const int n = static_cast<int>(adj.size());
    std::vector<bool> blocked(n, false);
    for (int v : s) blocked[v] = true;
    auto comps = components_avoiding(adj, blocked);
    if (comps.size() < 2) return std::nullopt;
    const std::vector<int>* first_full = nullptr;
    for (const auto& c : comps)
        if (neighborhood_of_set(adj, c) == s) { first_full = &c; break; }
    if (!first_full) first_full = &comps[0];
    SeparatorSplit split;
    split.s = s;
    split.v1 = sorted_unique([&] {
        std::vector<int> v1 = s;
        v1.insert(v1.end(), first_full->begin(), first_full->end());
        return v1;
    }());
    std::vector<bool> in_c(n, false);
    for (int v : *first_full) in_c[v] = true;
    for (int v = 0; v < n; ++v)
        if (!in_c[v]) split.v2.push_back(v);
    if (split.v1.size() == split.s.size() || split.v2.size() == split.s.size())
        return std::nullopt;
    return split;
}

} // namespace

Complex Complex::make(std::vector<std::string> vertices,
                      const std::vector<std::vector<std::string>>& generators) {
    if (vertices.empty()) throw Error("complex: empty vertex list");
    std::map<std::string, int> idx;
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
        if (!idx.emplace(vertices[i], i).second)
            throw Error("complex: duplicate vertex name '" + vertices[i] + "'");
    std::vector<std::vector<int>> gens;
    for (const auto& g : generators) {
        std::vector<int> ig;
        for (const auto& name : g) {
            auto it = idx.find(name);
            if (it == idx.end()) throw Error("complex: unknown vertex name '" + name + "'");
            ig.push_back(it->second);
        }
        gens.push_back(std::move(ig));
    }
    return make_indexed(std::move(vertices), std::move(gens));
}

Complex Complex::make_indexed(std::vector<std::string> vertices,
                              std::vector<std::vector<int>> generators) {
    if (vertices.empty()) throw Error("complex: empty vertex list");
    const int n = static_cast<int>(vertices.size());
    for (const auto& g : generators)
        for (int v : g)
            if (v < 0 || v >= n) throw Error("complex: generator vertex index out of range");
    Complex cx;
    cx.vertices_ = std::move(vertices);
    std::vector<std::vector<int>> gens;
    for (auto& g : generators)
        if (!g.empty()) gens.push_back(std::move(g));
    cx.generators_ = antichain(std::move(gens));
    return cx;
}

int Complex::vertex_index(const std::string& name) const {
    auto it = std::find(vertices_.begin(), vertices_.end(), name);
    if (it == vertices_.end()) throw Error("complex: unknown vertex name '" + name + "'");
    return static_cast<int>(it - vertices_.begin());
}

bool Complex::contains(const std::vector<int>& face) const {
    if (face.empty()) return true;
    auto f = sorted_unique(face);
    for (const auto& g : generators_)
        if (subset_of(f, g)) return true;
    return false;
}

std::vector<std::vector<int>> Complex::faces(std::size_t limit) const {
    std::set<std::vector<int>> faces;
    for (const auto& g : generators_) {
        if (g.size() > 25) throw Error("complex: generator too large to enumerate faces");
        const std::uint32_t m = 1u << g.size();
        for (std::uint32_t mask = 1; mask < m; ++mask) {
            std::vector<int> f;
            for (std::size_t b = 0; b < g.size(); ++b)
                if (mask & (1u << b)) f.push_back(g[b]);
            faces.insert(std::move(f));
            if (faces.size() > limit) throw Error("complex: face count exceeds limit");
        }
    }
    std::vector<std::vector<int>> out(faces.begin(), faces.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

std::vector<std::pair<int, int>> Complex::skeleton_edges() const {
    std::set<std::pair<int, int>> edges;
    for (const auto& g : generators_)
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j)
                edges.emplace(g[i], g[j]);
    return {edges.begin(), edges.end()};
}

Complex Complex::induced(const std::vector<int>& sub) const {
    auto keep = sorted_unique(sub);
    for (int v : keep)
        if (v < 0 || v >= num_vertices()) throw Error("induced: vertex index out of range");
    std::vector<std::string> names;
    std::vector<int> remap(num_vertices(), -1);
    for (int v : keep) {
        remap[v] = static_cast<int>(names.size());
        names.push_back(vertices_[v]);
    }
    std::vector<std::vector<int>> gens;
    for (const auto& g : generators_) {
        std::vector<int> ig;
        for (int v : g)
            if (remap[v] >= 0) ig.push_back(remap[v]);
        if (!ig.empty()) gens.push_back(std::move(ig));
    }
    return make_indexed(std::move(names), std::move(gens));
}

Complex Complex::completed(const std::vector<std::vector<int>>& sets) const {
    std::vector<std::vector<int>> gens = generators_;
    for (const auto& s : sets) {
        for (int v : s)
            if (v < 0 || v >= num_vertices())
                throw Error("completed: vertex index out of range");
        if (!s.empty()) gens.push_back(sorted_unique(s));
    }
    Complex cx;
    cx.vertices_ = vertices_;
    cx.generators_ = antichain(std::move(gens));
    cx.grid_ = grid_;
    return cx;
}

std::vector<std::vector<int>> skeleton_components(const Complex& cx,
                                                  const std::vector<int>& removed) {
    auto adj = build_adjacency(cx);
    std::vector<bool> blocked(cx.num_vertices(), false);
    for (int v : removed) blocked[v] = true;
    return components_avoiding(adj, blocked);
}

namespace {

void grid_regular_separators(const Complex& cx, std::vector<std::vector<int>>& out) {
    if (!cx.grid()) throw Error("grid-regular separators require grid metadata");
    const GridInfo g = *cx.grid();
    auto row_set = [&](int r0, int r1) {
        std::vector<int> s;
        for (int r = r0; r <= r1; ++r)
            for (int c = 1; c <= g.cols; ++c) s.push_back(g.vertex_at(r, c));
        return sorted_unique(std::move(s));
    };
    auto col_set = [&](int c0, int c1) {
        std::vector<int> s;
        for (int c = c0; c <= c1; ++c)
            for (int r = 1; r <= g.rows; ++r) s.push_back(g.vertex_at(r, c));
        return sorted_unique(std::move(s));
    };
    for (int r = 2; r < g.rows; ++r) out.push_back(row_set(r, r));
    for (int r = 2; r + 1 < g.rows; ++r) out.push_back(row_set(r, r + 1));
    for (int c = 2; c < g.cols; ++c) out.push_back(col_set(c, c));
    for (int c = 2; c + 1 < g.cols; ++c) out.push_back(col_set(c, c + 1));
    const int shortest = std::min(g.rows, g.cols);
    // anti diagonals r+c = k, then main diagonals r-c = d; only the short
    // corner diagonals (length < min(rows, cols)) are separators we use
    for (int k = 3; k <= g.rows + g.cols - 1; ++k) {
        std::vector<int> s;
        for (int r = 1; r <= g.rows; ++r) {
            int c = k - r;
            if (c >= 1 && c <= g.cols) s.push_back(g.vertex_at(r, c));
        }
        if (static_cast<int>(s.size()) >= 2 && static_cast<int>(s.size()) < shortest)
            out.push_back(sorted_unique(std::move(s)));
    }
    for (int d = -(g.cols - 2); d <= g.rows - 2; ++d) {
        std::vector<int> s;
        for (int r = 1; r <= g.rows; ++r) {
            int c = r - d;
            if (c >= 1 && c <= g.cols) s.push_back(g.vertex_at(r, c));
        }
        if (static_cast<int>(s.size()) >= 2 && static_cast<int>(s.size()) < shortest)
            out.push_back(sorted_unique(std::move(s)));
    }
}

} // namespace

SeparatorEnumeration enumerate_separators(const Complex& cx, SeparatorStrategy strategy,
                                          int k, std::size_t cap) {
    if (cx.num_vertices() == 0) throw Error("enumerate_separators: empty complex");
    SeparatorEnumeration result;
    auto adj = build_adjacency(cx);
    std::vector<bool> none(cx.num_vertices(), false);
    auto comps = components_avoiding(adj, none);

    // disconnected skeleton: report each component boundary as an
    // empty-separator split
    if (comps.size() > 1) {
        for (const auto& comp : comps) {
            SeparatorSplit split;
            split.v1 = comp;
            for (int v = 0; v < cx.num_vertices(); ++v)
                if (!std::binary_search(comp.begin(), comp.end(), v)) split.v2.push_back(v);
            if (!split.v2.empty()) result.splits.push_back(std::move(split));
        }
    }

    std::vector<std::vector<int>> seps;
    if (strategy == SeparatorStrategy::GridRegular) {
        grid_regular_separators(cx, seps);
    } else {
        auto found = minimal_separators(adj, cap, &result.truncated);
        seps.assign(found.begin(), found.end());
    }
    for (const auto& s : seps) {
        if (result.splits.size() >= cap) { result.truncated = true; break; }
        auto split = split_for_separator(adj, s);
        if (!split) continue;
        if (strategy == SeparatorStrategy::MinPartSize) {
            std::size_t p1 = split->v1.size() - split->s.size();
            std::size_t p2 = split->v2.size() - split->s.size();
            if (std::min(p1, p2) < static_cast<std::size_t>(k)) continue;
        }
        result.splits.push_back(std::move(*split));
    }
    return result;
}

PrimeDecomposition prime_components(const Complex& cx) {
    PrimeDecomposition out;
    std::vector<Complex> stack{cx};
    while (!stack.empty()) {
        Complex cur = std::move(stack.back());
        stack.pop_back();
        auto adj = build_adjacency(cur);
        std::vector<bool> none(cur.num_vertices(), false);
        auto comps = components_avoiding(adj, none);
        if (comps.size() > 1) {
            // empty separator: split into skeleton components
            out.separators.push_back({});
            for (auto it = comps.rbegin(); it != comps.rend(); ++it)
                stack.push_back(cur.induced(*it));
            continue;
        }
        bool truncated = false;
        auto seps = minimal_separators(adj, 10000, &truncated);
        const std::vector<int>* complete_sep = nullptr;
        for (const auto& s : seps)
            if (cur.contains(s)) { complete_sep = &s; break; }
        if (!complete_sep) {
            out.components.push_back(std::move(cur));
            continue;
        }
        std::vector<int> names_sep;
        for (int v : *complete_sep) names_sep.push_back(cx.vertex_index(cur.vertex_name(v)));
        out.separators.push_back(sorted_unique(std::move(names_sep)));
        std::vector<bool> blocked(cur.num_vertices(), false);
        for (int v : *complete_sep) blocked[v] = true;
        auto parts = components_avoiding(adj, blocked);
        for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
            std::vector<int> piece = *it;
            piece.insert(piece.end(), complete_sep->begin(), complete_sep->end());
            stack.push_back(cur.induced(piece));
        }
    }
    std::sort(out.components.begin(), out.components.end(),
              [](const Complex& a, const Complex& b) { return a.vertices() < b.vertices(); });
    std::sort(out.separators.begin(), out.separators.end());
    return out;
}

Decomposability is_decomposable(const Complex& cx) {
    Decomposability res;
    const int n = cx.num_vertices();
    auto adj = build_adjacency(cx);
    std::vector<std::vector<bool>> is_adj(n, std::vector<bool>(n, false));
    for (int u = 0; u < n; ++u)
        for (int w : adj[u]) is_adj[u][w] = true;

    // maximum cardinality search; visit_order[i] = i-th visited vertex
    std::vector<int> weight(n, 0), pos(n, -1), visit_order;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (pos[v] < 0 && (best < 0 || weight[v] > weight[best])) best = v;
        pos[best] = step;
        visit_order.push_back(best);
        for (int w : adj[best])
            if (pos[w] < 0) ++weight[w];
    }

    // chordality: earlier neighbors minus the latest one must be neighbors
    // of the latest one
    for (int v : visit_order) {
        std::vector<int> earlier;
        for (int w : adj[v])
            if (pos[w] < pos[v]) earlier.push_back(w);
        if (earlier.empty()) continue;
        int parent = *std::max_element(earlier.begin(), earlier.end(),
                                       [&](int a, int b) { return pos[a] < pos[b]; });
        for (int w : earlier)
            if (w != parent && !is_adj[w][parent]) {
                res.diagnostic = "1-skeleton is not chordal";
                return res;
            }
    }

    // maximal cliques of the chordal skeleton
    std::vector<std::vector<int>> cliques;
    for (int v : visit_order) {
        std::vector<int> c{v};
        for (int w : adj[v])
            if (pos[w] < pos[v]) c.push_back(w);
        std::sort(c.begin(), c.end());
        cliques.push_back(std::move(c));
    }
    std::vector<std::vector<int>> maximal;
    for (std::size_t i = 0; i < cliques.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < cliques.size() && !dominated; ++j)
            if (i != j && cliques[i].size() <= cliques[j].size() &&
                subset_of(cliques[i], cliques[j]))
                dominated = cliques[i].size() < cliques[j].size() || i > j;
        if (!dominated) maximal.push_back(cliques[i]);
    }
    std::sort(maximal.begin(), maximal.end());
    maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());

    if (maximal != cx.generators()) {
        res.diagnostic = "complex is not the clique complex of its 1-skeleton";
        return res;
    }

    // order cliques along a maximum-weight junction tree so the running
    // intersection property holds
    std::vector<std::vector<int>> ordered;
    std::vector<bool> used(maximal.size(), false);
    if (!maximal.empty()) {
        ordered.push_back(maximal[0]);
        used[0] = true;
        while (ordered.size() < maximal.size()) {
            int best = -1;
            std::size_t best_w = 0;
            std::vector<int> seen;
            for (const auto& c : ordered) seen.insert(seen.end(), c.begin(), c.end());
            seen = sorted_unique(std::move(seen));
            for (std::size_t j = 0; j < maximal.size(); ++j) {
                if (used[j]) continue;
                std::size_t w = intersect(maximal[j], seen).size();
                if (best < 0 || w > best_w) { best = static_cast<int>(j); best_w = w; }
            }
            used[best] = true;
            ordered.push_back(maximal[best]);
        }
        // running intersection: each prefix intersection must lie inside a
        // single earlier clique
        std::vector<int> prefix = ordered[0];
        for (std::size_t i = 1; i < ordered.size(); ++i) {
            auto inter = intersect(ordered[i], prefix);
            bool housed = inter.empty();
            for (std::size_t j = 0; j < i && !housed; ++j)
                housed = subset_of(inter, ordered[j]);
            if (!housed) {
                res.diagnostic = "running intersection property fails";
                return res;
            }
            prefix = sorted_unique([&] {
                std::vector<int> u = prefix;
                u.insert(u.end(), ordered[i].begin(), ordered[i].end());
                return u;
            }());
        }
    }
    res.decomposable = true;
    res.components = std::move(ordered);
    return res;
}

Complex grid_complex(int rows, int cols) {
    if (rows < 1 || cols < 1) throw Error("grid_complex: rows and cols must be >= 1");
    std::vector<std::string> names(static_cast<std::size_t>(rows) * cols);
    GridInfo g{rows, cols};
    for (int c = 1; c <= cols; ++c)
        for (int r = 1; r <= rows; ++r)
            names[g.vertex_at(r, c)] = std::to_string(g.vertex_at(r, c) + 1);
    std::vector<std::vector<int>> gens;
    for (int c = 1; c <= cols; ++c)
        for (int r = 1; r <= rows; ++r) {
            if (r + 1 <= rows) gens.push_back({g.vertex_at(r, c), g.vertex_at(r + 1, c)});
            if (c + 1 <= cols) gens.push_back({g.vertex_at(r, c), g.vertex_at(r, c + 1)});
        }
    if (gens.empty()) gens.push_back({0}); // 1x1 grid
    Complex cx = Complex::make_indexed(std::move(names), std::move(gens));
    cx.set_grid(g);
    return cx;
}

Complex clique_complex(const std::vector<std::string>& vertices,
                       const std::vector<std::pair<std::string, std::string>>& edges,
                       std::size_t clique_cap) {
    Complex base = Complex::make(vertices, {});
    const int n = base.num_vertices();
    std::vector<std::vector<bool>> is_adj(n, std::vector<bool>(n, false));
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : edges) {
        int u = base.vertex_index(a), v = base.vertex_index(b);
        if (u == v) throw Error("clique_complex: self-loop on '" + a + "'");
        if (!is_adj[u][v]) {
            is_adj[u][v] = is_adj[v][u] = true;
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
    }
    for (auto& nb : adj) nb = sorted_unique(std::move(nb));

    // Bron-Kerbosch with pivoting
    std::vector<std::vector<int>> cliques;
    std::vector<int> R;
    std::function<void(std::vector<int>, std::vector<int>)> expand =
        [&](std::vector<int> P, std::vector<int> X) {
            if (P.empty() && X.empty()) {
                if (cliques.size() >= clique_cap)
                    throw Error("clique enumeration cap exceeded");
                cliques.push_back(R);
                return;
            }
            int pivot = -1;
            std::size_t best = 0;
            for (int u : P) {
                std::size_t d = intersect(P, adj[u]).size();
                if (pivot < 0 || d > best) { pivot = u; best = d; }
            }
            for (int u : X) {
                std::size_t d = intersect(P, adj[u]).size();
                if (pivot < 0 || d > best) { pivot = u; best = d; }
            }
            std::vector<int> cand;
            for (int v : P)
                if (pivot < 0 || !is_adj[pivot][v]) cand.push_back(v);
            for (int v : cand) {
                R.push_back(v);
                expand(intersect(P, adj[v]), intersect(X, adj[v]));
                R.pop_back();
                P.erase(std::find(P.begin(), P.end(), v));
                X.insert(std::lower_bound(X.begin(), X.end(), v), v);
            }
        };
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    expand(all, {});
    return Complex::make_indexed(std::vector<std::string>(vertices), std::move(cliques));
}

} // namespace emlp
