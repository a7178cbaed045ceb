#include "support/fixtures.hpp"

#include <algorithm>

namespace emlp::testing {

Fixture two_binary_saturated() {
    Fixture f;
    f.schema = Schema::uniform({"x1", "x2"}, 2);
    f.complex = Complex::make({"x1", "x2"}, {{"x1", "x2"}});
    return f;
}

Counts two_binary_counts(const Schema& schema) {
    return counts_from_digit_records(schema, {{"00", 2}, {"01", 3}, {"10", 5}, {"11", 0}});
}

Fixture abc_chain() {
    Fixture f;
    f.schema = Schema::uniform({"a", "b", "c"}, 2);
    f.complex = Complex::make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    return f;
}

Fixture grid_fixture(int rows, int cols) {
    Fixture f;
    f.complex = grid_complex(rows, cols);
    f.schema = Schema::uniform(f.complex.vertices(), 2);
    return f;
}

Fixture random_small_model(CounterRng& rng) {
    int p = 2 + int(rng.next_u64() % 3);
    std::vector<std::string> names;
    std::vector<Variable> vars;
    for (int v = 0; v < p; ++v) {
        names.push_back("v" + std::to_string(v + 1));
        int levels = (rng.next_u64() % 4 == 0) ? 3 : 2;
        std::vector<std::string> labels;
        for (int l = 0; l < levels; ++l) labels.push_back(std::to_string(l));
        vars.push_back({names.back(), labels});
    }
    Fixture f;
    f.schema = Schema::make(vars);
    // random generators: a few random subsets, plus singletons so every
    // variable carries a main effect
    std::vector<std::vector<int>> gens;
    for (int v = 0; v < p; ++v) gens.push_back({v});
    int extra = 1 + int(rng.next_u64() % 3);
    for (int g = 0; g < extra; ++g) {
        std::vector<int> gen;
        for (int v = 0; v < p; ++v)
            if (rng.next_u64() % 2) gen.push_back(v);
        if (gen.size() >= 2) gens.push_back(gen);
    }
    f.complex = Complex::make_indexed(names, std::move(gens));
    return f;
}

Counts random_sparse_counts(const Schema& schema, CounterRng& rng, int max_total) {
    auto cells = schema.cell_count();
    std::vector<std::pair<Cell, std::int64_t>> records;
    int total = 0;
    int draws = 1 + int(rng.next_u64() % std::uint64_t(max_total));
    for (int k = 0; k < draws; ++k) {
        std::uint64_t idx = rng.next_u64() % *cells;
        records.emplace_back(cell_from_index(idx, schema), 1 + int(rng.next_u64() % 4));
        ++total;
    }
    if (records.empty()) records.emplace_back(cell_from_index(0, schema), 1);
    return Counts::from_records(records, schema);
}

Fixture random_decomposable_model(CounterRng& rng, int max_vertices) {
    int p = 3 + int(rng.next_u64() % std::uint64_t(max_vertices - 2));
    std::vector<std::string> names;
    for (int v = 0; v < p; ++v) names.push_back("v" + std::to_string(v + 1));
    // grow a chordal graph: each new vertex attaches to a clique inside the
    // neighborhood of an existing vertex
    std::vector<std::vector<int>> adj(p);
    std::vector<std::pair<std::string, std::string>> edges;
    for (int v = 1; v < p; ++v) {
        int anchor = int(rng.next_u64() % std::uint64_t(v));
        // candidate clique: anchor plus earlier neighbors of the anchor
        std::vector<int> cand{anchor};
        for (int w : adj[anchor])
            if (w < v) cand.push_back(w);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        int take = 1 + int(rng.next_u64() % cand.size());
        // anchor always kept; the attachment set must be a clique, and
        // {anchor} ∪ (neighbors of anchor) restricted arbitrarily need not
        // be one, so keep anchor + a clique among its neighbors greedily
        std::vector<int> attach{anchor};
        for (int w : cand) {
            if (w == anchor || static_cast<int>(attach.size()) >= take) continue;
            bool ok = true;
            for (int u : attach)
                if (u != anchor &&
                    std::find(adj[u].begin(), adj[u].end(), w) == adj[u].end())
                    ok = false;
            if (ok && std::find(adj[anchor].begin(), adj[anchor].end(), w) != adj[anchor].end())
                attach.push_back(w);
        }
        for (int u : attach) {
            adj[u].push_back(v);
            adj[v].push_back(u);
            edges.emplace_back(names[u], names[v]);
        }
    }
    Fixture f;
    f.schema = Schema::uniform(names, 2);
    f.complex = clique_complex(names, edges);
    return f;
}

Counts counts_from_digit_records(
    const Schema& schema, const std::vector<std::pair<std::string, std::int64_t>>& records) {
    std::vector<std::pair<Cell, std::int64_t>> recs;
    for (const auto& [digits, n] : records)
        recs.emplace_back(cell_from_digits(digits, schema), n);
    return Counts::from_records(recs, schema);
}

std::uint64_t cell_index_of_digits(const Schema& schema, const std::string& digits) {
    return cell_index(cell_from_digits(digits, schema), schema);
}

} // namespace emlp::testing
