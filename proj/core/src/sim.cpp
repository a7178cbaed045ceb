#include "emlp/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "emlp/parallel.hpp"

namespace emlp {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix_fin(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
    key_ = splitmix_fin(seed + kGamma) ^ splitmix_fin(stream * kGamma + 0x1234567899ABCDEFull);
}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return splitmix_fin(key_ + counter_ * kGamma);
}

double CounterRng::next_unit() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0;
    while (u1 == 0) u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::vector<double> model_probabilities(const DesignMatrix& a, const std::vector<double>& theta) {
    if (static_cast<int>(theta.size()) != a.rows())
        throw Error("model probabilities: theta dimension mismatch");
    std::vector<double> g(a.hrows(), 0.0);
    for (int r = 0; r < a.rows(); ++r) g[1 + r] = theta[r];
    auto t = a.apply_homog(g);
    double mx = *std::max_element(t.begin(), t.end());
    double z = 0;
    for (double v : t) z += std::exp(v - mx);
    std::vector<double> p(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) p[i] = std::exp(t[i] - mx) / z;
    return p;
}

Counts sample_counts(const DesignMatrix& a, const std::vector<double>& theta, std::uint64_t n,
                     CounterRng& rng) {
    auto p = model_probabilities(a, theta);
    std::vector<double> cdf(p.size());
    double acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        cdf[i] = acc;
    }
    std::vector<std::pair<Cell, std::int64_t>> records;
    std::map<std::uint64_t, std::int64_t> hits;
    for (std::uint64_t k = 0; k < n; ++k) {
        double u = rng.next_unit() * acc;
        std::size_t i = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (i >= p.size()) i = p.size() - 1;
        ++hits[i];
    }
    for (const auto& [idx, cnt] : hits)
        records.emplace_back(cell_from_index(idx, a.schema()), cnt);
    return Counts::from_records(records, a.schema());
}

ChainSampler::ChainSampler(const Complex& cx, const Schema& schema, const ChainFamily& family,
                           const DesignMatrix& rows_index, const std::vector<double>& theta)
    : schema_(&schema), blocks_(family.blocks) {
    if (static_cast<int>(theta.size()) != rows_index.rows())
        throw Error("chain sampler: theta dimension mismatch");
    const std::size_t q = blocks_.size();
    for (const auto& b : blocks_) spaces_.push_back(CellSpace::make(schema, b));
    left_sep_.resize(q);
    right_sep_.resize(q);
    for (std::size_t k = 0; k < q; ++k) {
        std::vector<int> left, right;
        if (k > 0)
            std::set_intersection(blocks_[k - 1].begin(), blocks_[k - 1].end(),
                                  blocks_[k].begin(), blocks_[k].end(),
                                  std::back_inserter(left));
        if (k + 1 < q)
            std::set_intersection(blocks_[k].begin(), blocks_[k].end(), blocks_[k + 1].begin(),
                                  blocks_[k + 1].end(), std::back_inserter(right));
        left_sep_[k] = CellSpace::make(schema, left);
        right_sep_[k] = CellSpace::make(schema, right);
    }
    // assign every face to the first block containing it
    std::vector<std::vector<std::size_t>> assigned(q);
    auto faces = cx.faces();
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        bool housed = false;
        for (std::size_t k = 0; k < q && !housed; ++k)
            if (std::includes(blocks_[k].begin(), blocks_[k].end(), faces[fi].begin(),
                              faces[fi].end())) {
                assigned[k].push_back(fi);
                housed = true;
            }
        if (!housed)
            throw Error("chain sampler: blocks do not cover the complex");
    }
    logpot_.resize(q);
    for (std::size_t k = 0; k < q; ++k) {
        const auto& block = blocks_[k];
        logpot_[k].assign(spaces_[k]->size(), 0.0);
        std::vector<std::uint8_t> digits;
        for (std::uint64_t cell = 0; cell < spaces_[k]->size(); ++cell) {
            spaces_[k]->decode(cell, digits);
            double acc = 0;
            for (std::size_t fi : assigned[k]) {
                const auto& face = faces[fi];
                std::vector<std::uint8_t> levels(face.size());
                bool active = true;
                for (std::size_t t = 0; t < face.size(); ++t) {
                    std::size_t pos =
                        std::lower_bound(block.begin(), block.end(), face[t]) - block.begin();
                    if (digits[pos] == 0) { active = false; break; }
                    levels[t] = digits[pos];
                }
                if (active) acc += theta[rows_index.row_of(face, levels)];
            }
            logpot_[k][cell] = acc;
        }
    }
    // backward messages over the right separators
    message_.assign(q, {});
    message_[q - 1] = {};
    for (std::size_t k = q - 1; k-- > 0;) {
        const auto& next_space = *spaces_[k + 1];
        const auto& sep = *right_sep_[k]; // == left separator of block k+1
        std::vector<double> mx(sep.size(), -std::numeric_limits<double>::infinity());
        std::vector<double> sum(sep.size(), 0.0);
        const auto& pot = logpot_[k + 1];
        const auto& nextmsg = message_[k + 1];
        // value of a block-(k+1) cell: pot + next message on its right digits
        std::vector<double> val(next_space.size());
        if (nextmsg.empty()) {
            for (std::uint64_t c = 0; c < next_space.size(); ++c) val[c] = pot[c];
        } else {
            for_each_projected(next_space, *right_sep_[k + 1],
                               [&](std::uint64_t c, std::uint64_t s) {
                                   val[c] = pot[c] + nextmsg[s];
                               });
        }
        for_each_projected(next_space, sep, [&](std::uint64_t c, std::uint64_t s) {
            mx[s] = std::max(mx[s], val[c]);
        });
        for_each_projected(next_space, sep, [&](std::uint64_t c, std::uint64_t s) {
            sum[s] += std::exp(val[c] - mx[s]);
        });
        message_[k].resize(sep.size());
        for (std::uint64_t s = 0; s < sep.size(); ++s)
            message_[k][s] = mx[s] + std::log(sum[s]);
    }
    // normalizer from block 0
    {
        std::vector<double> val(spaces_[0]->size());
        if (message_[0].empty()) {
            val = logpot_[0];
        } else {
            for_each_projected(*spaces_[0], *right_sep_[0],
                               [&](std::uint64_t c, std::uint64_t s) {
                                   val[c] = logpot_[0][c] + message_[0][s];
                               });
        }
        double mx = *std::max_element(val.begin(), val.end());
        double z = 0;
        for (double v : val) z += std::exp(v - mx);
        log_norm_ = mx + std::log(z);
    }
}

Cell ChainSampler::draw(CounterRng& rng) const {
    Cell full(schema_->arity(), 0);
    std::vector<std::uint8_t> digits;
    std::uint64_t prev_cell = 0;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        const auto& space = *spaces_[k];
        // restriction: left separator digits must match the previous block
        std::uint64_t want_left = 0;
        if (k > 0) {
            // left separator index from the drawn full cell
            want_left = left_sep_[k]->index_of_cell(full);
        }
        // collect weights of admissible cells
        std::vector<double> val(space.size(), -std::numeric_limits<double>::infinity());
        double mx = -std::numeric_limits<double>::infinity();
        const auto& msg = message_[k];
        auto fill = [&](std::uint64_t c, std::uint64_t left, std::uint64_t right) {
            if (k > 0 && left != want_left) return;
            double v = logpot_[k][c] + (msg.empty() ? 0.0 : msg[right]);
            val[c] = v;
            mx = std::max(mx, v);
        };
        // iterate with both separators projected
        {
            std::vector<std::uint64_t> lefts(space.size()), rights(space.size());
            if (k > 0)
                for_each_projected(space, *left_sep_[k],
                                   [&](std::uint64_t c, std::uint64_t s) { lefts[c] = s; });
            if (!msg.empty())
                for_each_projected(space, *right_sep_[k],
                                   [&](std::uint64_t c, std::uint64_t s) { rights[c] = s; });
            for (std::uint64_t c = 0; c < space.size(); ++c) fill(c, lefts[c], rights[c]);
        }
        double z = 0;
        for (std::uint64_t c = 0; c < space.size(); ++c)
            if (val[c] > -std::numeric_limits<double>::infinity())
                z += std::exp(val[c] - mx);
        double u = rng.next_unit() * z;
        std::uint64_t chosen = 0;
        double acc = 0;
        for (std::uint64_t c = 0; c < space.size(); ++c) {
            if (val[c] == -std::numeric_limits<double>::infinity()) continue;
            acc += std::exp(val[c] - mx);
            chosen = c;
            if (acc >= u) break;
        }
        space.decode(chosen, digits);
        for (std::size_t t = 0; t < blocks_[k].size(); ++t) full[blocks_[k][t]] = digits[t];
        prev_cell = chosen;
    }
    (void)prev_cell;
    return full;
}

Counts ChainSampler::sample(std::uint64_t n, CounterRng& rng) const {
    std::vector<Cell> rows;
    rows.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) rows.push_back(draw(rng));
    return Counts::from_observations(rows, *schema_);
}

double ChainSampler::probability(const Cell& cell) const {
    double acc = -log_norm_;
    for (std::size_t k = 0; k < blocks_.size(); ++k)
        acc += logpot_[k][spaces_[k]->index_of_cell(cell)];
    return std::exp(acc);
}

std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>
grid_two_families(const Complex& cx) {
    if (!cx.grid()) throw Error("two-family iteration requires grid metadata");
    GridInfo g = *cx.grid();
    bool by_cols = g.cols >= g.rows;
    int longd = by_cols ? g.cols : g.rows;
    int shortd = by_cols ? g.rows : g.cols;
    if (longd < 4) throw Error("grid too small for two separator families");
    auto line = [&](int pos) {
        std::vector<int> s;
        for (int u = 1; u <= shortd; ++u)
            s.push_back(by_cols ? g.vertex_at(u, pos) : g.vertex_at(pos, u));
        std::sort(s.begin(), s.end());
        return s;
    };
    std::vector<std::vector<int>> blue, red;
    for (int pos = 3; pos <= longd - 1; pos += 2) blue.push_back(line(pos));
    for (int pos = 2; pos <= longd - 1; pos += 2) red.push_back(line(pos));
    if (blue.empty() || red.empty())
        throw Error("grid too small for two separator families");
    return {blue, red};
}

namespace {

struct RepStats {
    bool nonexist = false;
    int f1_eq_ft = -1;
    int f2_eq_ft = -1;
    int f1_eq_f2 = -1;
    int rounds = -1;
    double ms = 0;
};

} // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.replicates < 1) throw Error("experiment: replicates must be >= 1");
    DesignMatrix design(cfg.model, cfg.schema);
    std::vector<SeparatorSplit> splits;
    std::vector<std::vector<int>> cover;
    std::vector<std::vector<int>> blue, red;
    ChainFamily blue_family;
    if (cfg.implicit_mode) {
        std::tie(blue, red) = grid_two_families(cfg.model);
        blue_family = chain_family(cfg.model, blue);
    } else {
        if (cfg.run_inner)
            splits = enumerate_separators(cfg.model, cfg.inner_strategy, cfg.inner_k).splits;
        if (cfg.run_outer) cover = cover_from_strategy(cfg.model, cfg.outer_strategy, cfg.outer_k);
    }

    std::vector<ExperimentRow> rows;
    for (std::size_t si = 0; si < cfg.sample_sizes.size(); ++si) {
        const std::uint64_t n = cfg.sample_sizes[si];
        std::vector<RepStats> stats(cfg.replicates);
        parallel_for(cfg.replicates, cfg.threads, [&](std::size_t rep) {
            auto t0 = std::chrono::steady_clock::now();
            CounterRng rng(cfg.seed, (std::uint64_t(si) << 32) | rep);
            std::vector<double> theta(design.rows(), 0.0);
            if (cfg.theta == ThetaSource::StdNormal)
                for (auto& v : theta) v = rng.next_gaussian();
            RepStats& st = stats[rep];
            if (cfg.implicit_mode) {
                ChainSampler sampler(cfg.model, cfg.schema, blue_family, design, theta);
                Counts counts = sampler.sample(n, rng);
                auto tf = iterate_two_families(cfg.model, cfg.schema, counts, blue, red,
                                               cfg.inner_max_rounds, cfg.lp_mode);
                st.nonexist = !tf.outer.is_full();
                st.f1_eq_f2 = tf.inner.equals(tf.outer) ? 1 : 0;
                st.rounds = tf.rounds;
            } else {
                Counts counts = sample_counts(design, theta, n, rng);
                CellSet support = counts.support_set(design.space());
                std::optional<CellSet> ft, f1, f2;
                if (cfg.run_exact) {
                    FacialSolver solver(design, cfg.lp_mode);
                    ft = solver.closure(support);
                    st.nonexist = !ft->is_full();
                }
                if (cfg.run_inner)
                    f1 = inner_approx(cfg.model, cfg.schema, support, splits,
                                      cfg.inner_max_rounds, cfg.inner_complete_parts,
                                      cfg.lp_mode)
                             .f1;
                if (cfg.run_outer)
                    f2 = outer_approx_cells(cfg.model, cfg.schema, support, cover, cfg.lp_mode);
                if (!cfg.run_exact && f2) st.nonexist = !f2->is_full();
                if (ft && f1) st.f1_eq_ft = (*f1 == *ft) ? 1 : 0;
                if (ft && f2) st.f2_eq_ft = (*f2 == *ft) ? 1 : 0;
                if (f1 && f2) st.f1_eq_f2 = (*f1 == *f2) ? 1 : 0;
            }
            auto t1 = std::chrono::steady_clock::now();
            st.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        });
        ExperimentRow row;
        row.sample_size = n;
        row.n_reps = cfg.replicates;
        double ms = 0;
        int nex = 0, c1 = 0, n1 = 0, c2 = 0, n2 = 0, c12 = 0, n12 = 0;
        long rounds_sum = 0;
        int rounds_n = 0, rounds_le3 = 0;
        for (const auto& st : stats) {
            ms += st.ms;
            nex += st.nonexist ? 1 : 0;
            if (st.f1_eq_ft >= 0) { ++n1; c1 += st.f1_eq_ft; }
            if (st.f2_eq_ft >= 0) { ++n2; c2 += st.f2_eq_ft; }
            if (st.f1_eq_f2 >= 0) { ++n12; c12 += st.f1_eq_f2; }
            if (st.rounds >= 0) {
                ++rounds_n;
                rounds_sum += st.rounds;
                if (st.rounds <= 3) ++rounds_le3;
            }
        }
        row.frac_nonexist = double(nex) / cfg.replicates;
        if (n1) row.frac_f1_eq_ft = double(c1) / n1;
        if (n2) row.frac_f2_eq_ft = double(c2) / n2;
        if (n12) row.frac_f1_eq_f2 = double(c12) / n12;
        row.mean_runtime_ms = ms / cfg.replicates;
        if (rounds_n) {
            row.mean_inner_rounds = double(rounds_sum) / rounds_n;
            row.frac_rounds_le3 = double(rounds_le3) / rounds_n;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows, bool include_timing) {
    std::string out =
        "sample_size,n_reps,frac_nonexist,frac_F1_eq_Ft,frac_F2_eq_Ft,frac_F1_eq_F2,"
        "mean_runtime_ms\n";
    char buf[256];
    auto frac = [](double v) {
        if (v < 0) return std::string();
        char b[32];
        std::snprintf(b, sizeof b, "%.6f", v);
        return std::string(b);
    };
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%llu,%d,", (unsigned long long)r.sample_size, r.n_reps);
        out += buf;
        out += frac(r.frac_nonexist) + "," + frac(r.frac_f1_eq_ft) + "," +
               frac(r.frac_f2_eq_ft) + "," + frac(r.frac_f1_eq_f2) + ",";
        if (include_timing) {
            std::snprintf(buf, sizeof buf, "%.3f", r.mean_runtime_ms);
            out += buf;
        } else {
            out += "0.000";
        }
        out += "\n";
    }
    return out;
}

} // namespace emlp
