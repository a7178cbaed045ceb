#include "emlp/implicit.hpp"

#include <algorithm>

#include "emlp/approx.hpp"

namespace emlp {

namespace {

std::vector<int> vars_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool vars_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

ImplicitFacialSet ImplicitFacialSet::make(std::vector<CellSpacePtr> cover,
                                          std::vector<CellSet> projections) {
    if (cover.size() != projections.size())
        throw Error("implicit set: cover/projection count mismatch");
    ImplicitFacialSet s;
    s.cover_ = std::move(cover);
    s.proj_ = std::move(projections);
    for (std::size_t k = 0; k < s.cover_.size(); ++k)
        if (!s.proj_[k].space()->same_vars(*s.cover_[k]))
            throw Error("implicit set: projection space mismatch at block " + std::to_string(k));
    s.calibrate();
    return s;
}

ImplicitFacialSet ImplicitFacialSet::make_checked(std::vector<CellSpacePtr> cover,
                                                  std::vector<CellSet> projections) {
    ImplicitFacialSet s = make(cover, projections);
    // compare against the uncalibrated input: any shrink means inconsistency
    for (std::size_t k = 0; k < s.proj_.size(); ++k)
        if (s.proj_[k] != projections[k])
            throw Error("implicit set: projections are inconsistent on overlaps");
    return s;
}

void ImplicitFacialSet::calibrate() {
    const std::size_t q = cover_.size();
    if (q <= 1) return;
    // running intersection: non-consecutive overlaps must be contained in
    // every block between them
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i + 2; j < q; ++j) {
            auto inter = vars_intersection(cover_[i]->vars(), cover_[j]->vars());
            if (inter.empty()) continue;
            for (std::size_t k = i + 1; k < j; ++k)
                if (!vars_subset(inter, cover_[k]->vars()))
                    throw Error("implicit set: cover is not a chain");
        }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < q; ++i) {
            auto ov = vars_intersection(cover_[i]->vars(), cover_[i + 1]->vars());
            auto sub = std::make_shared<const CellSpace>(*proj_[i].space(), ov);
            std::uint64_t before = proj_[i + 1].size();
            proj_[i + 1].intersect_with(proj_[i].project(sub).lift(cover_[i + 1]));
            if (proj_[i + 1].size() != before) changed = true;
        }
        for (std::size_t i = q - 1; i > 0; --i) {
            auto ov = vars_intersection(cover_[i]->vars(), cover_[i - 1]->vars());
            auto sub = std::make_shared<const CellSpace>(*proj_[i].space(), ov);
            std::uint64_t before = proj_[i - 1].size();
            proj_[i - 1].intersect_with(proj_[i].project(sub).lift(cover_[i - 1]));
            if (proj_[i - 1].size() != before) changed = true;
        }
    }
    bool any_empty = false;
    for (const auto& p : proj_)
        if (p.is_empty()) any_empty = true;
    if (any_empty)
        for (auto& p : proj_) p = CellSet::empty(p.space());
}

bool ImplicitFacialSet::contains(const Cell& full_cell) const {
    for (std::size_t k = 0; k < cover_.size(); ++k)
        if (!proj_[k].contains(cover_[k]->index_of_cell(full_cell))) return false;
    return true;
}

bool ImplicitFacialSet::is_full() const {
    for (const auto& p : proj_)
        if (!p.is_full()) return false;
    return true;
}

bool ImplicitFacialSet::is_empty() const {
    for (const auto& p : proj_)
        if (p.is_empty()) return true;
    return false;
}

bool ImplicitFacialSet::equals(const ImplicitFacialSet& other) const {
    if (cover_.size() == other.cover_.size()) {
        bool same = true;
        for (std::size_t k = 0; k < cover_.size() && same; ++k)
            same = cover_[k]->same_vars(*other.cover_[k]);
        if (same) {
            for (std::size_t k = 0; k < proj_.size(); ++k)
                if (proj_[k] != other.proj_[k]) return false;
            return true;
        }
    }
    // different covers: compare through exact cross-projections
    for (std::size_t k = 0; k < other.cover_.size(); ++k)
        if (project_to(other.cover_[k]) != other.proj_[k]) return false;
    for (std::size_t k = 0; k < cover_.size(); ++k)
        if (other.project_to(cover_[k]) != proj_[k]) return false;
    return true;
}

CellSet ImplicitFacialSet::project_to(const CellSpacePtr& target) const {
    std::vector<std::size_t> touching;
    for (std::size_t k = 0; k < cover_.size(); ++k)
        if (!vars_intersection(cover_[k]->vars(), target->vars()).empty())
            touching.push_back(k);
    if (touching.empty()) throw Error("implicit set: projection target outside the cover");
    for (std::size_t t = 0; t + 1 < touching.size(); ++t)
        if (touching[t + 1] != touching[t] + 1)
            throw Error("implicit set: projection target touches non-consecutive blocks");
    // the target must absorb the union restricted to it and the inner overlaps
    std::vector<int> uni;
    for (std::size_t k : touching) {
        const auto& v = cover_[k]->vars();
        uni.insert(uni.end(), v.begin(), v.end());
    }
    std::sort(uni.begin(), uni.end());
    uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
    if (!vars_subset(target->vars(), uni))
        throw Error("implicit set: projection target not covered");
    for (std::size_t t = 0; t + 1 < touching.size(); ++t) {
        auto ov = vars_intersection(cover_[touching[t]]->vars(),
                                    cover_[touching[t + 1]]->vars());
        if (!vars_subset(ov, target->vars()))
            throw Error("implicit set: projection target misses a separator overlap");
    }
    CellSet out = CellSet::full(target);
    for (std::size_t k : touching) {
        auto common = vars_intersection(cover_[k]->vars(), target->vars());
        auto sub = std::make_shared<const CellSpace>(*proj_[k].space(), common);
        out.intersect_with(proj_[k].project(sub).lift(target));
    }
    return out;
}

CellSet glue_projections(const CellSet& fa, const CellSet& fb, const Schema& schema) {
    std::vector<int> uni = fa.space()->vars();
    const auto& vb = fb.space()->vars();
    uni.insert(uni.end(), vb.begin(), vb.end());
    auto space = CellSpace::make(schema, uni);
    CellSet out = fa.lift(space);
    out.intersect_with(fb.lift(space));
    return out;
}

ChainFamily chain_family(const Complex& cx, std::vector<std::vector<int>> separators) {
    for (auto& s : separators) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (s.empty()) throw Error("chain family: empty separator");
    }
    for (std::size_t i = 0; i < separators.size(); ++i)
        for (std::size_t j = i + 1; j < separators.size(); ++j)
            if (!vars_intersection(separators[i], separators[j]).empty())
                throw Error("chain family: separators overlap");
    std::vector<int> all_sep;
    for (const auto& s : separators) all_sep.insert(all_sep.end(), s.begin(), s.end());
    auto parts = skeleton_components(cx, all_sep);
    if (parts.size() != separators.size() + 1)
        throw Error("chain family: separators split the graph into " +
                    std::to_string(parts.size()) + " parts, expected " +
                    std::to_string(separators.size() + 1));

    // adjacency between parts and separators via skeleton edges
    auto edges = cx.skeleton_edges();
    std::vector<int> part_of(cx.num_vertices(), -1), sep_of(cx.num_vertices(), -1);
    for (std::size_t p = 0; p < parts.size(); ++p)
        for (int v : parts[p]) part_of[v] = static_cast<int>(p);
    for (std::size_t s = 0; s < separators.size(); ++s)
        for (int v : separators[s]) sep_of[v] = static_cast<int>(s);
    std::vector<std::vector<int>> part_seps(parts.size());
    std::vector<std::vector<int>> sep_parts(separators.size());
    for (auto [u, v] : edges) {
        int pu = part_of[u], pv = part_of[v], su = sep_of[u], sv = sep_of[v];
        if (pu >= 0 && sv >= 0) { part_seps[pu].push_back(sv); sep_parts[sv].push_back(pu); }
        if (pv >= 0 && su >= 0) { part_seps[pv].push_back(su); sep_parts[su].push_back(pv); }
    }
    for (auto& v : part_seps) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.size() > 2) throw Error("chain family: a part touches more than two separators");
    }
    for (auto& v : sep_parts) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.size() != 2) throw Error("chain family: a separator does not bound two parts");
    }
    // walk the chain from the end part with the smallest vertex
    int start = -1;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        if (part_seps[p].size() <= 1) {
            if (start < 0 || parts[p][0] < parts[start][0]) start = static_cast<int>(p);
        }
    }
    if (start < 0) throw Error("chain family: no end part (separators form a cycle)");
    ChainFamily fam;
    std::vector<bool> used_part(parts.size(), false), used_sep(separators.size(), false);
    int cur = start, prev_sep = -1;
    for (;;) {
        used_part[cur] = true;
        std::vector<int> block = parts[cur];
        if (prev_sep >= 0)
            block.insert(block.end(), separators[prev_sep].begin(), separators[prev_sep].end());
        int next_sep = -1;
        for (int s : part_seps[cur])
            if (s != prev_sep && !used_sep[s]) next_sep = s;
        if (next_sep >= 0) {
            block.insert(block.end(), separators[next_sep].begin(), separators[next_sep].end());
            used_sep[next_sep] = true;
        }
        std::sort(block.begin(), block.end());
        fam.blocks.push_back(std::move(block));
        if (next_sep < 0) break;
        fam.separators.push_back(separators[next_sep]);
        int next_part = -1;
        for (int p : sep_parts[next_sep])
            if (!used_part[p]) next_part = p;
        if (next_part < 0) throw Error("chain family: broken chain");
        prev_sep = next_sep;
        cur = next_part;
    }
    if (fam.blocks.size() != parts.size())
        throw Error("chain family: separators do not form a single chain");
    return fam;
}

TwoFamilyResult iterate_two_families(const Complex& cx, const Schema& schema,
                                     const Counts& counts,
                                     const std::vector<std::vector<int>>& blue_separators,
                                     const std::vector<std::vector<int>>& red_separators,
                                     int max_rounds, LPMode mode) {
    for (int v = 0; v < cx.num_vertices(); ++v)
        if (cx.vertex_name(v) != schema.name(v))
            throw Error("iterate_two_families: complex/schema order mismatch");
    ChainFamily blue = chain_family(cx, blue_separators);
    ChainFamily red = chain_family(cx, red_separators);

    std::vector<CellSpacePtr> blue_spaces, red_spaces;
    for (const auto& b : blue.blocks) blue_spaces.push_back(CellSpace::make(schema, b));
    for (const auto& b : red.blocks) red_spaces.push_back(CellSpace::make(schema, b));

    std::vector<std::vector<int>> blue_sep_sets(blue.separators.begin(), blue.separators.end());
    std::vector<std::vector<int>> red_sep_sets(red.separators.begin(), red.separators.end());
    Complex cx_blue = cx.completed(blue_sep_sets);
    Complex cx_red = cx.completed(red_sep_sets);

    std::vector<Complex> blue_outer_cx, blue_inner_cx, red_inner_cx;
    for (const auto& b : blue.blocks) {
        blue_outer_cx.push_back(cx.induced(b));
        blue_inner_cx.push_back(cx_blue.induced(b));
    }
    for (const auto& b : red.blocks) red_inner_cx.push_back(cx_red.induced(b));

    TwoFamilyResult out;

    // outer: one pass over the plain induced blocks
    std::vector<CellSet> outer_proj;
    for (std::size_t k = 0; k < blue.blocks.size(); ++k) {
        CellSet t = counts.projected_support(blue_spaces[k]);
        outer_proj.push_back(facial_reducible(blue_outer_cx[k], schema, t, mode));
    }
    out.outer = ImplicitFacialSet::make(blue_spaces, std::move(outer_proj));

    // inner: alternate the two separator-completed families
    std::vector<CellSet> h;
    for (std::size_t k = 0; k < blue.blocks.size(); ++k)
        h.push_back(counts.projected_support(blue_spaces[k]));
    out.rounds = 0;
    out.stable = false;
    for (int cycle = 0; cycle < max_rounds; ++cycle) {
        std::vector<CellSet> start = h;
        for (std::size_t k = 0; k < blue.blocks.size(); ++k)
            h[k] = facial_reducible(blue_inner_cx[k], schema, h[k], mode);
        ImplicitFacialSet blue_impl = ImplicitFacialSet::make(blue_spaces, h);
        std::vector<CellSet> r;
        for (std::size_t k = 0; k < red.blocks.size(); ++k) {
            CellSet t = blue_impl.project_to(red_spaces[k]);
            r.push_back(facial_reducible(red_inner_cx[k], schema, t, mode));
        }
        ImplicitFacialSet red_impl = ImplicitFacialSet::make(red_spaces, std::move(r));
        for (std::size_t k = 0; k < blue.blocks.size(); ++k)
            h[k] = red_impl.project_to(blue_spaces[k]);
        bool same = true;
        for (std::size_t k = 0; k < h.size() && same; ++k) same = (h[k] == start[k]);
        if (same) { out.stable = true; break; }
        ++out.rounds;
    }
    out.inner = ImplicitFacialSet::make(blue_spaces, std::move(h));
    return out;
}

} // namespace emlp
