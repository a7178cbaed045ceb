#include <doctest.h>

#include "emlp/approx.hpp"
#include "emlp/sim.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace emlp;
using namespace emlp::testing;

namespace {

CellSet cells_of(const Schema& schema, const CellSpacePtr& space,
                 std::initializer_list<const char*> digit_list) {
    CellSet s(space);
    for (const char* d : digit_list) s.insert(cell_index_of_digits(schema, d));
    return s;
}

} // namespace

TEST_CASE("facial_reducible") {
    Fixture f = abc_chain();
    auto space = CellSpace::full(f.schema);
    SUBCASE("decomposable glue keeps two-point sets") {
        CellSet t = cells_of(f.schema, space, {"000", "110"});
        CellSet res = facial_reducible(f.complex, f.schema, t);
        CHECK(res == t);
        DesignMatrix a(f.complex, f.schema);
        CHECK(res == bruteforce_facial(a, t));
    }
    SUBCASE("complete simplex keeps any subset") {
        Complex simplex = Complex::make({"a", "b", "c"}, {{"a", "b", "c"}});
        CounterRng rng(3, 9);
        for (int trial = 0; trial < 5; ++trial) {
            CellSet t(space);
            for (std::uint64_t i = 0; i < 8; ++i)
                if (rng.next_u64() % 2) t.insert(i);
            if (t.is_empty()) t.insert(1);
            CHECK(facial_reducible(simplex, f.schema, t) == t);
        }
    }
    SUBCASE("chain of three complete components keeps a single cell") {
        Schema s4 = Schema::uniform({"a", "b", "c", "d"}, 2);
        Complex chain =
            Complex::make({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
        auto sp4 = CellSpace::full(s4);
        CellSet t(sp4);
        t.insert(cell_index_of_digits(s4, "1010"));
        CHECK(facial_reducible(chain, s4, t) == t);
    }
    SUBCASE("split completeness is validated") {
        SeparatorSplit bad{{0, 2}, {0, 1, 2}, {0, 2}};
        CellSet t = cells_of(f.schema, space, {"000"});
        CHECK_THROWS(facial_reducible_with(f.complex, f.schema, {bad}, t));
        // {a,c} is a separator of the completed complex but not complete in Δ
        SeparatorSplit ac{{0, 2}, {0, 1, 2}, {0, 2, 2}};
        (void)ac;
        SeparatorSplit good{{1}, {0, 1}, {1, 2}};
        CHECK(facial_reducible_with(f.complex, f.schema, {good}, t) == t);
        SeparatorSplit incomplete{{0, 2}, {0, 1, 2}, {0, 2}};
        CHECK_THROWS_WITH(facial_reducible_with(f.complex, f.schema, {incomplete}, t),
                          doctest::Contains("separator"));
    }
}

TEST_CASE("inner approximation") {
    Fixture f = abc_chain();
    DesignMatrix a(f.complex, f.schema);
    auto space = a.space();
    SeparatorSplit b_split{{1}, {0, 1}, {1, 2}};
    CounterRng rng(71, 0);
    SUBCASE("the complete separator gives F1 = Ft exactly") {
        for (int trial = 0; trial < 10; ++trial) {
            Counts c = random_sparse_counts(f.schema, rng);
            CellSet support = c.support_set(space);
            auto res = inner_approx(f.complex, f.schema, support, {b_split});
            CHECK(res.stable);
            CHECK(res.f1 == bruteforce_facial(a, support));
        }
    }
    SUBCASE("no splits leaves the support") {
        Counts c = two_binary_counts(two_binary_saturated().schema);
        (void)c;
        CellSet support = cells_of(f.schema, space, {"000", "111"});
        auto res = inner_approx(f.complex, f.schema, support, {});
        CHECK(res.f1 == support);
        CHECK(res.rounds == 0);
    }
    SUBCASE("non-separator split rejected") {
        SeparatorSplit bad{{0}, {0, 1}, {0, 2}};
        CellSet support = cells_of(f.schema, space, {"000"});
        CHECK_THROWS_WITH(inner_approx(f.complex, f.schema, support, {bad}),
                          doctest::Contains("crosses"));
    }
    SUBCASE("complete-parts variant is a subset of the separator variant") {
        for (int trial = 0; trial < 8; ++trial) {
            Counts c = random_sparse_counts(f.schema, rng);
            CellSet support = c.support_set(space);
            auto hard = inner_approx(f.complex, f.schema, support, {b_split}, 10, false);
            auto easy = inner_approx(f.complex, f.schema, support, {b_split}, 10, true);
            CHECK(easy.f1.is_subset_of(hard.f1));
            CHECK(support.is_subset_of(easy.f1));
        }
    }
}

TEST_CASE("outer approximation") {
    Fixture f = abc_chain();
    DesignMatrix a(f.complex, f.schema);
    auto space = a.space();
    CounterRng rng(73, 0);
    SUBCASE("the trivial cover is exact") {
        for (int trial = 0; trial < 8; ++trial) {
            Counts c = random_sparse_counts(f.schema, rng);
            CellSet support = c.support_set(space);
            FacialSet f2 = outer_approx(f.complex, f.schema, support, {{0, 1, 2}});
            CHECK(f2.cells == bruteforce_facial(a, support));
            if (f2.certificate) CHECK(verify_certificate(a, f2.cells, *f2.certificate));
        }
    }
    SUBCASE("cover must contain every generator") {
        CellSet support = cells_of(f.schema, space, {"000"});
        CHECK_THROWS_WITH(outer_approx(f.complex, f.schema, support, {{0, 1}, {0, 2}}),
                          doctest::Contains("misses generator"));
    }
    SUBCASE("refining the cover shrinks or preserves F2") {
        for (int trial = 0; trial < 8; ++trial) {
            Counts c = random_sparse_counts(f.schema, rng);
            CellSet support = c.support_set(space);
            CellSet coarse =
                outer_approx_cells(f.complex, f.schema, support, {{0, 1}, {1, 2}});
            CellSet fine = outer_approx_cells(f.complex, f.schema, support,
                                              {{0, 1}, {1, 2}, {0, 1, 2}});
            CHECK(fine.is_subset_of(coarse));
        }
    }
}

TEST_CASE("cover strategies") {
    SUBCASE("5x10 grid cover blocks match the paper's V1..V9") {
        Complex g = grid_complex(5, 10);
        auto cover = cover_from_strategy(g, CoverStrategy::Grid3x3Cover);
        REQUIRE(cover.size() == 5);
        auto block = [&](int lo, int hi) {
            std::vector<int> b;
            for (int v = lo - 1; v < hi; ++v) b.push_back(v);
            return b;
        };
        CHECK(cover[0] == block(1, 15));
        CHECK(cover[1] == block(11, 25));
        CHECK(cover[2] == block(21, 35));
        CHECK(cover[3] == block(31, 45));
        CHECK(cover[4] == block(41, 50));
    }
    SUBCASE("fixed-k with k = |V| is the single full set") {
        Fixture f = abc_chain();
        auto cover = cover_from_strategy(f.complex, CoverStrategy::FixedK, 3);
        REQUIRE(!cover.empty());
        CHECK(cover[0] == std::vector<int>{0, 1, 2});
    }
    SUBCASE("balls of radius zero are singletons") {
        Fixture f = abc_chain();
        auto cover = cover_from_strategy(f.complex, CoverStrategy::Balls, 0);
        CHECK(cover == std::vector<std::vector<int>>{{0}, {1}, {2}});
    }
    SUBCASE("4x4 grid has four 3x3 windows") {
        auto cover = cover_from_strategy(grid_complex(4, 4), CoverStrategy::Grid3x3All);
        CHECK(cover.size() == 4);
        for (const auto& w : cover) CHECK(w.size() == 9);
    }
    SUBCASE("k out of range") {
        CHECK_THROWS(cover_from_strategy(abc_chain().complex, CoverStrategy::FixedK, 9));
    }
}

TEST_CASE("sandwich comparison") {
    Fixture f = two_binary_saturated();
    DesignMatrix a(f.complex, f.schema);
    auto space = a.space();
    SUBCASE("equal sets are determined with zero bound") {
        CellSet f1 = cells_of(f.schema, space, {"00", "01", "10"});
        FacialSet f2{f1, face_dimension(a, f1), std::nullopt};
        Sandwich s = compare(a, f1, f2);
        CHECK(s.determined);
        CHECK(s.codim_bound == 0);
        CHECK(s.rank1 == 3);
    }
    SUBCASE("containment violation is a hard error") {
        CellSet f1 = cells_of(f.schema, space, {"11"});
        CellSet f2c = cells_of(f.schema, space, {"00", "01"});
        FacialSet f2{f2c, -1, std::nullopt};
        CHECK_THROWS(compare(a, f1, f2));
    }
    SUBCASE("rank equality decides Ft = F2 (checked against the oracle)") {
        // F1 strictly below F2 with equal spans: {00,01} vs {00,01} plus a
        // cell whose column is dependent over the face — the saturated model
        // has no such pair, so check the implication on a degenerate model
        Complex indep = Complex::make({"x1", "x2"}, {{"x1"}});
        DesignMatrix ai(indep, f.schema);
        // columns depend only on x1: cells 00 and 01 coincide
        CellSet f1(ai.space());
        f1.insert(0);
        CellSet f2c(ai.space());
        f2c.insert(0);
        f2c.insert(2); // 01: identical column
        Sandwich s = compare(ai, f1, FacialSet{f2c, -1, std::nullopt});
        CHECK(s.rank1 == s.rank2);
        CHECK(s.determined);
        CellSet ft = bruteforce_facial(ai, f1);
        CHECK(ft == f2c); // the implication F_t = F_2 is real here
    }
}

TEST_CASE("sandwich invariant on random abc data") {
    Fixture f = abc_chain();
    DesignMatrix a(f.complex, f.schema);
    CounterRng rng(79, 0);
    SeparatorSplit b_split{{1}, {0, 1}, {1, 2}};
    for (int trial = 0; trial < 10; ++trial) {
        Counts c = random_sparse_counts(f.schema, rng);
        CellSet support = c.support_set(a.space());
        CellSet f1 = inner_approx(f.complex, f.schema, support, {b_split}).f1;
        CellSet f2 = outer_approx_cells(f.complex, f.schema, support, {{0, 1}, {1, 2}});
        CellSet ft = bruteforce_facial(a, support);
        CHECK(support.is_subset_of(f1));
        CHECK(f1.is_subset_of(ft));
        CHECK(ft.is_subset_of(f2));
    }
}
