#include <doctest.h>

#include "emlp/implicit.hpp"
#include "emlp/sim.hpp"
#include "support/fixtures.hpp"

using namespace emlp;
using namespace emlp::testing;

namespace {

ImplicitFacialSet chain_over_abc(const Schema& schema,
                                 std::initializer_list<const char*> ab,
                                 std::initializer_list<const char*> bc) {
    Schema sub_ab = schema.restrict({0, 1});
    Schema sub_bc = schema.restrict({1, 2});
    auto sp_ab = CellSpace::make(schema, {0, 1});
    auto sp_bc = CellSpace::make(schema, {1, 2});
    CellSet pa(sp_ab), pb(sp_bc);
    for (const char* d : ab) pa.insert(cell_index_of_digits(sub_ab, d));
    for (const char* d : bc) pb.insert(cell_index_of_digits(sub_bc, d));
    return ImplicitFacialSet::make({sp_ab, sp_bc}, {pa, pb});
}

} // namespace

TEST_CASE("implicit membership and fullness") {
    Schema s = Schema::uniform({"a", "b", "c"}, 2);
    SUBCASE("diagonal chain contains only 000 and 111") {
        auto is = chain_over_abc(s, {"00", "11"}, {"00", "11"});
        CHECK(is.contains(cell_from_digits("000", s)));
        CHECK(is.contains(cell_from_digits("111", s)));
        CHECK(!is.contains(cell_from_digits("110", s)));
        CHECK(!is.contains(cell_from_digits("100", s)));
        CHECK(!is.is_full());
        CHECK(!is.is_empty());
    }
    SUBCASE("full projections represent everything") {
        auto full = chain_over_abc(s, {"00", "01", "10", "11"}, {"00", "01", "10", "11"});
        CHECK(full.is_full());
    }
    SUBCASE("an empty projection empties the set") {
        auto sp_ab = CellSpace::make(s, {0, 1});
        auto sp_bc = CellSpace::make(s, {1, 2});
        CellSet pa(sp_ab);
        pa.insert(0);
        auto is = ImplicitFacialSet::make({sp_ab, sp_bc}, {pa, CellSet(sp_bc)});
        CHECK(is.is_empty());
        CHECK(!is.contains(cell_from_digits("000", s)));
    }
    SUBCASE("empty cover is the full set by convention") {
        ImplicitFacialSet none = ImplicitFacialSet::make({}, {});
        CHECK(none.is_full());
    }
}

TEST_CASE("calibration makes projections exact marginals") {
    Schema s = Schema::uniform({"a", "b", "c"}, 2);
    // inconsistent on b: left projection allows only b=0, right allows b=1 too
    Schema sub_ab = s.restrict({0, 1});
    Schema sub_bc = s.restrict({1, 2});
    auto sp_ab = CellSpace::make(s, {0, 1});
    auto sp_bc = CellSpace::make(s, {1, 2});
    CellSet pa(sp_ab), pb(sp_bc);
    pa.insert(cell_index_of_digits(sub_ab, "00"));
    pa.insert(cell_index_of_digits(sub_ab, "10"));
    pb.insert(cell_index_of_digits(sub_bc, "00"));
    pb.insert(cell_index_of_digits(sub_bc, "11"));
    auto is = ImplicitFacialSet::make({sp_ab, sp_bc}, {pa, pb});
    // join = cells with b=0, c=0: projections must calibrate down
    CHECK(is.projections()[1].size() == 1);
    CHECK(is.contains(cell_from_digits("000", s)));
    CHECK(is.contains(cell_from_digits("100", s)));
    CHECK(!is.contains(cell_from_digits("011", s)));
    CHECK_THROWS_WITH((void)ImplicitFacialSet::make_checked({sp_ab, sp_bc}, {pa, pb}),
                      doctest::Contains("inconsistent"));
}

TEST_CASE("implicit equality") {
    Schema s = Schema::uniform({"a", "b", "c"}, 2);
    auto x = chain_over_abc(s, {"00", "11"}, {"00", "11"});
    auto y = chain_over_abc(s, {"00", "11"}, {"00", "11"});
    CHECK(x.equals(y));
    auto z = chain_over_abc(s, {"00", "11", "01"}, {"00", "11"});
    CHECK(!x.equals(z));
}

TEST_CASE("glue_projections") {
    Schema s = Schema::uniform({"a", "b", "c"}, 2);
    Schema sub_ab = s.restrict({0, 1});
    Schema sub_bc = s.restrict({1, 2});
    auto sp_ab = CellSpace::make(s, {0, 1});
    auto sp_bc = CellSpace::make(s, {1, 2});
    SUBCASE("shared-variable glue") {
        CellSet fa(sp_ab), fb(sp_bc);
        fa.insert(cell_index_of_digits(sub_ab, "00"));
        fa.insert(cell_index_of_digits(sub_ab, "11"));
        fb.insert(cell_index_of_digits(sub_bc, "00"));
        fb.insert(cell_index_of_digits(sub_bc, "11"));
        CellSet glued = glue_projections(fa, fb, s);
        REQUIRE(glued.space()->vars() == std::vector<int>{0, 1, 2});
        CHECK(glued.size() == 2);
        CHECK(glued.contains(cell_index_of_digits(s, "000")));
        CHECK(glued.contains(cell_index_of_digits(s, "111")));
    }
    SUBCASE("full glues to full") {
        CHECK(glue_projections(CellSet::full(sp_ab), CellSet::full(sp_bc), s).is_full());
    }
    SUBCASE("disjoint variables give the product") {
        auto sp_a = CellSpace::make(s, {0});
        auto sp_c = CellSpace::make(s, {2});
        CellSet fa(sp_a), fc(sp_c);
        fa.insert(0);
        fc.insert(0);
        fc.insert(1);
        CellSet glued = glue_projections(fa, fc, s);
        CHECK(glued.size() == 2);
    }
}

TEST_CASE("chain family construction") {
    SUBCASE("5x10 grid blue and red families match the block lists") {
        Complex g = grid_complex(5, 10);
        auto [blue, red] = grid_two_families(g);
        REQUIRE(blue.size() == 4);
        REQUIRE(red.size() == 4);
        auto range = [](int lo, int hi) {
            std::vector<int> b;
            for (int v = lo - 1; v < hi; ++v) b.push_back(v);
            return b;
        };
        CHECK(blue[0] == range(11, 15)); // S2
        CHECK(blue[1] == range(21, 25));
        CHECK(blue[2] == range(31, 35));
        CHECK(blue[3] == range(41, 45)); // S8
        CHECK(red[0] == range(6, 10));   // S1
        CHECK(red[3] == range(36, 40));  // S7
        ChainFamily bf = chain_family(g, blue);
        REQUIRE(bf.blocks.size() == 5);
        CHECK(bf.blocks[0] == range(1, 15));
        CHECK(bf.blocks[1] == range(11, 25));
        CHECK(bf.blocks[2] == range(21, 35));
        CHECK(bf.blocks[3] == range(31, 45));
        CHECK(bf.blocks[4] == range(41, 50));
        ChainFamily rf = chain_family(g, red);
        REQUIRE(rf.blocks.size() == 5);
        CHECK(rf.blocks[0] == range(1, 10));
        CHECK(rf.blocks[1] == range(6, 20));
        CHECK(rf.blocks[4] == range(36, 50));
    }
    SUBCASE("overlapping separators rejected") {
        Complex g = grid_complex(3, 5);
        auto [blue, red] = grid_two_families(g);
        (void)red;
        auto bad = blue;
        bad.push_back(blue[0]);
        CHECK_THROWS(chain_family(g, bad));
    }
}

TEST_CASE("implicit round trip on a 3x4 grid") {
    Fixture f = grid_fixture(3, 4);
    DesignMatrix a(f.complex, f.schema);
    CounterRng rng(83, 0);
    auto [blue, red] = grid_two_families(f.complex);
    ChainFamily bf = chain_family(f.complex, blue);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<double> theta(a.rows());
        for (auto& v : theta) v = rng.next_gaussian();
        Counts counts = sample_counts(a, theta, 12, rng);
        // explicit F w.r.t. the blue-completed complex
        std::vector<SeparatorSplit> splits;
        Complex completed = f.complex.completed(blue);
        CellSet support = counts.support_set(a.space());
        CellSet g = facial_reducible(completed, f.schema, support);
        // implicit representation from its block projections reproduces it
        std::vector<CellSpacePtr> spaces;
        std::vector<CellSet> proj;
        for (const auto& b : bf.blocks) {
            auto sp = CellSpace::make(f.schema, b);
            spaces.push_back(sp);
            proj.push_back(g.project(sp));
        }
        auto impl = ImplicitFacialSet::make(spaces, proj);
        CellSet back = CellSet::full(a.space());
        for (std::size_t k = 0; k < spaces.size(); ++k)
            back.intersect_with(impl.projections()[k].lift(a.space()));
        CHECK(back == g);
        // project_to agrees with true marginals on the red blocks
        for (const auto& rb : chain_family(f.complex, red).blocks) {
            auto sp = CellSpace::make(f.schema, rb);
            CHECK(impl.project_to(sp) == g.project(sp));
        }
    }
}

TEST_CASE("two-family iteration matches the explicit computation on a 3x5 grid") {
    Fixture f = grid_fixture(3, 5);
    DesignMatrix a(f.complex, f.schema);
    CounterRng rng(89, 0);
    auto [blue, red] = grid_two_families(f.complex);
    ChainFamily bf = chain_family(f.complex, blue);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> theta(a.rows());
        for (auto& v : theta) v = rng.next_gaussian();
        Counts counts = sample_counts(a, theta, 10, rng);
        CellSet support = counts.support_set(a.space());
        auto tf = iterate_two_families(f.complex, f.schema, counts, blue, red, 10);
        REQUIRE(tf.stable);

        // explicit inner approximation: alternate the two completed complexes
        CellSet g = support;
        Complex cb = f.complex.completed(blue);
        Complex cr = f.complex.completed(red);
        for (int round = 0; round < 10; ++round) {
            CellSet before = g;
            g = facial_reducible(cb, f.schema, g);
            g = facial_reducible(cr, f.schema, g);
            if (g == before) break;
        }
        for (std::size_t k = 0; k < bf.blocks.size(); ++k) {
            auto sp = CellSpace::make(f.schema, bf.blocks[k]);
            CHECK(tf.inner.projections()[k] == g.project(sp));
        }
        // outer blocks match the explicit per-block facial sets of Δ|Vk
        CellSet f2 = CellSet::full(a.space());
        for (std::size_t k = 0; k < bf.blocks.size(); ++k) {
            auto sp = CellSpace::make(f.schema, bf.blocks[k]);
            CellSet t = support.project(sp);
            CellSet fk = facial_reducible(f.complex.induced(bf.blocks[k]), f.schema, t);
            f2.intersect_with(fk.lift(a.space()));
        }
        for (std::size_t k = 0; k < bf.blocks.size(); ++k) {
            auto sp = CellSpace::make(f.schema, bf.blocks[k]);
            CHECK(tf.outer.projections()[k] == f2.project(sp));
        }
        // inner within outer, projection-wise
        for (std::size_t k = 0; k < bf.blocks.size(); ++k)
            CHECK(tf.inner.projections()[k].is_subset_of(tf.outer.projections()[k]));
    }
}
