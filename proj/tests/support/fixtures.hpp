#pragma once

#include <vector>

#include "emlp/complex.hpp"
#include "emlp/counts.hpp"
#include "emlp/design.hpp"
#include "emlp/sim.hpp"

namespace emlp::testing {

struct Fixture {
    Schema schema;
    Complex complex;
};

/// Two binary variables, saturated model.
Fixture two_binary_saturated();

/// The 2x2 data (00:2, 01:3, 10:5, 11:0).
Counts two_binary_counts(const Schema& schema);

/// V = {a,b,c} binary, Δ = <ab, bc>.
Fixture abc_chain();

/// Binary grid model of the given size.
Fixture grid_fixture(int rows, int cols);

/// Random simplicial complex on 2..4 variables with binary/ternary levels.
Fixture random_small_model(CounterRng& rng);

/// Random sparse counts over a schema (some zero cells, positive total).
Counts random_sparse_counts(const Schema& schema, CounterRng& rng, int max_total = 40);

/// Random chordal graph by construction; returns its clique complex.
Fixture random_decomposable_model(CounterRng& rng, int max_vertices = 10);

/// Cells from digit strings for small schemas.
Counts counts_from_digit_records(
    const Schema& schema, const std::vector<std::pair<std::string, std::int64_t>>& records);

std::uint64_t cell_index_of_digits(const Schema& schema, const std::string& digits);

} // namespace emlp::testing
