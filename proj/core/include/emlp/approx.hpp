#pragma once

#include <vector>

#include "emlp/cellset.hpp"
#include "emlp/complex.hpp"
#include "emlp/facial.hpp"

namespace emlp {

/// Inner/outer approximation pair with exact rank bookkeeping.
struct Sandwich {
    CellSet f1;
    FacialSet f2;
    int rank1 = 0;
    int rank2 = 0;
    bool determined = false; // F1 == F2 or equal ranks forces F_t == F2
    int codim_bound = 0;     // rank2 - rank1 >= dim F2 - dim F_t
};

/// Facial set of T with respect to a complex, computed through its prime
/// components: F(T) = ∩_k lift(F_k(π_k(T))).  Complete components
/// contribute their projection directly (the decomposable shortcut); prime
/// non-complete components go through the LP closure.
CellSet facial_reducible(const Complex& cx, const Schema& schema, const CellSet& t,
                         LPMode mode = LPMode::Float);

/// Variant with caller-supplied splits; each split must be a complete
/// separator of the complex.
CellSet facial_reducible_with(const Complex& cx, const Schema& schema,
                              const std::vector<SeparatorSplit>& splits, const CellSet& t,
                              LPMode mode = LPMode::Float);

struct InnerApprox {
    CellSet f1;
    int rounds = 0;    // full cycles over the splits that changed the set
    bool stable = true; // false when max_rounds was hit while still growing
};

/// Inner approximation F1: iterate G <- F_{Δ_S}(G) cycling over the
/// separator splits until a full cycle adds nothing.  With
/// complete_parts = true the cheaper Δ_{V1,V2} completion is used instead
/// of Δ_S.
InnerApprox inner_approx(const Complex& cx, const Schema& schema, const CellSet& support,
                         const std::vector<SeparatorSplit>& splits, int max_rounds = 10,
                         bool complete_parts = false, LPMode mode = LPMode::Float);

/// Outer approximation F2 = ∩_k lift(F'_{Δ|V_k}(π_k(I_+))); single pass.
/// The cover must contain every generator in some element.
FacialSet outer_approx(const Complex& cx, const Schema& schema, const CellSet& support,
                       const std::vector<std::vector<int>>& cover,
                       LPMode mode = LPMode::Float);

/// Outer approximation cells only (no rank or certificate work).
CellSet outer_approx_cells(const Complex& cx, const Schema& schema, const CellSet& support,
                           const std::vector<std::vector<int>>& cover,
                           LPMode mode = LPMode::Float);

enum class CoverStrategy { FixedK, Balls, Grid3x3All, Grid3x3Cover };

/// Vertex-subset covers for the outer approximation.  FixedK: all k-subsets
/// plus facets of size >= k.  Balls: radius-k balls around each vertex.
/// Grid strategies require grid metadata.
std::vector<std::vector<int>> cover_from_strategy(const Complex& cx, CoverStrategy strategy,
                                                  int k = 0);

/// Rank comparison of the two approximations (exact arithmetic).
Sandwich compare(const DesignMatrix& a, const CellSet& f1, FacialSet f2);

} // namespace emlp
