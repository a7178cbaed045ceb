#pragma once

#include <vector>

#include "emlp/cellset.hpp"
#include "emlp/complex.hpp"
#include "emlp/counts.hpp"
#include "emlp/facial.hpp"

namespace emlp {

/// Facial set represented by its projections onto a chain of vertex subsets
/// with consecutive overlap.  The represented set is the intersection of
/// the preimages of the projections; the stored projections are kept
/// calibrated, i.e. equal to the true marginals of that intersection.
class ImplicitFacialSet {
public:
    ImplicitFacialSet() = default;

    /// Builds the set and calibrates the chain (message passing to a fixed
    /// point).  Cover blocks must be given in chain order.
    static ImplicitFacialSet make(std::vector<CellSpacePtr> cover,
                                  std::vector<CellSet> projections);

    /// Validates pairwise consistency instead of calibrating; throws when
    /// the projections disagree on an overlap.
    static ImplicitFacialSet make_checked(std::vector<CellSpacePtr> cover,
                                          std::vector<CellSet> projections);

    const std::vector<CellSpacePtr>& cover() const { return cover_; }
    const std::vector<CellSet>& projections() const { return proj_; }

    bool contains(const Cell& full_cell) const;
    bool is_full() const;  // empty cover represents the full set
    bool is_empty() const; // true iff the represented set is empty

    /// Same cover (by variable lists) and equal projections pairwise.
    bool equals(const ImplicitFacialSet& other) const;

    /// Exact marginal of the represented set onto a target space; the
    /// target must be covered by consecutive blocks whose pairwise overlaps
    /// it contains.
    CellSet project_to(const CellSpacePtr& target) const;

private:
    std::vector<CellSpacePtr> cover_;
    std::vector<CellSet> proj_;
    void calibrate();
    void check_consistency() const;
};

/// (π^{Va∪Vb}_{Va})^{-1}(Fa) ∩ (π^{Va∪Vb}_{Vb})^{-1}(Fb) over the union space.
CellSet glue_projections(const CellSet& fa, const CellSet& fb, const Schema& schema);

/// A family of parallel separators of a complex: the separators in chain
/// order and the blocks they bound (consecutive blocks overlap exactly in a
/// separator).
struct ChainFamily {
    std::vector<std::vector<int>> separators;
    std::vector<std::vector<int>> blocks;
};

/// Derive the chain family of a list of pairwise disjoint separators.
ChainFamily chain_family(const Complex& cx, std::vector<std::vector<int>> separators);

struct TwoFamilyResult {
    ImplicitFacialSet inner; // on the blue-family blocks
    ImplicitFacialSet outer; // on the blue-family blocks
    int rounds = 0;          // blue+red cycles that changed the inner set
    bool stable = true;
};

/// The two-family iteration for large models: outer approximation from one
/// pass over the blue blocks; inner approximation by alternating per-block
/// closures w.r.t. the separator-completed complexes with marginalize-and-
/// glue transfers between the two families.
TwoFamilyResult iterate_two_families(const Complex& cx, const Schema& schema,
                                     const Counts& counts,
                                     const std::vector<std::vector<int>>& blue_separators,
                                     const std::vector<std::vector<int>>& red_separators,
                                     int max_rounds = 10, LPMode mode = LPMode::Float);

} // namespace emlp
