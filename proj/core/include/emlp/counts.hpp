#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "emlp/cellset.hpp"
#include "emlp/schema.hpp"

namespace emlp {

/// Sparse contingency table: positive cell counts over a schema.  The full
/// cell space is never materialized; cells are stored as level tuples so
/// models far above the explicit cap remain representable.
class Counts {
public:
    Counts() = default;

    /// One row per observation.
    static Counts from_observations(const std::vector<Cell>& rows, const Schema& schema);
    /// Aggregated records; duplicates are summed, zero counts dropped.
    static Counts from_records(const std::vector<std::pair<Cell, std::int64_t>>& records,
                               const Schema& schema);

    const Schema& schema() const { return schema_; }
    std::uint64_t total() const { return total_; }
    std::uint64_t count(const Cell& cell) const;
    const std::map<Cell, std::uint64_t>& cells() const { return cells_; }
    std::size_t support_size() const { return cells_.size(); }

    /// Marginal table over a subset of variables (schema indices); N is preserved.
    Counts project(const std::vector<int>& vars) const;

    /// Support as an explicit cell set over the full space (requires the
    /// space to fit the explicit cap).
    CellSet support_set(const CellSpacePtr& space) const;

    /// Support projected onto a sub-space, computed sparsely.
    CellSet projected_support(const CellSpacePtr& space) const;

    bool operator==(const Counts& other) const {
        return schema_ == other.schema_ && cells_ == other.cells_;
    }

private:
    Schema schema_;
    std::map<Cell, std::uint64_t> cells_;
    std::uint64_t total_ = 0;
};

} // namespace emlp
