#include "emlp/counts.hpp"

#include <algorithm>

namespace emlp {

namespace {

void validate_cell(const Cell& cell, const Schema& schema) {
    if (static_cast<int>(cell.size()) != schema.arity())
        throw Error("cell arity does not match schema");
    for (int v = 0; v < schema.arity(); ++v)
        if (cell[v] >= schema.levels(v))
            throw Error("cell level out of range for variable '" + schema.name(v) + "'");
}

} // namespace

Counts Counts::from_observations(const std::vector<Cell>& rows, const Schema& schema) {
    if (rows.empty()) throw Error("no observations");
    Counts c;
    c.schema_ = schema;
    for (const auto& row : rows) {
        validate_cell(row, schema);
        ++c.cells_[row];
        ++c.total_;
    }
    return c;
}

Counts Counts::from_records(const std::vector<std::pair<Cell, std::int64_t>>& records,
                            const Schema& schema) {
    Counts c;
    c.schema_ = schema;
    for (const auto& [cell, n] : records) {
        if (n < 0) throw Error("negative count");
        validate_cell(cell, schema);
        if (n == 0) continue;
        c.cells_[cell] += static_cast<std::uint64_t>(n);
        c.total_ += static_cast<std::uint64_t>(n);
    }
    return c;
}

std::uint64_t Counts::count(const Cell& cell) const {
    auto it = cells_.find(cell);
    return it == cells_.end() ? 0 : it->second;
}

Counts Counts::project(const std::vector<int>& vars) const {
    std::vector<int> sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Counts out;
    out.schema_ = schema_.restrict(sorted);
    out.total_ = total_;
    Cell sub(sorted.size());
    for (const auto& [cell, n] : cells_) {
        for (std::size_t k = 0; k < sorted.size(); ++k) sub[k] = cell[sorted[k]];
        out.cells_[sub] += n;
    }
    return out;
}

CellSet Counts::support_set(const CellSpacePtr& space) const {
    if (static_cast<int>(space->vars().size()) != schema_.arity())
        throw Error("support_set expects the full cell space");
    CellSet s(space);
    for (const auto& [cell, n] : cells_) {
        (void)n;
        s.insert(space->index_of_cell(cell));
    }
    return s;
}

CellSet Counts::projected_support(const CellSpacePtr& space) const {
    CellSet s(space);
    for (const auto& [cell, n] : cells_) {
        (void)n;
        s.insert(space->index_of_cell(cell));
    }
    return s;
}

} // namespace emlp
