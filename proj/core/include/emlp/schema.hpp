#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "emlp/rational.hpp"

namespace emlp {

/// A cell of a contingency table: one level index per variable, in schema order.
using Cell = std::vector<std::uint8_t>;

struct Variable {
    std::string name;
    std::vector<std::string> labels; // level 0 is the first label
};

/// Ordered list of categorical variables with their level labels.
///
/// Level 0 of every variable is the first listed label; the listed order is
/// authoritative for the mixed-radix cell indexing (variable 1 least
/// significant).
class Schema {
public:
    Schema() = default;
    static Schema make(std::vector<Variable> vars);

    /// Convenience: `count`-level variables with labels "0","1",...
    static Schema uniform(const std::vector<std::string>& names, int levels);

    int arity() const { return static_cast<int>(vars_.size()); }
    int levels(int v) const { return static_cast<int>(vars_[v].labels.size()); }
    const std::string& name(int v) const { return vars_[v].name; }
    const Variable& variable(int v) const { return vars_[v]; }
    const std::vector<Variable>& variables() const { return vars_; }

    int var_index(const std::string& name) const; // throws on unknown name
    std::optional<int> find_var(const std::string& name) const;
    int level_index(int v, const std::string& label) const; // throws on unknown label

    /// Schema over a subset of the variables, keeping schema order.
    Schema restrict(const std::vector<int>& vars) const;

    /// Number of cells, if it fits in 64 bits.
    std::optional<std::uint64_t> cell_count() const;

    bool operator==(const Schema& other) const;

private:
    std::vector<Variable> vars_;
    std::unordered_map<std::string, int> index_;
};

/// Mixed-radix cell index with variable 1 least significant.
std::uint64_t cell_index(const Cell& cell, const Schema& schema);
Cell cell_from_index(std::uint64_t index, const Schema& schema);

/// Parse a compact cell string like "110" (one digit per variable) for
/// schemas whose levels are all <= 10.  Test/report helper.
Cell cell_from_digits(const std::string& digits, const Schema& schema);
std::string cell_to_digits(const Cell& cell);

} // namespace emlp
