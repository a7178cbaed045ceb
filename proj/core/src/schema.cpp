#include "emlp/schema.hpp"

#include <algorithm>
#include <limits>

namespace emlp {

Schema Schema::make(std::vector<Variable> vars) {
    Schema s;
    s.vars_ = std::move(vars);
    for (int i = 0; i < static_cast<int>(s.vars_.size()); ++i) {
        const auto& v = s.vars_[i];
        if (v.name.empty()) throw Error("schema: empty variable name");
        if (v.labels.size() < 2)
            throw Error("schema: variable '" + v.name + "' needs at least 2 levels");
        if (v.labels.size() > 255)
            throw Error("schema: variable '" + v.name + "' has more than 255 levels");
        if (!s.index_.emplace(v.name, i).second)
            throw Error("schema: duplicate variable name '" + v.name + "'");
    }
    return s;
}

Schema Schema::uniform(const std::vector<std::string>& names, int levels) {
    std::vector<Variable> vars;
    vars.reserve(names.size());
    std::vector<std::string> labels;
    for (int l = 0; l < levels; ++l) labels.push_back(std::to_string(l));
    for (const auto& n : names) vars.push_back({n, labels});
    return make(std::move(vars));
}

int Schema::var_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("unknown variable name '" + name + "'");
    return it->second;
}

std::optional<int> Schema::find_var(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int Schema::level_index(int v, const std::string& label) const {
    const auto& labels = vars_[v].labels;
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
        throw Error("unknown label '" + label + "' for variable '" + vars_[v].name + "'");
    return static_cast<int>(it - labels.begin());
}

Schema Schema::restrict(const std::vector<int>& vars) const {
    std::vector<int> sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Variable> sub;
    sub.reserve(sorted.size());
    for (int v : sorted) sub.push_back(vars_[v]);
    return make(std::move(sub));
}

std::optional<std::uint64_t> Schema::cell_count() const {
    std::uint64_t n = 1;
    for (const auto& v : vars_) {
        std::uint64_t r = v.labels.size();
        if (n > std::numeric_limits<std::uint64_t>::max() / r) return std::nullopt;
        n *= r;
    }
    return n;
}

bool Schema::operator==(const Schema& other) const {
    if (vars_.size() != other.vars_.size()) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name != other.vars_[i].name || vars_[i].labels != other.vars_[i].labels)
            return false;
    return true;
}

std::uint64_t cell_index(const Cell& cell, const Schema& schema) {
    if (static_cast<int>(cell.size()) != schema.arity())
        throw Error("cell arity does not match schema");
    std::uint64_t idx = 0, stride = 1;
    for (int v = 0; v < schema.arity(); ++v) {
        if (cell[v] >= schema.levels(v))
            throw Error("cell level out of range for variable '" + schema.name(v) + "'");
        idx += stride * cell[v];
        stride *= schema.levels(v);
    }
    return idx;
}

Cell cell_from_index(std::uint64_t index, const Schema& schema) {
    Cell cell(schema.arity());
    for (int v = 0; v < schema.arity(); ++v) {
        std::uint64_t r = schema.levels(v);
        cell[v] = static_cast<std::uint8_t>(index % r);
        index /= r;
    }
    if (index != 0) throw Error("cell index out of range");
    return cell;
}

Cell cell_from_digits(const std::string& digits, const Schema& schema) {
    if (static_cast<int>(digits.size()) != schema.arity())
        throw Error("digit string length does not match schema arity");
    Cell cell(schema.arity());
    for (int v = 0; v < schema.arity(); ++v) {
        if (digits[v] < '0' || digits[v] > '9') throw Error("bad digit in cell string");
        cell[v] = static_cast<std::uint8_t>(digits[v] - '0');
        if (cell[v] >= schema.levels(v))
            throw Error("cell level out of range for variable '" + schema.name(v) + "'");
    }
    return cell;
}

std::string cell_to_digits(const Cell& cell) {
    std::string s(cell.size(), '0');
    for (std::size_t i = 0; i < cell.size(); ++i)
        s[i] = static_cast<char>('0' + cell[i]);
    return s;
}

} // namespace emlp
