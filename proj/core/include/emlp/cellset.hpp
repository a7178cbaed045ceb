#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "emlp/schema.hpp"

namespace emlp {

/// The cell space I_W of a subset W of the schema variables, with the
/// mixed-radix indexing induced by the schema order (first variable of W
/// least significant).
class CellSpace {
public:
    CellSpace(const Schema& schema, std::vector<int> vars);
    /// Sub-space of a parent space (level counts inherited).
    CellSpace(const CellSpace& parent, std::vector<int> vars);

    static std::shared_ptr<const CellSpace> full(const Schema& schema);
    static std::shared_ptr<const CellSpace> make(const Schema& schema, std::vector<int> vars);

    const std::vector<int>& vars() const { return vars_; }   // ascending schema indices
    int arity() const { return static_cast<int>(vars_.size()); }
    int levels(int pos) const { return levels_[pos]; }
    std::uint64_t size() const { return size_; }

    bool contains_vars(const CellSpace& sub) const;
    bool same_vars(const CellSpace& other) const { return vars_ == other.vars_; }

    /// Index of a cell given as full-schema levels.
    std::uint64_t index_of_cell(const Cell& full_cell) const;
    /// Decode an index into levels over this space's variables (space order).
    void decode(std::uint64_t index, std::vector<std::uint8_t>& out) const;

private:
    std::vector<int> vars_;
    std::vector<int> levels_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t size_;
};

using CellSpacePtr = std::shared_ptr<const CellSpace>;

/// Iterate all indices of `space` in order, maintaining the projected index
/// onto the sub-space `sub` (sub.vars ⊆ space.vars).  f(index, sub_index).
template <class F>
void for_each_projected(const CellSpace& space, const CellSpace& sub, F&& f);

/// Dense set of cells over a CellSpace.  Spaces above the explicit cap are
/// rejected at construction.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(CellSpacePtr space); // empty set

    static CellSet empty(CellSpacePtr space);
    static CellSet full(CellSpacePtr space);
    static CellSet of_indices(CellSpacePtr space, const std::vector<std::uint64_t>& indices);

    const CellSpacePtr& space() const { return space_; }
    std::uint64_t universe() const { return space_->size(); }
    std::uint64_t size() const { return count_; }
    bool is_empty() const { return count_ == 0; }
    bool is_full() const { return count_ == space_->size(); }

    bool contains(std::uint64_t index) const {
        return (bits_[index >> 6] >> (index & 63)) & 1;
    }
    void insert(std::uint64_t index);
    void erase(std::uint64_t index);

    CellSet& intersect_with(const CellSet& other);
    CellSet& unite_with(const CellSet& other);
    bool is_subset_of(const CellSet& other) const;
    bool operator==(const CellSet& other) const;
    bool operator!=(const CellSet& other) const { return !(*this == other); }

    /// Existential projection onto a sub-space of this set's variables.
    CellSet project(const CellSpacePtr& target) const;
    /// Preimage under projection from a larger space (this.vars ⊆ target.vars).
    CellSet lift(const CellSpacePtr& target) const;
    /// Reinterpret over a space with the same radix profile (used to move
    /// between a base-schema subspace and a restricted schema's full space).
    CellSet rebind(const CellSpacePtr& other) const;

    std::vector<std::uint64_t> to_indices() const;

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                int b = __builtin_ctzll(word);
                f(static_cast<std::uint64_t>(w * 64 + b));
                word &= word - 1;
            }
        }
    }

private:
    CellSpacePtr space_;
    std::vector<std::uint64_t> bits_;
    std::uint64_t count_ = 0;
    void recount();
};

template <class F>
void for_each_projected(const CellSpace& space, const CellSpace& sub, F&& f) {
    const int p = space.arity();
    std::vector<std::uint8_t> digit(p, 0);
    // stride of each space variable inside sub (0 if absent)
    std::vector<std::uint64_t> sub_stride(p, 0);
    {
        std::uint64_t s = 1;
        std::size_t k = 0;
        for (int pos = 0; pos < p; ++pos) {
            if (k < sub.vars().size() && space.vars()[pos] == sub.vars()[k]) {
                sub_stride[pos] = s;
                s *= sub.levels(static_cast<int>(k));
                ++k;
            }
        }
        if (k != sub.vars().size())
            throw Error("projection target is not a variable subset of the space");
    }
    std::uint64_t sub_index = 0;
    const std::uint64_t n = space.size();
    for (std::uint64_t idx = 0;; ++idx) {
        f(idx, sub_index);
        if (idx + 1 == n) break;
        // odometer increment
        for (int pos = 0; pos < p; ++pos) {
            if (digit[pos] + 1 < space.levels(pos)) {
                ++digit[pos];
                sub_index += sub_stride[pos];
                break;
            }
            sub_index -= std::uint64_t(digit[pos]) * sub_stride[pos];
            digit[pos] = 0;
        }
    }
}

} // namespace emlp
