#include "emlp/cellset.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace emlp {

CellSpace::CellSpace(const Schema& schema, std::vector<int> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    vars_ = std::move(vars);
    size_ = 1;
    for (int v : vars_) {
        if (v < 0 || v >= schema.arity()) throw Error("cell space: variable index out of range");
        levels_.push_back(schema.levels(v));
        strides_.push_back(size_);
        size_ *= static_cast<std::uint64_t>(schema.levels(v));
        if (size_ > (std::uint64_t(1) << 62)) throw Error("cell space overflows 64-bit indexing");
    }
}

CellSpace::CellSpace(const CellSpace& parent, std::vector<int> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    vars_ = std::move(vars);
    size_ = 1;
    std::size_t k = 0;
    for (std::size_t pos = 0; pos < parent.vars_.size(); ++pos) {
        if (k < vars_.size() && parent.vars_[pos] == vars_[k]) {
            levels_.push_back(parent.levels_[pos]);
            strides_.push_back(size_);
            size_ *= static_cast<std::uint64_t>(parent.levels_[pos]);
            ++k;
        }
    }
    if (k != vars_.size()) throw Error("cell space: variables not in the parent space");
}

CellSpacePtr CellSpace::full(const Schema& schema) {
    std::vector<int> all(schema.arity());
    std::iota(all.begin(), all.end(), 0);
    return std::make_shared<const CellSpace>(schema, std::move(all));
}

CellSpacePtr CellSpace::make(const Schema& schema, std::vector<int> vars) {
    return std::make_shared<const CellSpace>(schema, std::move(vars));
}

bool CellSpace::contains_vars(const CellSpace& sub) const {
    return std::includes(vars_.begin(), vars_.end(), sub.vars_.begin(), sub.vars_.end());
}

std::uint64_t CellSpace::index_of_cell(const Cell& full_cell) const {
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < vars_.size(); ++k)
        idx += strides_[k] * full_cell[vars_[k]];
    return idx;
}

void CellSpace::decode(std::uint64_t index, std::vector<std::uint8_t>& out) const {
    out.resize(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) {
        out[k] = static_cast<std::uint8_t>(index % levels_[k]);
        index /= levels_[k];
    }
}

CellSet::CellSet(CellSpacePtr space) : space_(std::move(space)) {
    if (space_->size() > kExplicitCap)
        throw CapExceeded("cell space of size " + std::to_string(space_->size()) +
                          " exceeds the explicit cap " + std::to_string(kExplicitCap));
    bits_.assign((space_->size() + 63) / 64, 0);
}

CellSet CellSet::empty(CellSpacePtr space) { return CellSet(std::move(space)); }

CellSet CellSet::full(CellSpacePtr space) {
    CellSet s(std::move(space));
    std::uint64_t n = s.space_->size();
    for (std::uint64_t i = 0; i < n / 64; ++i) s.bits_[i] = ~std::uint64_t(0);
    if (n % 64) s.bits_[n / 64] = (std::uint64_t(1) << (n % 64)) - 1;
    s.count_ = n;
    return s;
}

CellSet CellSet::of_indices(CellSpacePtr space, const std::vector<std::uint64_t>& indices) {
    CellSet s(std::move(space));
    for (auto i : indices) s.insert(i);
    return s;
}

void CellSet::insert(std::uint64_t index) {
    if (index >= space_->size()) throw Error("cell index out of range");
    std::uint64_t& w = bits_[index >> 6];
    std::uint64_t m = std::uint64_t(1) << (index & 63);
    if (!(w & m)) { w |= m; ++count_; }
}

void CellSet::erase(std::uint64_t index) {
    std::uint64_t& w = bits_[index >> 6];
    std::uint64_t m = std::uint64_t(1) << (index & 63);
    if (w & m) { w &= ~m; --count_; }
}

CellSet& CellSet::intersect_with(const CellSet& other) {
    if (!space_->same_vars(*other.space_)) throw Error("cell set spaces differ");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
    recount();
    return *this;
}

CellSet& CellSet::unite_with(const CellSet& other) {
    if (!space_->same_vars(*other.space_)) throw Error("cell set spaces differ");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    recount();
    return *this;
}

bool CellSet::is_subset_of(const CellSet& other) const {
    if (!space_->same_vars(*other.space_)) throw Error("cell set spaces differ");
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~other.bits_[i]) return false;
    return true;
}

bool CellSet::operator==(const CellSet& other) const {
    return space_->same_vars(*other.space_) && bits_ == other.bits_;
}

CellSet CellSet::project(const CellSpacePtr& target) const {
    if (!space_->contains_vars(*target)) throw Error("projection target not a subset");
    CellSet out(target);
    if (space_->same_vars(*target)) { out.bits_ = bits_; out.count_ = count_; return out; }
    for_each_projected(*space_, *target, [&](std::uint64_t idx, std::uint64_t sub) {
        if (contains(idx)) out.insert(sub);
    });
    return out;
}

CellSet CellSet::lift(const CellSpacePtr& target) const {
    if (!target->contains_vars(*space_)) throw Error("lift target does not contain the space");
    CellSet out(target);
    if (space_->same_vars(*target)) { out.bits_ = bits_; out.count_ = count_; return out; }
    for_each_projected(*target, *space_, [&](std::uint64_t idx, std::uint64_t sub) {
        if (contains(sub)) out.insert(idx);
    });
    return out;
}

CellSet CellSet::rebind(const CellSpacePtr& other) const {
    if (other->size() != space_->size() || other->arity() != space_->arity())
        throw Error("rebind: incompatible spaces");
    for (int k = 0; k < space_->arity(); ++k)
        if (other->levels(k) != space_->levels(k))
            throw Error("rebind: incompatible level profile");
    CellSet out(other);
    out.bits_ = bits_;
    out.count_ = count_;
    return out;
}

std::vector<std::uint64_t> CellSet::to_indices() const {
    std::vector<std::uint64_t> out;
    out.reserve(count_);
    for_each([&](std::uint64_t i) { out.push_back(i); });
    return out;
}

void CellSet::recount() {
    count_ = 0;
    for (std::uint64_t w : bits_) count_ += std::popcount(w);
}

} // namespace emlp
