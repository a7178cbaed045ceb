#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "emlp/rational.hpp"

namespace emlp {

/// Reduced row echelon form over the rationals with incremental insertion.
/// Each inserted vector is reduced against the current echelon; independent
/// residuals extend it.  Insertion order is the only tie-breaking rule, so
/// results are deterministic.
class RationalEchelon {
public:
    explicit RationalEchelon(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    /// Residual of v after reduction (zero vector iff v is in the span).
    std::vector<Rational> reduce(std::vector<Rational> v) const;
    bool in_span(const std::vector<Rational>& v) const;

    /// Returns true iff v was independent and the echelon grew.
    bool insert(std::vector<Rational> v);

    const std::vector<std::vector<Rational>>& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

    /// Basis of { x : <r, x> = 0 for every echelon row r }, one vector per
    /// free column, ordered by free column index.
    std::vector<std::vector<Rational>> nullspace() const;

private:
    int dim_;
    std::vector<std::vector<Rational>> rows_; // RREF, pivot entries = 1
    std::vector<int> pivots_;
};

/// Echelon that additionally tracks coordinates of reduced vectors over the
/// accepted (independent) insertions.
class SpanTracker {
public:
    explicit SpanTracker(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    /// If v is dependent, returns its exact coordinates over the accepted
    /// basis vectors (in insertion order).  If independent, v is accepted
    /// and nullopt is returned.
    std::optional<std::vector<Rational>> insert_or_coords(const std::vector<Rational>& v);

    /// Coordinates of v over the accepted basis, or nullopt if v is outside
    /// the span.  Does not modify the tracker.
    std::optional<std::vector<Rational>> coords(const std::vector<Rational>& v) const;

private:
    int dim_;
    std::vector<std::vector<Rational>> rows_;      // row echelon (not reduced)
    std::vector<int> pivots_;
    std::vector<std::vector<Rational>> transform_; // row = combination of accepted basis
};

/// Solve the square rational system A x = b; nullopt when singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b);

/// Scale a rational vector to coprime integers (lcm of denominators over gcd
/// of numerators); preserves direction and sign.
std::vector<BigInt> scale_to_integers(const std::vector<Rational>& v);

/// True iff every |entry| <= bound.
bool fits_int64(const std::vector<BigInt>& v, std::int64_t bound);

} // namespace emlp
