#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emlp/cellset.hpp"
#include "emlp/complex.hpp"
#include "emlp/counts.hpp"
#include "emlp/exactlin.hpp"
#include "emlp/schema.hpp"

namespace emlp {

struct SuffStat {
    std::vector<std::uint64_t> t; // indexed by J rows
    std::uint64_t n = 0;
};

/// The 0/1 design matrix A of a hierarchical model, with rows indexed by
/// J = { j in I \ {0} : S(j) a face } and columns generated on demand from
/// (complex, schema, cell).  The homogenized variant prepends an all-ones
/// row.  Row order: |S(j)| ascending, then lexicographic on S(j), then
/// lexicographic on the level tuple.
class DesignMatrix {
public:
    DesignMatrix(Complex complex, Schema schema);

    const Complex& complex() const { return complex_; }
    const Schema& schema() const { return schema_; }
    const CellSpacePtr& space() const { return space_; }

    int rows() const { return n_rows_; }       // |J|
    int hrows() const { return n_rows_ + 1; }  // |J| + 1 (ones row first)

    /// Nonempty faces with parameters, in row-block order.
    const std::vector<std::vector<int>>& faces() const { return faces_; }

    /// Row of the parameter for (face, levels on that face, all >= 1).
    int row_of(const std::vector<int>& face, const std::vector<std::uint8_t>& levels) const;
    /// Inverse of row_of.
    std::pair<std::vector<int>, std::vector<std::uint8_t>> row_face_levels(int j) const;
    std::string row_label(int j) const;
    std::vector<std::string> row_labels() const;

    /// Homogenized column f̃_i as 0/1 entries; out[0] = 1.
    void hcolumn(std::uint64_t cell_index, std::vector<std::int8_t>& out) const;

    /// T[i] = g̃[0] + Σ_{j ◁ i} g̃[1+j] for every cell i (i.e. Ãᵀ g̃).
    /// Requires |I| within the explicit cap.
    template <class T>
    std::vector<T> apply_homog(const std::vector<T>& gtilde) const;

    /// t = A n from the sparse positive cells.
    SuffStat sufficient_statistic(const Counts& counts) const;

    /// out[j] = Σ_i w_i a_{j,i} for a dense weight vector over the cells
    /// (A·w); zero weights are skipped.
    template <class T>
    std::vector<T> accumulate_weighted(const std::vector<T>& w) const;

    /// As above but over rationals (t/N is exact).
    std::vector<Rational> mean_statistic(const Counts& counts) const;

private:
    Complex complex_;
    Schema schema_;
    CellSpacePtr space_;
    std::vector<std::vector<int>> faces_;
    std::vector<int> block_offset_;              // per face
    std::vector<std::vector<int>> block_stride_; // per face, per face-var (lex order)
    int n_rows_ = 0;

    template <class T, class F>
    void scan_cells(F&& f) const; // f(cell_index, row_visitor)
};

/// Exact rank of Ã_F (columns restricted to F).
int exact_rank_on(const DesignMatrix& a, const CellSet& f);

/// dim of the face spanned by the columns of F: rank(Ã_F) - 1.  F nonempty.
int face_dimension(const DesignMatrix& a, const CellSet& f);

/// Exact basis of { g̃ : <g̃, f̃_i> = 0 for all i in F }.  Each vector
/// decodes as (-c, g) for the equation <g, x> = c.
std::vector<std::vector<Rational>> kernel_basis_on(const DesignMatrix& a, const CellSet& f);

/// True iff log p is orthogonal to ker Ã: membership of a positive vector in
/// the model's log-affine hull.  Exact for rational p via Π p_i^{v_i} = 1;
/// float p is checked within tol.
bool log_kernel_membership(const DesignMatrix& a, const std::vector<Rational>& p);
bool log_kernel_membership(const DesignMatrix& a, const std::vector<double>& p,
                           double tol = 1e-9);

} // namespace emlp
