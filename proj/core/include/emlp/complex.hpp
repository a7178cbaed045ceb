#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emlp/rational.hpp"

namespace emlp {

struct GridInfo {
    int rows = 0;
    int cols = 0;
    /// Column-major vertex numbering: vertex (r, c), 1-based, sits at index
    /// (c-1)*rows + (r-1) in the complex's vertex list.
    int vertex_at(int r, int c) const { return (c - 1) * rows + (r - 1); }
};

/// Separator split (S, V1, V2): V1 ∩ V2 = S, V1 ∪ V2 = V, and every
/// generator lies inside V1 or V2.  Vertex indices refer to the owning
/// complex's vertex order.
struct SeparatorSplit {
    std::vector<int> s;
    std::vector<int> v1;
    std::vector<int> v2;
};

/// A simplicial complex on named vertices, stored by its generating antichain
/// of maximal faces.  The empty set is always a face; a vertex listed in no
/// generator is an isolated vertex and contributes no face.
class Complex {
public:
    Complex() = default;

    static Complex make(std::vector<std::string> vertices,
                        const std::vector<std::vector<std::string>>& generators);
    static Complex make_indexed(std::vector<std::string> vertices,
                                std::vector<std::vector<int>> generators);

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::string& vertex_name(int v) const { return vertices_[v]; }
    int vertex_index(const std::string& name) const;

    /// Canonical antichain of maximal faces (sorted index lists, lex order).
    const std::vector<std::vector<int>>& generators() const { return generators_; }

    /// Membership: D is a face iff D is contained in some generator.
    bool contains(const std::vector<int>& face) const;

    /// All nonempty faces, sorted by (size, lex).  Throws if the count would
    /// exceed `limit`.
    std::vector<std::vector<int>> faces(std::size_t limit = std::size_t(1) << 20) const;

    /// Edges of the 1-skeleton, sorted.
    std::vector<std::pair<int, int>> skeleton_edges() const;

    /// Induced subcomplex on a vertex subset (indices into this complex).
    /// Vertex names are preserved; grid metadata is dropped.
    Complex induced(const std::vector<int>& sub) const;

    /// This complex plus all subsets of each given set, as an antichain.
    Complex completed(const std::vector<std::vector<int>>& sets) const;

    const std::optional<GridInfo>& grid() const { return grid_; }
    void set_grid(GridInfo g) { grid_ = g; }

    bool operator==(const Complex& other) const {
        return vertices_ == other.vertices_ && generators_ == other.generators_;
    }

private:
    std::vector<std::string> vertices_;
    std::vector<std::vector<int>> generators_;
    std::optional<GridInfo> grid_;
};

enum class SeparatorStrategy { AllMinimal, MinPartSize, GridRegular };

struct SeparatorEnumeration {
    std::vector<SeparatorSplit> splits;
    bool truncated = false;
};

/// Enumerate separator splits of the 1-skeleton.
///
/// AllMinimal: all minimal vertex separators (close-neighborhood expansion),
/// capped.  MinPartSize: minimal separators with both parts of size >= k.
/// GridRegular: interior rows/columns, adjacent interior row/column pairs,
/// and the short corner diagonals (requires grid metadata).
/// If the skeleton is disconnected, one empty-separator split per component
/// is reported first.
SeparatorEnumeration enumerate_separators(const Complex& cx, SeparatorStrategy strategy,
                                          int k = 0, std::size_t cap = 10000);

struct PrimeDecomposition {
    std::vector<Complex> components;
    std::vector<std::vector<int>> separators; // complete separators used (vertex indices)
};

/// Recursively split along complete separators until no component has one.
PrimeDecomposition prime_components(const Complex& cx);

struct Decomposability {
    bool decomposable = false;
    /// When decomposable: generators in an order satisfying the running
    /// intersection property.
    std::vector<std::vector<int>> components;
    std::string diagnostic;
};

/// True iff the complex is the clique complex of a chordal graph.
Decomposability is_decomposable(const Complex& cx);

/// Clique complex of the rows x cols grid graph, with grid metadata.
Complex grid_complex(int rows, int cols);

/// Clique complex of a simple graph given by named edges.  Isolated vertices
/// become singleton generators.
Complex clique_complex(const std::vector<std::string>& vertices,
                       const std::vector<std::pair<std::string, std::string>>& edges,
                       std::size_t clique_cap = 100000);

/// Connected components of the 1-skeleton restricted to V \ removed.
std::vector<std::vector<int>> skeleton_components(const Complex& cx,
                                                  const std::vector<int>& removed);

} // namespace emlp
