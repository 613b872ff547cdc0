#pragma once

#include "kstab/linalg.hpp"
#include "kstab/rat.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kstab {

// Closed halfspace <normal, x> <= offset.
struct Halfspace {
    RatVec normal;
    Rat offset;
};

// Simplex given by its n+1 vertices.
using Simplex = std::vector<RatVec>;

// Bounded, full-dimensional rational polytope in H-representation.
//
// Construction enumerates all vertices by n-subset intersection, rejects
// unbounded or lower-dimensional input, and keeps only facet-defining
// halfspaces (tight on an (n-1)-dimensional vertex set). Immutable after
// construction.
class Polytope {
public:
    // Throws std::invalid_argument on malformed, unbounded, empty or
    // lower-dimensional input.
    static Polytope from_halfspaces(int dim, std::vector<Halfspace> halfspaces);

    // As above, but reports empty/lower-dimensional input as nullopt instead
    // of throwing. Malformed or unbounded input still throws.
    static std::optional<Polytope> try_from_halfspaces(int dim,
                                                       std::vector<Halfspace> halfspaces);

    int dim() const { return dim_; }
    const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
    const std::vector<RatVec>& vertices() const { return vertices_; }

    bool contains(const RatVec& x) const;

    // Exact Euclidean volume via the coning triangulation.
    Rat volume() const;

    // Triangulation obtained by coning over the boundary from one vertex
    // (`apex_index` selects which one; any choice covers the polytope).
    std::vector<Simplex> triangulate(int apex_index = 0) const;

    // Vertex pairs joined by a 1-dimensional face.
    std::vector<std::pair<int, int>> edges() const;

    // Indices of vertices lying on halfspace `h` (tight constraints).
    std::vector<int> facet_vertices(int h) const;

private:
    Polytope() = default;

    int dim_ = 0;
    std::vector<Halfspace> halfspaces_;
    std::vector<RatVec> vertices_;
};

// Volume of the simplex spanned by s[0..n], i.e. |det| / n!.
Rat simplex_volume(const Simplex& s);

// Canonicalizes (normal, offset) so the normal is primitive integral.
Halfspace canonical_halfspace(Halfspace h);

}  // namespace kstab
