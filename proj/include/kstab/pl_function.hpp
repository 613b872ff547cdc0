#pragma once

#include "kstab/polytope.hpp"
#include "kstab/rat.hpp"

#include <optional>
#include <vector>

namespace kstab {

// One affine piece <gradient, x> + constant.
struct AffinePiece {
    RatVec gradient;
    Rat constant;

    Rat value(const RatVec& x) const { return dot(gradient, x) + constant; }
};

// Concave piecewise-linear function g = min over affine pieces.
//
// The representation is concave by construction. Irredundancy (every piece
// active on a full-dimensional subset of the domain) is relative to a
// polytope and is enforced by `validate_irredundant`.
class PLConcave {
public:
    explicit PLConcave(std::vector<AffinePiece> affines);

    const std::vector<AffinePiece>& affines() const { return affines_; }
    int ambient_dim() const { return static_cast<int>(affines_[0].gradient.size()); }

    Rat value(const RatVec& x) const;
    double value(const std::vector<double>& x) const;

    // Throws std::invalid_argument naming the first piece whose active cell
    // on P has empty interior (such a piece never changes the minimum).
    void validate_irredundant(const Polytope& p) const;

private:
    std::vector<AffinePiece> affines_;
};

// Closed cell of linearity of g inside P, with its active piece.
struct LinearityCell {
    Polytope region;
    int piece;  // index into g.affines()
};

// Triangulated cell decomposition: simplices on which g is a single affine
// function.
struct CellDecomposition {
    struct Cell {
        Simplex simplex;
        int piece;
    };
    std::vector<Cell> cells;
};

// Full-dimensional cells of linearity of g on P.
std::vector<LinearityCell> linearity_cells(const PLConcave& g, const Polytope& p);

// Builds the PL function min over `pieces` and removes every piece that is
// inactive on P, yielding an irredundant representation of the same function.
PLConcave drop_redundant_pieces(std::vector<AffinePiece> pieces, const Polytope& p);

CellDecomposition cell_decomposition(const PLConcave& g, const Polytope& p);

// Vertices of all linearity cells (deduplicated). Contains every point where
// g can attain its extrema over P.
std::vector<RatVec> cell_vertices(const PLConcave& g, const Polytope& p);

// {x in P : g(x) >= lambda} as a polytope; nullopt when the region is empty
// or lower-dimensional (zero volume). Since g is a min of affine pieces the
// region is the intersection of P with one halfspace per piece.
std::optional<Polytope> superlevel_region(const PLConcave& g, const Polytope& p,
                                          const Rat& lambda);

// Exact value of the integral over P of (g(x) - shift)^p, or of
// |g(x) - shift|^p when `absolute` is set. Cells are additionally split along
// {g = shift} in the absolute case; each piece reduces to a closed-form
// monomial integral over simplices.
Rat integrate_pl_power(const PLConcave& g, const Polytope& p, int power,
                       const Rat& shift, bool absolute);

// Integral of (l(x) - shift)^p over a simplex for an affine l, via the
// complete homogeneous symmetric polynomial of the vertex values.
Rat integrate_affine_power_over_simplex(const Simplex& s, const AffinePiece& l,
                                        const Rat& shift, int power);

}  // namespace kstab
