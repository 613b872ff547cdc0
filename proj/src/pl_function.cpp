#include "kstab/pl_function.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace kstab {

namespace {

// Intersects `base` with extra halfspaces, filtering trivial zero-normal
// constraints first. Returns nullopt when the result has zero volume.
std::optional<Polytope> build_region(const Polytope& base, std::vector<Halfspace> extra) {
    std::vector<Halfspace> hs = base.halfspaces();
    for (Halfspace& h : extra) {
        if (is_zero_vec(h.normal)) {
            if (h.offset < 0) return std::nullopt;  // 0 <= negative: empty
            continue;                               // trivially satisfied
        }
        hs.push_back(std::move(h));
    }
    return Polytope::try_from_halfspaces(base.dim(), std::move(hs));
}

}  // namespace

PLConcave::PLConcave(std::vector<AffinePiece> affines) : affines_(std::move(affines)) {
    if (affines_.empty())
        throw std::invalid_argument("piecewise-linear function needs at least one piece");
    const std::size_t d = affines_[0].gradient.size();
    for (const AffinePiece& a : affines_)
        if (a.gradient.size() != d)
            throw std::invalid_argument("affine pieces have inconsistent dimensions");
    for (std::size_t i = 0; i < affines_.size(); ++i)
        for (std::size_t j = i + 1; j < affines_.size(); ++j)
            if (affines_[i].gradient == affines_[j].gradient &&
                affines_[i].constant == affines_[j].constant)
                throw std::invalid_argument("duplicate affine piece " + std::to_string(j));
}

Rat PLConcave::value(const RatVec& x) const {
    Rat best = affines_[0].value(x);
    for (std::size_t i = 1; i < affines_.size(); ++i) {
        Rat v = affines_[i].value(x);
        if (v < best) best = v;
    }
    return best;
}

double PLConcave::value(const std::vector<double>& x) const {
    double best = 0;
    bool first = true;
    for (const AffinePiece& a : affines_) {
        double v = to_double(a.constant);
        for (std::size_t c = 0; c < x.size(); ++c) v += to_double(a.gradient[c]) * x[c];
        if (first || v < best) best = v;
        first = false;
    }
    return best;
}

void PLConcave::validate_irredundant(const Polytope& p) const {
    if (ambient_dim() != p.dim())
        throw std::invalid_argument("function and polytope dimensions differ");
    std::vector<LinearityCell> cells = linearity_cells(*this, p);
    for (std::size_t i = 0; i < affines_.size(); ++i) {
        bool active = false;
        for (const LinearityCell& c : cells)
            if (c.piece == static_cast<int>(i)) active = true;
        if (!active)
            throw std::invalid_argument("affine piece " + std::to_string(i) +
                                        " is redundant on the polytope");
    }
}

std::vector<LinearityCell> linearity_cells(const PLConcave& g, const Polytope& p) {
    std::vector<LinearityCell> cells;
    const auto& pieces = g.affines();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        // Piece i is the minimum where <grad_i - grad_j, x> <= c_j - c_i.
        std::vector<Halfspace> extra;
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            if (j == i) continue;
            extra.push_back({vec_sub(pieces[i].gradient, pieces[j].gradient),
                             pieces[j].constant - pieces[i].constant});
        }
        std::optional<Polytope> cell = build_region(p, std::move(extra));
        if (cell) cells.push_back({std::move(*cell), static_cast<int>(i)});
    }
    return cells;
}

PLConcave drop_redundant_pieces(std::vector<AffinePiece> pieces, const Polytope& p) {
    PLConcave raw(std::move(pieces));
    std::vector<bool> active(raw.affines().size(), false);
    for (const LinearityCell& c : linearity_cells(raw, p)) active[c.piece] = true;
    std::vector<AffinePiece> kept;
    for (std::size_t i = 0; i < raw.affines().size(); ++i)
        if (active[i]) kept.push_back(raw.affines()[i]);
    return PLConcave(std::move(kept));
}

CellDecomposition cell_decomposition(const PLConcave& g, const Polytope& p) {
    CellDecomposition out;
    for (const LinearityCell& c : linearity_cells(g, p))
        for (Simplex& s : c.region.triangulate())
            out.cells.push_back({std::move(s), c.piece});
    return out;
}

std::vector<RatVec> cell_vertices(const PLConcave& g, const Polytope& p) {
    std::vector<RatVec> verts;
    for (const LinearityCell& c : linearity_cells(g, p))
        for (const RatVec& v : c.region.vertices())
            if (std::find(verts.begin(), verts.end(), v) == verts.end())
                verts.push_back(v);
    std::sort(verts.begin(), verts.end());
    return verts;
}

std::optional<Polytope> superlevel_region(const PLConcave& g, const Polytope& p,
                                          const Rat& lambda) {
    if (g.ambient_dim() != p.dim())
        throw std::invalid_argument("function and polytope dimensions differ");
    // g >= lambda iff every piece is >= lambda: -grad_i . x <= c_i - lambda.
    std::vector<Halfspace> extra;
    for (const AffinePiece& a : g.affines())
        extra.push_back({vec_scale(Rat(-1), a.gradient), a.constant - lambda});
    return build_region(p, std::move(extra));
}

Rat integrate_affine_power_over_simplex(const Simplex& s, const AffinePiece& l,
                                        const Rat& shift, int power) {
    const int n = static_cast<int>(s.size()) - 1;
    // Complete homogeneous symmetric polynomial h_p of the vertex values via
    // the prefix recursion H[q] accumulated one variable at a time.
    std::vector<Rat> h(power + 1, Rat(0));
    h[0] = 1;
    for (const RatVec& v : s) {
        const Rat b = l.value(v) - shift;
        for (int q = 1; q <= power; ++q) h[q] += b * h[q - 1];
    }
    // int_simplex l^p = vol * n! p! / (n+p)! * h_p.
    Rat factor = 1;
    for (int i = 1; i <= power; ++i) factor *= Rat(i, n + i);
    return simplex_volume(s) * factor * h[power];
}

Rat integrate_pl_power(const PLConcave& g, const Polytope& p, int power,
                       const Rat& shift, bool absolute) {
    if (power < 0) throw std::invalid_argument("power must be nonnegative");
    Rat total = 0;
    for (const LinearityCell& cell : linearity_cells(g, p)) {
        const AffinePiece& piece = g.affines()[cell.piece];
        if (!absolute) {
            for (const Simplex& s : cell.region.triangulate())
                total += integrate_affine_power_over_simplex(s, piece, shift, power);
            continue;
        }
        // |l - shift|^p: split the cell along {l = shift} and integrate
        // (l - shift)^p above and (shift - l)^p below.
        const AffinePiece neg{vec_scale(Rat(-1), piece.gradient), -piece.constant};
        std::optional<Polytope> above =
            build_region(cell.region, {{vec_scale(Rat(-1), piece.gradient), piece.constant - shift}});
        std::optional<Polytope> below =
            build_region(cell.region, {{piece.gradient, shift - piece.constant}});
        if (above)
            for (const Simplex& s : above->triangulate())
                total += integrate_affine_power_over_simplex(s, piece, shift, power);
        if (below)
            for (const Simplex& s : below->triangulate())
                total += integrate_affine_power_over_simplex(s, neg, -shift, power);
    }
    return total;
}

}  // namespace kstab
