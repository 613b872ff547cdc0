#include "kstab/polytope.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace kstab {

namespace {

void check_input(int dim, const std::vector<Halfspace>& hs) {
    if (dim < 1) throw std::invalid_argument("polytope dimension must be >= 1");
    if (hs.empty()) throw std::invalid_argument("polytope needs at least one halfspace");
    for (const Halfspace& h : hs) {
        if (static_cast<int>(h.normal.size()) != dim)
            throw std::invalid_argument("halfspace normal has wrong dimension");
        if (is_zero_vec(h.normal))
            throw std::invalid_argument("halfspace normal must be nonzero");
    }
}

// Enumerates all size-k subsets of {0, ..., m-1}.
void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(k);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            fn(idx);
            return;
        }
        for (int i = start; i <= m - (k - depth); ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

// The polytope is bounded iff the recession cone {d : Ad <= 0} is {0}.
// A nonzero cone either contains a line (rank deficiency) or an extreme ray
// cut out by n-1 independent tight constraints; both cases are enumerated.
bool recession_cone_trivial(int dim, const std::vector<Halfspace>& hs) {
    RatMat all_rows;
    for (const Halfspace& h : hs) all_rows.push_back(h.normal);
    if (matrix_rank(all_rows) < dim) return false;

    bool trivial = true;
    for_each_subset(static_cast<int>(hs.size()), dim - 1, [&](const std::vector<int>& idx) {
        if (!trivial) return;
        RatMat rows;
        for (int i : idx) rows.push_back(hs[i].normal);
        std::optional<RatVec> d = kernel_vector(rows, dim);
        if (!d || is_zero_vec(*d)) return;
        for (int sign = 0; sign < 2; ++sign) {
            bool inside_cone = true;
            for (const Halfspace& h : hs) {
                if (dot(h.normal, *d) > 0) {
                    inside_cone = false;
                    break;
                }
            }
            if (inside_cone) {
                trivial = false;
                return;
            }
            for (Rat& x : *d) x = -x;
        }
    });
    return trivial;
}

int affine_rank(const std::vector<RatVec>& points) {
    if (points.size() <= 1) return 0;
    RatMat rows;
    for (std::size_t i = 1; i < points.size(); ++i)
        rows.push_back(vec_sub(points[i], points[0]));
    return matrix_rank(rows);
}

// Orders the vertex set of a convex polygon counterclockwise; `points` are
// 2-dimensional coordinates.
std::vector<int> polygon_order(const std::vector<RatVec>& pts) {
    const int m = static_cast<int>(pts.size());
    RatVec c(2, Rat(0));
    for (const RatVec& p : pts) {
        c[0] += p[0];
        c[1] += p[1];
    }
    c[0] /= m;
    c[1] /= m;
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    auto half = [&](int i) {
        const Rat dy = pts[i][1] - c[1];
        const Rat dx = pts[i][0] - c[0];
        return (dy > 0 || (dy == 0 && dx > 0)) ? 0 : 1;
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const int ha = half(a), hb = half(b);
        if (ha != hb) return ha < hb;
        const Rat cross = (pts[a][0] - c[0]) * (pts[b][1] - c[1]) -
                          (pts[a][1] - c[1]) * (pts[b][0] - c[0]);
        return cross > 0;
    });
    return order;
}

}  // namespace

Halfspace canonical_halfspace(Halfspace h) {
    Int m = 1;
    for (const Rat& x : h.normal) m = int_lcm(m, rat_den(x));
    m = int_lcm(m, rat_den(h.offset));
    Int g = 0;
    for (const Rat& x : h.normal) g = int_gcd(g, rat_num(x) * (m / rat_den(x)));
    if (g < 0) g = -g;
    const Rat scale = Rat(m, g);
    for (Rat& x : h.normal) x *= scale;
    h.offset *= scale;
    return h;
}

Rat simplex_volume(const Simplex& s) {
    const int n = static_cast<int>(s.size()) - 1;
    RatMat m;
    for (int i = 1; i <= n; ++i) m.push_back(vec_sub(s[i], s[0]));
    Rat det = determinant(std::move(m));
    if (det < 0) det = -det;
    Rat fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    return det / fact;
}

std::optional<Polytope> Polytope::try_from_halfspaces(int dim, std::vector<Halfspace> input) {
    check_input(dim, input);

    // Canonicalize and dedupe; keep the tightest offset among parallel copies.
    std::map<RatMat, Rat> tightest;
    for (Halfspace& h : input) {
        h = canonical_halfspace(std::move(h));
        auto [it, inserted] = tightest.try_emplace(RatMat{h.normal}, h.offset);
        if (!inserted && h.offset < it->second) it->second = h.offset;
    }
    std::vector<Halfspace> hs;
    hs.reserve(tightest.size());
    for (auto& [key, offset] : tightest) hs.push_back({key[0], offset});

    if (!recession_cone_trivial(dim, hs))
        throw std::invalid_argument("polytope is unbounded");

    // Vertex enumeration over all dim-subsets of constraints.
    std::vector<RatVec> verts;
    for_each_subset(static_cast<int>(hs.size()), dim, [&](const std::vector<int>& idx) {
        RatMat a;
        RatVec b;
        for (int i : idx) {
            a.push_back(hs[i].normal);
            b.push_back(hs[i].offset);
        }
        std::optional<RatVec> x = solve_linear(std::move(a), std::move(b));
        if (!x) return;
        for (const Halfspace& h : hs)
            if (dot(h.normal, *x) > h.offset) return;
        if (std::find(verts.begin(), verts.end(), *x) == verts.end())
            verts.push_back(std::move(*x));
    });
    std::sort(verts.begin(), verts.end());

    if (static_cast<int>(verts.size()) < dim + 1) return std::nullopt;

    // Full-dimensionality: the vertex centroid must be strictly interior.
    RatVec centroid(dim, Rat(0));
    for (const RatVec& v : verts) centroid = vec_add(centroid, v);
    for (Rat& x : centroid) x /= static_cast<int>(verts.size());
    for (const Halfspace& h : hs)
        if (dot(h.normal, centroid) >= h.offset) return std::nullopt;

    // Keep facet-defining halfspaces only: tight set of affine rank dim-1.
    std::vector<Halfspace> facets;
    for (const Halfspace& h : hs) {
        std::vector<RatVec> tight;
        for (const RatVec& v : verts)
            if (dot(h.normal, v) == h.offset) tight.push_back(v);
        if (static_cast<int>(tight.size()) >= dim && affine_rank(tight) == dim - 1)
            facets.push_back(h);
    }

    Polytope p;
    p.dim_ = dim;
    p.halfspaces_ = std::move(facets);
    p.vertices_ = std::move(verts);
    return p;
}

Polytope Polytope::from_halfspaces(int dim, std::vector<Halfspace> halfspaces) {
    std::optional<Polytope> p = try_from_halfspaces(dim, std::move(halfspaces));
    if (!p) throw std::invalid_argument("polytope is empty or lower-dimensional");
    return std::move(*p);
}

bool Polytope::contains(const RatVec& x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("point has wrong dimension");
    for (const Halfspace& h : halfspaces_)
        if (dot(h.normal, x) > h.offset) return false;
    return true;
}

std::vector<int> Polytope::facet_vertices(int h) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(vertices_.size()); ++i)
        if (dot(halfspaces_[h].normal, vertices_[i]) == halfspaces_[h].offset)
            out.push_back(i);
    return out;
}

std::vector<std::pair<int, int>> Polytope::edges() const {
    std::vector<std::pair<int, int>> result;
    const int nv = static_cast<int>(vertices_.size());
    for (int i = 0; i < nv; ++i) {
        for (int j = i + 1; j < nv; ++j) {
            RatMat tight_normals;
            for (const Halfspace& h : halfspaces_) {
                if (dot(h.normal, vertices_[i]) == h.offset &&
                    dot(h.normal, vertices_[j]) == h.offset)
                    tight_normals.push_back(h.normal);
            }
            if (dim_ == 1 || matrix_rank(std::move(tight_normals)) == dim_ - 1)
                result.emplace_back(i, j);
        }
    }
    return result;
}

std::vector<Simplex> Polytope::triangulate(int apex_index) const {
    if (dim_ > 3)
        throw std::invalid_argument("triangulation implemented for dim <= 3");
    std::vector<Simplex> out;
    if (dim_ == 1) {
        out.push_back({vertices_.front(), vertices_.back()});
        return out;
    }
    const RatVec& apex = vertices_[apex_index];
    for (int h = 0; h < static_cast<int>(halfspaces_.size()); ++h) {
        if (dot(halfspaces_[h].normal, apex) == halfspaces_[h].offset) continue;
        std::vector<int> fv = facet_vertices(h);
        std::vector<RatVec> pts;
        for (int i : fv) pts.push_back(vertices_[i]);
        if (dim_ == 2) {
            // Facet is a segment; the two extreme points span it.
            std::sort(pts.begin(), pts.end());
            out.push_back({apex, pts.front(), pts.back()});
        } else {
            // Facet is a convex polygon; fan-triangulate after projecting out
            // the coordinate in which its normal is largest.
            int drop = 0;
            Rat best = rat_abs(halfspaces_[h].normal[0]);
            for (int c = 1; c < 3; ++c) {
                Rat mag = rat_abs(halfspaces_[h].normal[c]);
                if (mag > best) {
                    best = mag;
                    drop = c;
                }
            }
            std::vector<RatVec> proj;
            for (const RatVec& p : pts) {
                RatVec q;
                for (int c = 0; c < 3; ++c)
                    if (c != drop) q.push_back(p[c]);
                proj.push_back(std::move(q));
            }
            std::vector<int> order = polygon_order(proj);
            for (std::size_t i = 1; i + 1 < order.size(); ++i)
                out.push_back({apex, pts[order[0]], pts[order[i]], pts[order[i + 1]]});
        }
    }
    return out;
}

Rat Polytope::volume() const {
    Rat total = 0;
    for (const Simplex& s : triangulate()) total += simplex_volume(s);
    return total;
}

}  // namespace kstab
