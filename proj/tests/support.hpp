#pragma once

#include "kstab/configurations.hpp"
#include "kstab/pl_function.hpp"
#include "kstab/polytope.hpp"
#include "kstab/rat.hpp"

#include <cstdint>
#include <vector>

namespace kstab::testsupport {

inline Polytope interval(const Rat& a, const Rat& b) {
    return Polytope::from_halfspaces(1, {{{Rat(1)}, b}, {{Rat(-1)}, -a}});
}

inline Polytope unit_square() {
    return Polytope::from_halfspaces(2, {{{Rat(1), Rat(0)}, Rat(1)},
                                         {{Rat(-1), Rat(0)}, Rat(0)},
                                         {{Rat(0), Rat(1)}, Rat(1)},
                                         {{Rat(0), Rat(-1)}, Rat(0)}});
}

inline Polytope square(const Rat& side) {
    return Polytope::from_halfspaces(2, {{{Rat(1), Rat(0)}, side},
                                         {{Rat(-1), Rat(0)}, Rat(0)},
                                         {{Rat(0), Rat(1)}, side},
                                         {{Rat(0), Rat(-1)}, Rat(0)}});
}

inline Polytope standard_simplex2() {
    return Polytope::from_halfspaces(2, {{{Rat(-1), Rat(0)}, Rat(0)},
                                         {{Rat(0), Rat(-1)}, Rat(0)},
                                         {{Rat(1), Rat(1)}, Rat(1)}});
}

// Anticanonical polytope of the one-point blow-up of the projective plane.
inline Polytope blowup_polytope() {
    return Polytope::from_halfspaces(2, {{{Rat(-1), Rat(0)}, Rat(1)},
                                         {{Rat(0), Rat(-1)}, Rat(1)},
                                         {{Rat(1), Rat(1)}, Rat(1)},
                                         {{Rat(-1), Rat(-1)}, Rat(1)}});
}

inline PLConcave affine_g(RatVec gradient, Rat constant) {
    return PLConcave({{std::move(gradient), std::move(constant)}});
}

// g(x) = x on [0,1]: the product configuration on the line model.
inline ToricConfig product_p1() {
    return ToricConfig(interval(0, 1), affine_g({Rat(1)}, Rat(0)));
}

inline ToricConfig trivial_p1() {
    return ToricConfig(interval(0, 1), affine_g({Rat(0)}, Rat(0)));
}

// g = min(x, 1-x) on [0,1].
inline ToricConfig roof_p1() {
    return ToricConfig(interval(0, 1),
                       PLConcave({{{Rat(1)}, Rat(0)}, {{Rat(-1)}, Rat(1)}}));
}

inline NormalConeConfig normal_cone_p1(const Rat& c = Rat(1, 2)) {
    return NormalConeConfig(interval(0, 1), 0, c);
}

// Independent brute-force count of lattice points of k*P over a box scan;
// shares only the rational scalar type with the library.
inline std::int64_t brute_force_lattice_count(const Polytope& p, std::int64_t k) {
    std::int64_t lo = 0, hi = 0;
    for (const RatVec& v : p.vertices())
        for (const Rat& c : v) {
            const double x = to_double(c) * static_cast<double>(k);
            lo = std::min<std::int64_t>(lo, static_cast<std::int64_t>(x) - 2);
            hi = std::max<std::int64_t>(hi, static_cast<std::int64_t>(x) + 2);
        }
    const int n = p.dim();
    std::vector<std::int64_t> u(n, lo);
    std::int64_t count = 0;
    while (true) {
        RatVec x(n);
        for (int c = 0; c < n; ++c) x[c] = u[c];
        bool inside = true;
        for (const Halfspace& h : p.halfspaces())
            if (dot(h.normal, x) > Rat(k) * h.offset) inside = false;
        if (inside) ++count;
        int c = n - 1;
        while (c >= 0 && u[c] == hi) {
            u[c] = lo;
            --c;
        }
        if (c < 0) break;
        ++u[c];
    }
    return count;
}

}  // namespace kstab::testsupport
