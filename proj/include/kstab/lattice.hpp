#pragma once

#include "kstab/polytope.hpp"
#include "kstab/rat.hpp"

#include <cstdint>
#include <vector>

namespace kstab {

using LatticePoint = std::vector<std::int64_t>;

// All integer points of the dilation k*P, sorted lexicographically.
std::vector<LatticePoint> enumerate_lattice_points(const Polytope& p, std::int64_t k);

inline std::int64_t lattice_point_count(const Polytope& p, std::int64_t k) {
    return static_cast<std::int64_t>(enumerate_lattice_points(p, k).size());
}

struct EhrhartCoefficients {
    Rat a0;                       // leading coefficient == volume
    Rat a1;
    std::vector<Rat> lower_order; // remaining coefficients, descending degree
    std::int64_t period = 1;      // lcm of vertex coordinate denominators

    // Value of the constituent polynomial at k (valid for k % period == 0).
    Rat evaluate(std::int64_t k) const;
};

// Exact quasi-polynomial constituent on the progression k = 0 mod period,
// interpolated from counts at n+2 multiples of the period (the extra count
// cross-checks the fit).
EhrhartCoefficients ehrhart_coefficients(const Polytope& p);

}  // namespace kstab
