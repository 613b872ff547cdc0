#pragma once

#include "kstab/rat.hpp"

#include <cstdint>
#include <vector>

namespace kstab {

using Exponent = std::vector<std::int64_t>;

// Monomial ideal in <= 2 affine variables, given by generator exponents.
//
// Membership in powers and products is decided through the Newton polyhedron
// conv(generators) + R^n_{>=0}; that matches honest ideal membership exactly
// when the ideals involved are integrally closed, which the flag-ideal
// configurations validate against the brute-force expansion oracle.
class MonomialIdeal {
public:
    explicit MonomialIdeal(std::vector<Exponent> generators);

    int nvars() const { return nvars_; }
    const std::vector<Exponent>& generators() const { return gens_; }

    // x^u in this ideal (exact; no closure involved).
    bool contains(const Exponent& u) const;

    // x^u in the m-th power of the Newton region, i.e. u in m*NP(I).
    bool newton_power_contains(const Exponent& u, std::int64_t m) const;

    // x^u in I^m by expanding m-fold generator products (the oracle route).
    bool brute_force_power_contains(const Exponent& u, std::int64_t m) const;

    // Generator-by-generator containment: every generator of *this lies in
    // `other` (ideal containment for monomial ideals).
    bool contained_in(const MonomialIdeal& other) const;

    // Inward facet normals of the Newton polyhedron (all componentwise >= 0)
    // together with the coordinate axis directions. For any such normal v the
    // support value is min over generators of <v, gen>.
    const std::vector<Exponent>& newton_normals() const { return normals_; }
    std::int64_t support(const Exponent& normal) const;

private:
    int nvars_;
    std::vector<Exponent> gens_;
    std::vector<Exponent> normals_;
};

// Membership of u in the product prod_i ideals[i]^{m_i} of Newton regions.
// In <= 2 variables the facet normals of the Minkowski sum are drawn from the
// union of the factor normals, so testing against that union is exact.
bool newton_product_contains(const std::vector<MonomialIdeal>& ideals,
                             const std::vector<std::int64_t>& powers, const Exponent& u);

}  // namespace kstab
