#pragma once

#include "kstab/lattice.hpp"
#include "kstab/monomial_ideal.hpp"
#include "kstab/pl_function.hpp"
#include "kstab/polytope.hpp"
#include "kstab/rat.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace kstab {

// Raised when a level k misses the divisibility required by a configuration
// (e.g. c*k or a displayed ideal exponent fails to be an integer).
class DivisibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Rounding { Ceil, Floor };

// Per-level weight data: sorted (weight, dim) pairs of the torus action on
// the level-k sections, plus the counting function f_k.
class FiltrationTable {
public:
    FiltrationTable(int ambient_dim, std::int64_t level,
                    std::map<std::int64_t, std::int64_t> dims);

    int ambient_dim() const { return ambient_dim_; }
    std::int64_t level() const { return level_; }
    const std::vector<std::pair<std::int64_t, std::int64_t>>& entries() const {
        return entries_;
    }

    std::int64_t hilbert_dim() const;                 // N_k = sum of dims
    Int total_weight() const;                         // w(k) = sum weight*dim
    Int moment_sum(int p) const;                      // sum weight^p * dim
    std::int64_t counting(std::int64_t lambda) const; // f_k = sum_{w >= lambda} dim
    std::int64_t min_weight() const;
    std::int64_t max_weight() const;

private:
    int ambient_dim_;
    std::int64_t level_;
    std::vector<std::pair<std::int64_t, std::int64_t>> entries_;
};

// Toric test configuration: a concave rational PL function on the moment
// polytope; the weight of the monomial section u at level k is
// round(k * g(u/k)) with the configured rounding.
class ToricConfig {
public:
    ToricConfig(Polytope polytope, PLConcave g, Rounding rounding = Rounding::Ceil);

    const Polytope& polytope() const { return polytope_; }
    const PLConcave& g() const { return g_; }
    Rounding rounding() const { return rounding_; }

    std::int64_t weight(const LatticePoint& u, std::int64_t k) const;
    FiltrationTable dims_by_weight(std::int64_t k) const;

    // (lambda_0, lambda_c) = (min, max) of g over P, via cell vertices.
    std::pair<Rat, Rat> lambda_bounds() const;

    // Smallest m such that the weight sums are polynomial along k = 0 mod m:
    // the lcm of the denominators of the cell vertices and of g's values
    // there.
    std::int64_t period() const;

private:
    Polytope polytope_;
    PLConcave g_;
    Rounding rounding_;
};

// Superadditivity check of the weight filtration on sampled pairs of lattice
// points. Ceil rounding admits a slack of 1, floor rounding none.
bool check_multiplicativity(const ToricConfig& cfg, std::int64_t k, std::int64_t kprime,
                            int sample_count, unsigned seed = 12345u);

// Largest c for which the corner cut {l_v >= c} keeps blow-up combinatorics:
// the minimum of the corner's lattice distance sum over the vertices joined
// to `vertex_index` by an edge. Requires a Delzant corner.
Rat seshadri_fixed_point(const Polytope& p, int vertex_index);

// Deformation to the normal cone of the torus-fixed point at a Delzant
// vertex, with parameter 0 < c < seshadri.
class NormalConeConfig {
public:
    NormalConeConfig(Polytope polytope, int fixed_vertex, Rat c);

    const Polytope& polytope() const { return polytope_; }
    int fixed_vertex() const { return fixed_vertex_; }
    const Rat& c() const { return c_; }

    // Vanishing order of the section u at the fixed point (lattice distance
    // sum in the corner chart).
    std::int64_t order_at_vertex(const LatticePoint& u, std::int64_t k) const;

    // Dimensions from the W_{lambda,k} case analysis by successive
    // differences; requires c*k integral.
    FiltrationTable dims_by_weight(std::int64_t k) const;

    std::pair<Rat, Rat> lambda_bounds() const { return {-c_, Rat(0)}; }
    std::int64_t period() const;

    // Equivalent toric configuration g = min(0, l_v - c).
    ToricConfig toric_view() const;

private:
    Polytope polytope_;
    int fixed_vertex_;
    Rat c_;
    RatVec eta_sum_;  // integral; l_v(x) = <eta_sum, x - v>
};

// Flag-ideal configuration over monomial ideals J_0 c J_1 c ... c J_{N-1} on
// projective space, L = O(degree).
class FlagIdealConfig {
public:
    FlagIdealConfig(std::vector<MonomialIdeal> flag, Rat c, std::int64_t degree);

    int nvars() const { return flag_[0].nvars(); }
    int flag_length() const { return static_cast<int>(flag_.size()); }
    const std::vector<MonomialIdeal>& flag() const { return flag_; }
    const Rat& c() const { return c_; }
    std::int64_t degree() const { return degree_; }
    const Polytope& polytope() const { return polytope_; }

    std::int64_t hilbert_dim(std::int64_t k) const;

    // Weight of the section u at level k: minus the cheapest central-fiber
    // pole order over all decompositions i_0 + ... + i_N = c*k with
    // u in J_0^{i_0} ... J_{N-1}^{i_{N-1}}.
    std::int64_t weight(const LatticePoint& u, std::int64_t k) const;

    FiltrationTable dims_by_weight(std::int64_t k) const;

    // dim W_{lambda,k} by the three-case piecewise formula with the
    // lexicographic-maximal exponent solution. Throws DivisibilityError when
    // c*k or the displayed exponent is not integral.
    std::int64_t flag_W_dim(const Rat& lambda, std::int64_t k) const;

    std::pair<Rat, Rat> lambda_bounds() const;
    std::int64_t period() const;

    // Exact toric equivalent for flags of full powers of the corner maximal
    // ideal; certified by comparing dims at two levels, nullopt otherwise.
    std::optional<ToricConfig> toric_view() const;

private:
    std::vector<MonomialIdeal> flag_;
    Rat c_;
    std::int64_t degree_;
    Polytope polytope_;
};

using Config = std::variant<ToricConfig, NormalConeConfig, FlagIdealConfig>;

FiltrationTable dims_by_weight(const Config& cfg, std::int64_t k);
std::pair<Rat, Rat> lambda_bounds(const Config& cfg);
std::int64_t period(const Config& cfg);
int ambient_dim(const Config& cfg);

// The exact toric model of the configuration when one exists.
std::optional<ToricConfig> toric_view(const Config& cfg);

}  // namespace kstab
