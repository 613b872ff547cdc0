#pragma once

#include "kstab/configurations.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace kstab {

// Float64 lives in this module only. Infinities are the dedicated markers:
// +inf marks nodes excluded from a conjugand (constraint indicator), -inf
// marks an identically -infinity potential (empty equilibrium family).
inline constexpr double kPlusInf = std::numeric_limits<double>::infinity();
inline constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

struct Axis {
    double lo = 0, hi = 1;
    int n = 2;

    double step() const { return (hi - lo) / (n - 1); }
    double node(int i) const { return lo + i * step(); }
};

enum class GridRole { SymplecticPotential, KahlerPotential };

// Samples of a convex potential on a uniform 1- or 2-dimensional grid.
class PotentialGrid {
public:
    PotentialGrid(Axis axis, std::vector<double> values, GridRole role);
    PotentialGrid(Axis axis0, Axis axis1, std::vector<double> values, GridRole role);

    int dim() const { return dim_; }
    const Axis& axis(int d = 0) const { return axes_[d]; }
    GridRole role() const { return role_; }
    int size() const { return static_cast<int>(values_.size()); }

    double at(int i) const { return values_[i]; }             // flat index
    double& at(int i) { return values_[i]; }
    double at(int i0, int i1) const { return values_[i0 * axes_[1].n + i1]; }
    const std::vector<double>& values() const { return values_; }

    bool is_minus_infinity() const;  // the -infinity sentinel grid

    static PotentialGrid minus_infinity(const std::vector<Axis>& axes, GridRole role);

    static PotentialGrid sample(const std::vector<Axis>& axes, GridRole role,
                                const std::function<double(const std::vector<double>&)>& f);

private:
    int dim_;
    Axis axes_[2];
    std::vector<double> values_;
    GridRole role_;
};

// Axes spanning the bounding box of the moment polytope.
std::vector<Axis> moment_axes(const Polytope& p, int nodes_per_axis);

// Reference symplectic potential: the conjugate of the level-1 monomial
// potential log sum_{u in P cap Z^n} e^{<u,y>}, restricted to P. On the line
// model [0,1] this is the round-metric potential x log x + (1-x) log(1-x).
PotentialGrid reference_symplectic_potential(const Polytope& p, int nodes_per_axis,
                                             const std::vector<Axis>& yaxes);

// Marks nodes outside P (or below the superlevel constraint) with +inf.
PotentialGrid restrict_to_polytope(PotentialGrid grid, const Polytope& p);
PotentialGrid constrain_superlevel(PotentialGrid grid, const PLConcave& g, double lambda);

// Discrete Legendre-Fenchel conjugate max_x (<x,y> - f(x)) onto the dual
// axes, computed by the hull-and-merge linear-time scan (iterated per
// dimension in 2D). Nodes at +inf are excluded; throws std::invalid_argument
// when the effective domain is empty or f carries -inf.
PotentialGrid legendre(const PotentialGrid& f, const std::vector<Axis>& dual_axes);

// Total discrete Monge-Ampere mass of a convex potential in the complex
// normalization (n! times the measure of the gradient image). 1D: total
// variation of the discrete derivative. 2D: measure of the dual region whose
// conjugating argmax stays interior ("subgradient-cell" counting).
double discrete_ma_mass(const PotentialGrid& phi);

// Per-node Monge-Ampere masses of a 1D potential (second differences,
// clamped at zero); ends carry no mass.
std::vector<double> ma_node_masses_1d(const PotentialGrid& phi);

// Weak geodesic ray data: the symplectic-side reference u0 (role
// SymplecticPotential, +inf off P), the configuration, and the Kahler-side
// axes the ray lives on.
struct GeodesicRay {
    PotentialGrid u0;
    ToricConfig cfg;
    std::vector<Axis> dual_axes;
    double tmax = 1.0;
    int tsteps = 32;

    double dt() const { return tmax / tsteps; }
};

// phi_t = conjugate of (u0 - t*g); t = 0 recovers the Kahler potential.
PotentialGrid build_ray(const PotentialGrid& u0, const ToricConfig& cfg, double t,
                        const std::vector<Axis>& dual_axes);

// psi_lambda = conjugate of u0 restricted to {g >= lambda}; the sentinel
// -infinity grid when the constraint empties the grid (lambda > lambda_c).
PotentialGrid equilibrium(const PotentialGrid& u0, const ToricConfig& cfg, double lambda,
                          const std::vector<Axis>& dual_axes);

// Finite-level envelope over the algebraic weights of W_{lambda,k}.
PotentialGrid bergman_approx(const PotentialGrid& u0, const ToricConfig& cfg, double lambda,
                             std::int64_t k, const std::vector<Axis>& dual_axes);

// Max over nodes of |phi_t - psi_{lambda(y)} - t*lambda(y)| with lambda(y)
// the forward-difference time derivative, clamped to [lambda_0, lambda_c];
// psi interpolated on a lambda grid of `lambda_samples` points.
double gradient_map_residual(const GeodesicRay& ray, double t, int lambda_samples);

struct MassIdentity {
    double lhs;  // discrete MA mass of psi_lambda
    Rat rhs;     // n! * vol{g >= lambda}, exact
};

MassIdentity ma_mass_identity(const PotentialGrid& u0, const ToricConfig& cfg, double lambda,
                              const std::vector<Axis>& dual_axes);

struct SlopeFit {
    double slope;         // least-squares slope of the energy in t
    double max_residual;  // worst deviation from the linear fit
};

// Aubin-Mabuchi energy along the ray: cumulative quadrature of
// int phidot_t MA(phi_t); linear in t with slope n! b0.
SlopeFit aubin_mabuchi_slope(const GeodesicRay& ray);

// MA mass carried by nodes where psi < phi - eps (eps = 10 grid steps).
double maximality_leakage(const PotentialGrid& psi, const PotentialGrid& phi);

struct ComparisonResult {
    bool conclusive;  // precondition phi' <= phi + C held on the grid
    bool holds;       // mass(phi') <= mass(phi) + tol
    double mass_phi;
    double mass_phi_prime;
};

ComparisonResult comparison_monotonicity(const PotentialGrid& phi,
                                         const PotentialGrid& phi_prime, double tol);

}  // namespace kstab
