#pragma once

#include "kstab/configurations.hpp"
#include "kstab/rat.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kstab {

// Raised when an exactly-polynomial quantity fails to interpolate along the
// divisibility progression (a rounding-convention artifact); carries the
// residual at the held-out point.
class InterpolationError : public std::runtime_error {
public:
    InterpolationError(const std::string& what, Rat residual)
        : std::runtime_error(what + " (residual " + rat_to_string(residual) + ")"),
          residual_(std::move(residual)) {}
    const Rat& residual() const { return residual_; }

private:
    Rat residual_;
};

// Level-k spectral measure: atom at lambda/k of mass n!/k^n * dim V_lambda.
struct SpectralMeasure {
    std::int64_t level = 0;
    int ambient_dim = 0;
    std::vector<std::pair<Rat, Rat>> atoms;  // (position, mass), positions increasing

    Rat total_mass() const;
    Rat survival(const Rat& x) const;        // mass of [x, infinity)
    Rat survival_right(const Rat& x) const;  // mass of (x, infinity)
};

SpectralMeasure spectral_measure(const Config& cfg, std::int64_t k);

// Duistermaat-Heckman limit measure, represented through its survival
// function V(lambda) = n! * vol{g >= lambda}: a piecewise polynomial of
// degree <= n between the critical values of g, plus the atom jumps of V.
class DHMeasure {
public:
    int ambient_dim() const { return ambient_dim_; }
    Rat full_mass() const { return full_mass_; }  // n! * vol(P)
    const std::vector<Rat>& breakpoints() const { return breakpoints_; }
    // Piece i applies on (breakpoints[i], breakpoints[i+1]]; coefficients in
    // descending degree.
    const std::vector<std::vector<Rat>>& pieces() const { return pieces_; }
    const std::vector<std::pair<Rat, Rat>>& atoms() const { return atoms_; }

    Rat survival(const Rat& x) const;
    Rat survival_right(const Rat& x) const;

    // -int lambda^p dV over the line: the p-th moment of the measure -dV,
    // absolutely-continuous pieces plus atoms.
    Rat moment(int p) const;

    // b0 recovered through the Lebesgue-Stieltjes route: -int lambda dV / n!.
    Rat stieltjes_b0() const;

private:
    friend DHMeasure dh_measure(const ToricConfig& cfg);

    int ambient_dim_ = 0;
    Rat full_mass_;
    std::vector<Rat> breakpoints_;
    std::vector<std::vector<Rat>> pieces_;
    std::vector<std::pair<Rat, Rat>> atoms_;
};

// Exact DH measure of a toric configuration from symbolic superlevel-slice
// volumes.
DHMeasure dh_measure(const ToricConfig& cfg);

struct InvariantSet {
    Rat a0, a1, b0, b1, F0, F1;
};

InvariantSet make_invariant_set(Rat a0, Rat a1, Rat b0, Rat b1);

// Exact quasi-polynomial fit of N_k (degree n) and w(k) (degree n+1) at
// multiples of the period, with held-out verification points.
InvariantSet fit_invariants(const Config& cfg);
InvariantSet fit_invariants(const Config& cfg, std::int64_t period_override);

std::int64_t hilbert_dim(const Config& cfg, std::int64_t k);
Int total_weight(const Config& cfg, std::int64_t k);

// Exact limit Q_p = lim (1/k^n) sum (lambda/k)^p dim, by interpolating the
// degree-(n+p) moment polynomial along the period progression.
Rat algebraic_Qp(const Config& cfg, int p);

// Level-k Riemann sum (1/k^n) sum (lambda/k)^p dim (exact rational).
Rat level_moment_sum(const Config& cfg, int p, std::int64_t k);

struct DistanceReport {
    Rat kolmogorov;  // sup-norm distance of survival functions, exact
    double l1;       // L1 distance over the joint support hull, float64
};

DistanceReport cdf_distance(const SpectralMeasure& mu, const DHMeasure& nu);
Rat kolmogorov_distance(const SpectralMeasure& mu, const SpectralMeasure& nu);

struct NormTriple {
    Rat Qp;          // int g^p
    Rat Np;          // int (g - F0)^p
    Rat norm_p_pow;  // |T|_p^p = int |g - F0|^p
    double norm_p;   // |T|_p
};

// Exact norms through the toric model of the configuration; throws
// std::invalid_argument when none exists.
NormTriple norms(const Config& cfg, int p);

// |T|_infinity = max over cell vertices of |g - F0|.
Rat norm_infinity(const Config& cfg);

// N2 = Q2 - b0^2/a0, exactly, with N2/Q2 from the integral route and b0, a0
// from the interpolation route (falls back to two interpolation routes when
// no toric model exists).
bool check_N2_identity(const Config& cfg);

struct StabilityRatio {
    bool defined = false;
    Rat ratio_squared;      // F1^2 / N2, exact
    double ratio = 0;       // -F1 / |T|_2
    std::string diagnosis;  // set when undefined
};

// -F1 / |T|_2 when the norm is positive; otherwise undefined with the
// zero-norm diagnosis.
StabilityRatio strong_stability_ratio(const Config& cfg);

Rat factorial_rat(int n);

}  // namespace kstab
