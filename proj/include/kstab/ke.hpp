#pragma once

#include "kstab/configurations.hpp"
#include "kstab/geodesic.hpp"

#include <string>
#include <vector>

namespace kstab {

// Toric Fano model: the reflexive anticanonical polytope together with a
// family of smooth strictly convex reference potentials
// phi(y) = log sum_u c_u e^{<u,y>}, one positive coefficient per lattice
// point of P. Sample 0 is the reference metric.
class FanoModel {
public:
    FanoModel(Polytope anticanonical, std::vector<std::vector<double>> metric_coeffs);

    const Polytope& polytope() const { return polytope_; }
    int dim() const { return polytope_.dim(); }
    int metric_count() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<LatticePoint>& lattice() const { return lattice_; }

    double potential(int metric, const std::vector<double>& y) const;
    // Analytic gradient and Hessian: mean and covariance of the weighted
    // exponential family, so the Monge-Ampere density needs no differencing.
    std::vector<double> gradient(int metric, const std::vector<double>& y) const;
    double ma_density(int metric, const std::vector<double>& y) const;  // det D^2 phi

private:
    Polytope polytope_;
    std::vector<LatticePoint> lattice_;
    std::vector<std::vector<double>> coeffs_;
};

// The line model (-K of the projective line; KE reference plus two
// perturbations) and the one-point blow-up of the plane (five samples).
FanoModel make_fano_p1();
FanoModel make_fano_blowup();

// Exponent for the bound sweeps: a positive integer or infinity.
struct PNorm {
    bool infinite = false;
    int value = 2;

    static PNorm of(int p) { return {false, p}; }
    static PNorm infinity() { return {true, 0}; }
    double conjugate() const;  // q with 1/p + 1/q = 1 (may be fractional)
    std::string label() const;
};

struct RatioGrid {
    std::vector<Axis> axes;
    std::vector<double> ratio;       // n! e^{-phi} (normalized) / MA density
    std::vector<double> ma_density;  // det D^2 phi per node
    double scale;                    // normalization applied to e^{-phi}
};

// Pointwise Kahler-Einstein density ratio on a grid; e^{-phi} is scaled so
// its n!-weighted integral equals the exact MA mass L^n. Nodes where the MA
// density degenerates below `density_floor` carry ratio 1 (they are weightless
// in every norm against MA).
RatioGrid density_ratio(const FanoModel& model, int metric, const std::vector<Axis>& axes,
                        double density_floor = 1e-13);

struct FanoBound {
    double lhs = 0;           // |ratio - 1|_{L^q(MA/n!)}
    double rhs = 0;           // F1 / |T|_p
    bool holds = false;
    bool trivial_norm = false;  // |T|_p = 0: bound skipped
    Rat f1;
};

FanoBound verify_fano_bound(const FanoModel& model, const Config& cfg, int metric,
                            PNorm p, const std::vector<Axis>& axes);

struct CalabiBound {
    double holder_lhs = 0;     // |gdot|_p * |S - Shat|_q
    double holder_rhs = 0;     // int (gdot)(S - Shat)
    bool holder_holds = false;
    double bound_lhs = 0;      // |T|_p * |S - Shat|_q
    Rat f1;
    bool bound_holds = false;
    double convexity_margin = 0;  // holder_rhs - F1, reported only
};

// Scalar-curvature route on 1-dimensional models: S(x) = -2 (1/u'')'' via
// the dual identity 1/u''(x) = phi''(y(x)), with the mean-value inverse
// solved analytically.
CalabiBound calabi_bound_1d(const FanoModel& model, const Config& cfg, int metric,
                            PNorm p, int nodes);

}  // namespace kstab
