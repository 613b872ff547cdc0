#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kstab/geodesic.hpp"
#include "kstab/spectra.hpp"
#include "support.hpp"

#include <cmath>

using namespace kstab;
using namespace kstab::testsupport;

namespace {

double xlogx(double x) { return x <= 0 ? 0.0 : x * std::log(x); }

// Symplectic potential of the round metric on the line model [0,1].
double fs_u0(double x) { return xlogx(x) + xlogx(1.0 - x); }

PotentialGrid fs_grid(int nodes) {
    return PotentialGrid::sample({Axis{0.0, 1.0, nodes}}, GridRole::SymplecticPotential,
                                 [](const std::vector<double>& x) { return fs_u0(x[0]); });
}

const std::vector<Axis> kDual1D = {Axis{-8.0, 8.0, 10001}};

double sup_diff(const PotentialGrid& a, const PotentialGrid& b) {
    double worst = 0;
    for (int i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.at(i) - b.at(i)));
    return worst;
}

}  // namespace

TEST_CASE("legendre transform of the parabola") {
    const Axis ax{-3.0, 3.0, 6001};
    PotentialGrid f = PotentialGrid::sample(
        {ax}, GridRole::SymplecticPotential,
        [](const std::vector<double>& x) { return x[0] * x[0] / 2; });

    const Axis dual{-3.0, 3.0, 4999};
    PotentialGrid fstar = legendre(f, {dual});
    double worst = 0;
    for (int i = 0; i < dual.n; ++i) {
        const double y = dual.node(i);
        worst = std::max(worst, std::abs(fstar.at(i) - y * y / 2));
    }
    CHECK(worst <= ax.step() * ax.step());

    // Double conjugation on the self-dual axis is exact for convex data.
    PotentialGrid back = legendre(legendre(f, {ax}), {ax});
    CHECK(sup_diff(back, f) <= 1e-12);
}

TEST_CASE("legendre transform of the round-metric potential") {
    PotentialGrid u0 = fs_grid(10001);
    PotentialGrid phi = legendre(u0, kDual1D);
    double worst = 0;
    for (int i = 0; i < kDual1D[0].n; ++i) {
        const double y = kDual1D[0].node(i);
        worst = std::max(worst, std::abs(phi.at(i) - std::log1p(std::exp(y))));
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("legendre rejects empty or minus-infinity input") {
    const Axis ax{0.0, 1.0, 11};
    PotentialGrid all_excluded(ax, std::vector<double>(11, kPlusInf),
                               GridRole::SymplecticPotential);
    CHECK_THROWS_AS(legendre(all_excluded, {ax}), std::invalid_argument);
    PotentialGrid sentinel(ax, std::vector<double>(11, kMinusInf),
                           GridRole::SymplecticPotential);
    CHECK_THROWS_AS(legendre(sentinel, {ax}), std::invalid_argument);
}

TEST_CASE("ray construction: base point, constant drift, closed form") {
    PotentialGrid u0 = fs_grid(10001);
    ToricConfig prod = product_p1();

    PotentialGrid phi0 = build_ray(u0, prod, 0.0, kDual1D);
    CHECK(sup_diff(phi0, legendre(u0, kDual1D)) == 0.0);

    // Constant g: phi_t = phi_0 + t*kappa to round-off.
    ToricConfig shifted(interval(0, 1), affine_g({Rat(0)}, Rat(2, 3)));
    PotentialGrid phi_t = build_ray(u0, shifted, 3.0, kDual1D);
    double worst = 0;
    for (int i = 0; i < phi_t.size(); ++i)
        worst = std::max(worst, std::abs(phi_t.at(i) - phi0.at(i) - 2.0));
    CHECK(worst <= 1e-12);

    // Product configuration at t = 1: log(1 + e^{y+1}).
    PotentialGrid phi1 = build_ray(u0, prod, 1.0, kDual1D);
    worst = 0;
    for (int i = 0; i < kDual1D[0].n; ++i) {
        const double y = kDual1D[0].node(i);
        worst = std::max(worst, std::abs(phi1.at(i) - std::log1p(std::exp(y + 1))));
    }
    CHECK(worst <= 1e-3);

    CHECK_THROWS_AS(build_ray(u0, prod, -0.5, kDual1D), std::invalid_argument);
}

TEST_CASE("equilibrium family: base, spot value, sentinel") {
    PotentialGrid u0 = fs_grid(10001);
    ToricConfig prod = product_p1();
    PotentialGrid phi = legendre(u0, kDual1D);

    // Below lambda_0 the constraint is void.
    PotentialGrid psi_low = equilibrium(u0, prod, -0.25, kDual1D);
    CHECK(sup_diff(psi_low, phi) <= 1e-12);

    // Constrained conjugate at lambda = 1/2; at y = 0 the maximizer sits at
    // the cut x = 1/2 and psi(0) = -u0(1/2) = log 2.
    PotentialGrid psi = equilibrium(u0, prod, 0.5, kDual1D);
    const int mid = kDual1D[0].n / 2;
    CHECK(kDual1D[0].node(mid) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(psi.at(mid) == doctest::Approx(std::log(2.0)).epsilon(1e-3));

    // Beyond lambda_c the family is identically -infinity.
    PotentialGrid psi_high = equilibrium(u0, prod, 1.5, kDual1D);
    CHECK(psi_high.is_minus_infinity());
}

TEST_CASE("equilibrium family is decreasing and concave in lambda") {
    PotentialGrid u0 = fs_grid(2001);
    ToricConfig prod = product_p1();
    const std::vector<Axis> dual = {Axis{-6.0, 6.0, 1201}};
    std::vector<PotentialGrid> psi;
    std::vector<double> lams;
    for (int j = 0; j <= 8; ++j) {
        lams.push_back(j / 8.0);
        psi.push_back(equilibrium(u0, prod, lams.back(), dual));
    }
    for (std::size_t j = 0; j + 1 < psi.size(); ++j)
        for (int i = 0; i < psi[j].size(); ++i)
            CHECK(psi[j + 1].at(i) <= psi[j].at(i) + 1e-9);
    // Concavity in lambda at every node (uniform lambda spacing).
    for (std::size_t j = 1; j + 1 < psi.size(); ++j)
        for (int i = 0; i < psi[j].size(); ++i)
            CHECK(psi[j].at(i) >= (psi[j - 1].at(i) + psi[j + 1].at(i)) / 2 - 1e-9);
}

TEST_CASE("bergman envelopes increase to the equilibrium potential") {
    PotentialGrid u0 = fs_grid(4001);
    ToricConfig prod = product_p1();
    const std::vector<Axis> dual = {Axis{-6.0, 6.0, 2001}};

    PotentialGrid psi = equilibrium(u0, prod, 0.5, dual);
    PotentialGrid b32 = bergman_approx(u0, prod, 0.5, 32, dual);
    PotentialGrid b64 = bergman_approx(u0, prod, 0.5, 64, dual);
    double gap32 = 0, gap64 = 0, overshoot = 0;
    for (int i = 0; i < psi.size(); ++i) {
        gap32 = std::max(gap32, psi.at(i) - b32.at(i));
        gap64 = std::max(gap64, psi.at(i) - b64.at(i));
        overshoot = std::max(overshoot, b64.at(i) - psi.at(i));
    }
    CHECK(overshoot <= 1e-9);      // envelopes stay below the equilibrium
    CHECK(gap64 <= gap32 + 1e-12); // and increase with the level
    CHECK(gap64 <= 0.05);

    // Below lambda_0 the full basis approaches phi itself.
    PotentialGrid full = bergman_approx(u0, prod, -0.1, 128, dual);
    PotentialGrid phi = legendre(u0, dual);
    CHECK(sup_diff(full, phi) <= 0.05);

    // Empty weight space: sentinel.
    CHECK(bergman_approx(u0, prod, 1.25, 16, dual).is_minus_infinity());
}

TEST_CASE("gradient map relation") {
    // Constant g: psi_kappa = phi and phi_t = phi + t*kappa, so the relation
    // is exact up to round-off.
    PotentialGrid u0 = fs_grid(2001);
    ToricConfig shifted(interval(0, 1), affine_g({Rat(0)}, Rat(1, 2)));
    GeodesicRay flat{u0, shifted, {Axis{-6.0, 6.0, 1201}}, 1.0, 16};
    CHECK(gradient_map_residual(flat, 1.0, 2) <= 1e-9);

    GeodesicRay ray{fs_grid(10001), product_p1(), kDual1D, 1.0, 64};
    const double r1 = gradient_map_residual(ray, 1.0, 129);
    CHECK(r1 <= 1e-2);

    // First-order scheme: halving every discretization roughly halves the
    // residual (checked within a factor).
    GeodesicRay coarse{fs_grid(5001), product_p1(), {Axis{-8.0, 8.0, 5001}}, 1.0, 32};
    const double r0 = gradient_map_residual(coarse, 1.0, 65);
    CHECK(r1 <= 0.625 * r0);
    CHECK(r1 >= 0.2 * r0);
}

TEST_CASE("monge-ampere mass identity for the equilibrium family") {
    PotentialGrid u0 = fs_grid(10001);
    ToricConfig prod = product_p1();

    MassIdentity mid = ma_mass_identity(u0, prod, 0.5, kDual1D);
    CHECK(mid.rhs == Rat(1, 2));
    CHECK(std::abs(mid.lhs - 0.5) <= 1e-2);

    MassIdentity low = ma_mass_identity(u0, prod, -0.5, kDual1D);
    CHECK(low.rhs == 1);
    CHECK(std::abs(low.lhs - 1.0) <= 1e-2);

    MassIdentity high = ma_mass_identity(u0, prod, 1.5, kDual1D);
    CHECK(high.rhs == 0);
    CHECK(high.lhs == 0.0);
}

TEST_CASE("aubin-mabuchi energy is linear with slope n! b0") {
    GeodesicRay prod{fs_grid(10001), product_p1(), kDual1D, 1.0, 32};
    SlopeFit fit = aubin_mabuchi_slope(prod);
    CHECK(std::abs(fit.slope - 0.5) <= 1e-3);
    CHECK(fit.max_residual <= 1e-3);

    GeodesicRay triv{fs_grid(2001), trivial_p1(), {Axis{-6.0, 6.0, 1201}}, 1.0, 8};
    CHECK(std::abs(aubin_mabuchi_slope(triv).slope) <= 1e-9);

    GeodesicRay nc{fs_grid(10001), normal_cone_p1().toric_view(), kDual1D, 1.0, 32};
    CHECK(std::abs(aubin_mabuchi_slope(nc).slope - (-0.125)) <= 1e-2);
}

TEST_CASE("ray is convex in time at every node") {
    PotentialGrid u0 = fs_grid(2001);
    ToricConfig roof = roof_p1();
    const std::vector<Axis> dual = {Axis{-6.0, 6.0, 801}};
    PotentialGrid p0 = build_ray(u0, roof, 0.0, dual);
    PotentialGrid p1 = build_ray(u0, roof, 0.7, dual);
    PotentialGrid p2 = build_ray(u0, roof, 1.4, dual);
    for (int i = 0; i < p0.size(); ++i)
        CHECK(p1.at(i) <= (p0.at(i) + p2.at(i)) / 2 + 1e-10);
}

TEST_CASE("the two ray constructions agree (conjugate vs sup over lambda)") {
    PotentialGrid u0 = fs_grid(4001);
    ToricConfig prod = product_p1();
    const std::vector<Axis> dual = {Axis{-6.0, 6.0, 1501}};
    const double t = 0.8;
    PotentialGrid direct = build_ray(u0, prod, t, dual);

    // sup over a lambda grid of psi_lambda + t lambda.
    PotentialGrid envelope = PotentialGrid::minus_infinity(dual, GridRole::KahlerPotential);
    const int M = 161;
    for (int j = 0; j < M; ++j) {
        const double lam = static_cast<double>(j) / (M - 1);
        PotentialGrid psi = equilibrium(u0, prod, lam, dual);
        for (int i = 0; i < psi.size(); ++i)
            envelope.at(i) = std::max(envelope.at(i), psi.at(i) + t * lam);
    }
    CHECK(sup_diff(direct, envelope) <= 5e-3);
}

TEST_CASE("maximality: equilibrium mass lives on the contact set") {
    PotentialGrid u0 = fs_grid(10001);
    ToricConfig prod = product_p1();
    PotentialGrid phi = legendre(u0, kDual1D);
    for (double lam : {0.25, 0.5, 0.75}) {
        PotentialGrid psi = equilibrium(u0, prod, lam, kDual1D);
        CHECK(maximality_leakage(psi, phi) <= 1e-3);
    }
}

TEST_CASE("comparison of monge-ampere masses") {
    PotentialGrid u0 = fs_grid(8001);
    ToricConfig prod = product_p1();
    PotentialGrid phi = legendre(u0, kDual1D);
    PotentialGrid psi1 = equilibrium(u0, prod, 0.3, kDual1D);
    PotentialGrid psi2 = equilibrium(u0, prod, 0.6, kDual1D);

    ComparisonResult less = comparison_monotonicity(phi, psi1, 1e-3);
    CHECK(less.conclusive);
    CHECK(less.holds);

    ComparisonResult nested = comparison_monotonicity(psi1, psi2, 1e-3);
    CHECK(nested.conclusive);
    CHECK(nested.holds);

    // Translation invariance: equal masses.
    PotentialGrid phi5 = phi;
    for (int i = 0; i < phi5.size(); ++i) phi5.at(i) += 5.0;
    ComparisonResult shift = comparison_monotonicity(phi, phi5, 1e-8);
    CHECK(shift.conclusive);
    CHECK(shift.holds);
    CHECK(std::abs(shift.mass_phi - shift.mass_phi_prime) <= 1e-8);

    // Sentinel phi with finite phi' is inconclusive.
    PotentialGrid sentinel =
        PotentialGrid::minus_infinity(kDual1D, GridRole::KahlerPotential);
    CHECK(!comparison_monotonicity(sentinel, phi, 1e-3).conclusive);
}

TEST_CASE("2D: conjugate, mass, and nested comparison") {
    const std::vector<Axis> box = {Axis{-3.0, 3.0, 121}, Axis{-3.0, 3.0, 121}};
    PotentialGrid quad = PotentialGrid::sample(
        box, GridRole::KahlerPotential, [](const std::vector<double>& y) {
            return (y[0] * y[0] + y[1] * y[1]) / 2;
        });
    // Gradient image [-3,3]^2, complex normalization doubles the area.
    CHECK(discrete_ma_mass(quad) == doctest::Approx(72.0).epsilon(0.05));

    // Equilibrium masses on the plane model decrease along nested slices.
    ToricConfig p2(standard_simplex2(), affine_g({Rat(1), Rat(0)}, Rat(0)));
    const std::vector<Axis> xaxes = moment_axes(p2.polytope(), 161);
    const std::vector<Axis> yaxes = {Axis{-9.0, 9.0, 161}, Axis{-9.0, 9.0, 161}};
    PotentialGrid phi2 = PotentialGrid::sample(
        yaxes, GridRole::KahlerPotential, [](const std::vector<double>& y) {
            return std::log(1.0 + std::exp(y[0]) + std::exp(y[1]));
        });
    PotentialGrid u0 = restrict_to_polytope(legendre(phi2, xaxes), p2.polytope());

    double prev_mass = kPlusInf;
    for (double lam : {0.0, 0.25, 0.5, 0.75}) {
        PotentialGrid psi = equilibrium(u0, p2, lam, yaxes);
        const double mass = discrete_ma_mass(psi);
        // n! * vol{x >= lam} = (1 - lam)^2 on the simplex.
        CHECK(mass == doctest::Approx((1 - lam) * (1 - lam)).epsilon(0.12));
        CHECK(mass <= prev_mass + 1e-3);
        prev_mass = mass;
    }
}

TEST_CASE("tangent vector law: the time derivative pushes MA to the DH measure") {
    PotentialGrid u0 = fs_grid(10001);
    ToricConfig prod = product_p1();
    GeodesicRay ray{u0, prod, kDual1D, 1.0, 64};
    PotentialGrid phi0 = build_ray(u0, prod, 0.0, kDual1D);
    PotentialGrid phi_eps = build_ray(u0, prod, ray.dt(), kDual1D);
    std::vector<double> mass = ma_node_masses_1d(phi0);
    DHMeasure dh = dh_measure(prod);

    double worst = 0;
    for (int q = 0; q <= 20; ++q) {
        const double lam = q / 20.0;
        double pushed = 0;
        for (int i = 0; i < phi0.size(); ++i)
            if ((phi_eps.at(i) - phi0.at(i)) / ray.dt() >= lam) pushed += mass[i];
        const double expected = to_double(dh.survival(Rat(q, 20)));
        worst = std::max(worst, std::abs(pushed - expected));
    }
    CHECK(worst <= 0.05);
}
