#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kstab/ke.hpp"
#include "kstab/spectra.hpp"
#include "support.hpp"

#include <cmath>

using namespace kstab;
using namespace kstab::testsupport;

namespace {

const std::vector<Axis> kAxis1D = {Axis{-16.0, 16.0, 4001}};

std::vector<Axis> blowup_axes(int n = 241) {
    return {Axis{-12.0, 12.0, n}, Axis{-12.0, 12.0, n}};
}

Config dp8_product() {
    return ToricConfig(blowup_polytope(), affine_g({Rat(1), Rat(1)}, Rat(0)));
}

std::vector<Config> p1_corpus() {
    return {product_p1(), trivial_p1(), roof_p1(), Config(normal_cone_p1())};
}

}  // namespace

TEST_CASE("model validation") {
    CHECK_NOTHROW(make_fano_p1());
    CHECK_NOTHROW(make_fano_blowup());
    CHECK(make_fano_blowup().lattice().size() == 9);
    CHECK(make_fano_blowup().metric_count() == 5);

    // Non-reflexive polytope is rejected.
    CHECK_THROWS_AS(FanoModel(interval(0, 1), {{1.0, 1.0}}), std::invalid_argument);
    // Coefficient count mismatch and nonpositive coefficients are rejected.
    Polytope p = interval(-1, 1);
    CHECK_THROWS_AS(FanoModel(p, {{1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(FanoModel(p, {{1.0, 0.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("round metric on the line model is Einstein: ratio is one") {
    FanoModel model = make_fano_p1();
    RatioGrid grid = density_ratio(model, 0, kAxis1D);
    double worst = 0;
    for (std::size_t i = 0; i < grid.ratio.size(); ++i)
        if (grid.ma_density[i] > 1e-9)
            worst = std::max(worst, std::abs(grid.ratio[i] - 1.0));
    CHECK(worst <= 1e-3);

    // Normalization: the scaled density integrates to the exact MA mass.
    double mass = 0;
    std::vector<double> y(1);
    for (int i = 0; i < kAxis1D[0].n; ++i) {
        y[0] = kAxis1D[0].node(i);
        mass += grid.scale * std::exp(-model.potential(0, y)) * kAxis1D[0].step();
    }
    CHECK(std::abs(mass - to_double(model.polytope().volume())) <= 1e-9);
}

TEST_CASE("perturbed metrics are not Einstein") {
    FanoModel model = make_fano_p1();
    for (int metric = 1; metric < model.metric_count(); ++metric) {
        RatioGrid grid = density_ratio(model, metric, kAxis1D);
        double dev = 0;
        for (std::size_t i = 0; i < grid.ratio.size(); ++i)
            if (grid.ma_density[i] > 1e-9)
                dev = std::max(dev, std::abs(grid.ratio[i] - 1.0));
        CHECK(dev > 1e-2);
    }
}

TEST_CASE("fano bound on the line model: trivial sign case") {
    FanoModel model = make_fano_p1();
    for (const Config& cfg : p1_corpus()) {
        for (PNorm p : {PNorm::of(1), PNorm::of(2), PNorm::of(4), PNorm::infinity()}) {
            for (int metric = 0; metric < model.metric_count(); ++metric) {
                FanoBound b = verify_fano_bound(model, cfg, metric, p, kAxis1D);
                if (b.trivial_norm) {
                    CHECK(std::get_if<ToricConfig>(&cfg) != nullptr);
                    continue;
                }
                CHECK(b.f1 <= 0);  // the line model is stable
                CHECK(b.rhs <= 0);
                CHECK(b.holds);
            }
        }
    }
}

TEST_CASE("fano bound on the blow-up model is nontrivial and holds") {
    FanoModel model = make_fano_blowup();
    Config cfg = dp8_product();
    for (PNorm p : {PNorm::of(1), PNorm::of(2), PNorm::of(4), PNorm::infinity()}) {
        for (int metric = 0; metric < model.metric_count(); ++metric) {
            FanoBound b = verify_fano_bound(model, cfg, metric, p, blowup_axes());
            CHECK(!b.trivial_norm);
            CHECK(b.f1 == Rat(1, 12));
            CHECK(b.rhs > 0);  // destabilizing direction: the bound has teeth
            CHECK(b.holds);
            CHECK(b.lhs >= b.rhs);
        }
    }
}

TEST_CASE("trivial configuration skips the bound with the zero-norm diagnosis") {
    FanoBound b = verify_fano_bound(make_fano_p1(), trivial_p1(), 0, PNorm::of(2), kAxis1D);
    CHECK(b.trivial_norm);
}

TEST_CASE("scalar curvature of the round metric is the constant 2") {
    FanoModel model = make_fano_p1();
    CalabiBound b = calabi_bound_1d(model, product_p1(), 0, PNorm::of(2), 2001);
    // Constant curvature: the centred factor vanishes, both sides collapse.
    CHECK(b.holder_lhs <= 1e-4);
    CHECK(std::abs(b.holder_rhs) <= 1e-4);
    CHECK(b.holder_holds);
    CHECK(b.bound_holds);  // 0 >= F1 for the stable line model
    CHECK(b.f1 == 0);
}

TEST_CASE("calabi bound on perturbed metrics") {
    FanoModel model = make_fano_p1();
    for (int metric = 0; metric < model.metric_count(); ++metric) {
        for (const Config& cfg : p1_corpus()) {
            if (!strong_stability_ratio(cfg).defined) continue;  // zero norm
            for (PNorm p : {PNorm::of(1), PNorm::of(2), PNorm::of(4), PNorm::infinity()}) {
                CalabiBound b = calabi_bound_1d(model, cfg, metric, p, 2001);
                CHECK(b.holder_holds);
                CHECK(b.bound_holds);
                CHECK(std::isfinite(b.convexity_margin));
            }
        }
    }
}

TEST_CASE("hoelder pairing is sharp for proportional integrands") {
    // |f|_2 |g|_2 = <f, g> exactly when g = 2f; checked on raw sums.
    const int n = 1001;
    const double h = 1.0 / (n - 1);
    double norm_f = 0, norm_g = 0, pair = 0;
    for (int i = 0; i < n; ++i) {
        const double x = i * h;
        const double f = x - 0.5, g = 2 * (x - 0.5);
        norm_f += f * f * h;
        norm_g += g * g * h;
        pair += f * g * h;
    }
    CHECK(std::abs(std::sqrt(norm_f) * std::sqrt(norm_g) - pair) <= 1e-12);
}
