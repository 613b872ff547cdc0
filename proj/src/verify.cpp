#include "kstab/verify.hpp"

#include "kstab/geodesic.hpp"
#include "kstab/io.hpp"
#include "kstab/ke.hpp"
#include "kstab/spectra.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace kstab {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Accumulates sub-checks of a criterion; the first failure is reported.
struct Checker {
    bool pass = true;
    std::string first_failure;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            first_failure = what;
        }
    }
};

double fs_u0_value(double x) {
    auto xlogx = [](double v) { return v <= 0 ? 0.0 : v * std::log(v); };
    return xlogx(x) + xlogx(1.0 - x);
}

PotentialGrid fs_reference(int nodes) {
    return PotentialGrid::sample({Axis{0.0, 1.0, nodes}}, GridRole::SymplecticPotential,
                                 [](const std::vector<double>& x) { return fs_u0_value(x[0]); });
}

const CorpusEntry* find_entry(const std::vector<CorpusEntry>& corpus,
                              const std::string& name) {
    for (const CorpusEntry& e : corpus)
        if (e.name == name) return &e;
    return nullptr;
}

std::string rat_str(const Rat& r) { return rat_to_string(r); }

// --------------------------------------------------------------------------
// Criterion 1: b0 from the quasi-polynomial fit equals the Lebesgue-Stieltjes
// integral of the DH survival function, exactly; the corner-cut model pins
// b0 = F1 = -1/8.

CriterionResult criterion_exact_b0(const std::vector<CorpusEntry>& corpus) {
    const auto start = Clock::now();
    Checker ck;
    for (const CorpusEntry& e : corpus) {
        std::optional<ToricConfig> view = toric_view(e.config);
        ck.require(view.has_value(), e.name + ": no exact toric model");
        if (!view) continue;
        const InvariantSet inv = fit_invariants(e.config);
        const DHMeasure dh = dh_measure(*view);
        ck.require(dh.stieltjes_b0() == inv.b0,
                   e.name + ": stieltjes b0 " + rat_str(dh.stieltjes_b0()) +
                       " != fitted " + rat_str(inv.b0));
        ck.require(dh.moment(0) == factorial_rat(ambient_dim(e.config)) * inv.a0,
                   e.name + ": DH total mass mismatch");
    }
    if (const CorpusEntry* nc = find_entry(corpus, "normal_cone_p1")) {
        const InvariantSet inv = fit_invariants(nc->config);
        ck.require(inv.b0 == Rat(-1, 8), "normal_cone_p1: b0 != -1/8");
        ck.require(inv.F1 == Rat(-1, 8), "normal_cone_p1: F1 != -1/8");
    } else {
        ck.require(false, "normal_cone_p1 missing from the corpus");
    }
    return {"1-exact-invariants", ck.pass,
            ck.pass ? "b0 fit == -int lambda dV on all " +
                          std::to_string(corpus.size()) + " corpus configurations"
                    : ck.first_failure,
            elapsed(start)};
}

// --------------------------------------------------------------------------
// Criterion 2: Kolmogorov distance to the DH measure is non-increasing and
// bounded by C/k along doubling levels, C calibrated at the first level.

CriterionResult criterion_main2_convergence(const std::vector<CorpusEntry>& corpus,
                                            std::int64_t kmax) {
    const auto start = Clock::now();
    Checker ck;
    for (const std::string name : {"product_p1", "normal_cone_p1"}) {
        const CorpusEntry* e = find_entry(corpus, name);
        ck.require(e != nullptr, std::string(name) + " missing from the corpus");
        if (!e) continue;
        const std::int64_t m = period(e->config);
        const DHMeasure dh = dh_measure(*toric_view(e->config));
        Rat prev;
        Rat bound;  // C = k_0 * d_0
        bool first = true;
        for (std::int64_t base = 8; base <= kmax; base *= 2) {
            const std::int64_t k = base * m;
            const Rat d = cdf_distance(spectral_measure(e->config, k), dh).kolmogorov;
            if (first) {
                bound = d * k;
                first = false;
            } else {
                ck.require(d <= prev, name + ": distance increased at k=" +
                                          std::to_string(k));
                ck.require(d * k <= bound,
                           name + ": distance above C/k at k=" + std::to_string(k));
            }
            prev = d;
        }
    }
    const double secs = elapsed(start);
    ck.require(secs <= 10.0, "runtime exceeded 10 s");
    return {"2-spectral-convergence", ck.pass,
            ck.pass ? "kolmogorov distance <= C/k and monotone up to k=" +
                          std::to_string(kmax)
                    : ck.first_failure,
            secs};
}

// --------------------------------------------------------------------------
// Criterion 3: N2 = Q2 - b0^2/a0 exactly everywhere; the level-k moment sums
// converge at rate 1/k; product-line targets pinned.

CriterionResult criterion_main3_norms(const std::vector<CorpusEntry>& corpus) {
    const auto start = Clock::now();
    Checker ck;
    for (const CorpusEntry& e : corpus)
        ck.require(check_N2_identity(e.config), e.name + ": N2 identity failed");

    if (const CorpusEntry* prod = find_entry(corpus, "product_p1")) {
        const NormTriple n2 = norms(prod->config, 2);
        ck.require(n2.Qp == Rat(1, 3), "product_p1: Q2 != 1/3");
        ck.require(n2.Np == Rat(1, 12), "product_p1: N2 != 1/12");
        ck.require(n2.norm_p_pow == Rat(1, 12), "product_p1: |T|_2^2 != 1/12");
        ck.require(norm_infinity(prod->config) == Rat(1, 2),
                   "product_p1: |T|_inf != 1/2");
    } else {
        ck.require(false, "product_p1 missing from the corpus");
    }

    for (const CorpusEntry& e : corpus) {
        const std::int64_t m = period(e.config);
        for (int p = 1; p <= 4; ++p) {
            const Rat exact = norms(e.config, p).Qp;
            Rat cap;
            bool first = true;
            for (std::int64_t base = 8; base <= 64; base *= 2) {
                const std::int64_t k = base * m;
                const Rat err = rat_abs(level_moment_sum(e.config, p, k) - exact);
                if (first) {
                    cap = 2 * err * k;  // calibrated at the first level
                    first = false;
                } else {
                    ck.require(err * k <= cap, e.name + ": moment sum error above C/k (p=" +
                                                   std::to_string(p) + ", k=" +
                                                   std::to_string(k) + ")");
                }
            }
        }
    }
    return {"3-pnorm-identities", ck.pass,
            ck.pass ? "N2 identity exact; p-sweeps bounded by C/k for p=1..4"
                    : ck.first_failure,
            elapsed(start)};
}

// --------------------------------------------------------------------------
// Criterion 4: the trivial configuration has zero norm and a translation ray;
// every non-constant configuration has positive norm.

CriterionResult criterion_trivial_ray(const std::vector<CorpusEntry>& corpus, int nodes) {
    const auto start = Clock::now();
    Checker ck;
    const CorpusEntry* trivial = find_entry(corpus, "trivial");
    ck.require(trivial != nullptr, "trivial missing from the corpus");
    if (trivial) {
        const NormTriple n2 = norms(trivial->config, 2);
        ck.require(n2.norm_p_pow == 0, "trivial: |T|_2 != 0");

        const ToricConfig view = *toric_view(trivial->config);
        const InvariantSet inv = fit_invariants(trivial->config);
        const double f0 = to_double(inv.F0);
        PotentialGrid u0 = fs_reference(nodes);
        const std::vector<Axis> dual = {Axis{-8.0, 8.0, nodes}};
        PotentialGrid phi = build_ray(u0, view, 0.0, dual);
        for (double t : {0.5, 1.0}) {
            PotentialGrid phi_t = build_ray(u0, view, t, dual);
            double worst = 0;
            for (int i = 0; i < phi.size(); ++i)
                worst = std::max(worst, std::abs(phi_t.at(i) - phi.at(i) - f0 * t));
            ck.require(worst <= 1e-12, "trivial: ray deviates from phi + F0 t by " +
                                           format_double(worst));
        }
    }
    for (const CorpusEntry& e : corpus) {
        auto [l0, lc] = lambda_bounds(e.config);
        if (l0 == lc) continue;  // constant direction
        ck.require(norms(e.config, 2).norm_p_pow > 0, e.name + ": |T|_2 not positive");
    }
    return {"4-trivial-ray", ck.pass,
            ck.pass ? "zero norm iff constant direction; translation ray to round-off"
                    : ck.first_failure,
            elapsed(start)};
}

// --------------------------------------------------------------------------
// Criterion 5: the geodesic suite on the product line model.

CriterionResult criterion_geodesic_suite(const std::vector<CorpusEntry>& corpus,
                                         int nodes) {
    const auto start = Clock::now();
    Checker ck;
    const CorpusEntry* prod = find_entry(corpus, "product_p1");
    ck.require(prod != nullptr, "product_p1 missing from the corpus");
    std::ostringstream detail;
    if (prod) {
        const ToricConfig view = *toric_view(prod->config);
        PotentialGrid u0 = fs_reference(nodes);
        const std::vector<Axis> dual = {Axis{-8.0, 8.0, nodes}};

        GeodesicRay ray{u0, view, dual, 1.0, 64};
        const double r_fine = gradient_map_residual(ray, 1.0, 129);
        ck.require(r_fine <= 1e-2,
                   "gradient-map residual " + format_double(r_fine) + " > 1e-2");

        const int coarse_nodes = nodes / 2 + 1;
        GeodesicRay coarse{fs_reference(coarse_nodes), view,
                           {Axis{-8.0, 8.0, coarse_nodes}}, 1.0, 32};
        const double r_coarse = gradient_map_residual(coarse, 1.0, 65);
        ck.require(r_fine >= 0.375 * r_coarse && r_fine <= 0.625 * r_coarse,
                   "residual ratio " + format_double(r_fine / r_coarse) +
                       " outside halving band [0.375, 0.625]");

        MassIdentity mid = ma_mass_identity(u0, view, 0.5, dual);
        ck.require(mid.rhs == Rat(1, 2), "mass identity rhs != 1/2");
        ck.require(std::abs(mid.lhs - 0.5) <= 1e-2,
                   "mass identity lhs " + format_double(mid.lhs) + " off by > 1e-2");

        GeodesicRay energy_ray{u0, view, dual, 1.0, 32};
        SlopeFit fit = aubin_mabuchi_slope(energy_ray);
        ck.require(std::abs(fit.slope - 0.5) <= 1e-3,
                   "energy slope " + format_double(fit.slope) + " not 1/2 +- 1e-3");

        PotentialGrid phi = build_ray(u0, view, 0.0, dual);
        for (double lam : {0.25, 0.5, 0.75}) {
            PotentialGrid psi = equilibrium(u0, view, lam, dual);
            const double leak = maximality_leakage(psi, phi);
            ck.require(leak <= 1e-3, "maximality leakage " + format_double(leak) +
                                         " > 1e-3 at lambda=" + format_double(lam));
        }
        detail << "residual " << format_double(r_fine) << ", slope "
               << format_double(fit.slope) << ", mass gap "
               << format_double(std::abs(mid.lhs - 0.5));
    }
    const double secs = elapsed(start);
    ck.require(secs <= 60.0, "runtime exceeded 60 s");
    return {"5-geodesic-suite", ck.pass, ck.pass ? detail.str() : ck.first_failure, secs};
}

// --------------------------------------------------------------------------
// Criterion 6: comparison-theorem monotonicity of the equilibrium masses on a
// 20-point lambda grid, every corpus configuration.

CriterionResult criterion_comparison(const std::vector<CorpusEntry>& corpus, int nodes) {
    const auto start = Clock::now();
    Checker ck;
    for (const CorpusEntry& e : corpus) {
        std::optional<ToricConfig> view_opt = toric_view(e.config);
        ck.require(view_opt.has_value(), e.name + ": no exact toric model");
        if (!view_opt) continue;
        const ToricConfig& view = *view_opt;
        auto [l0r, lcr] = view.lambda_bounds();
        const double l0 = to_double(l0r), lc = to_double(lcr);
        const int dim = view.polytope().dim();

        const int moment_nodes = dim == 1 ? std::max(1001, nodes / 4) : 201;
        const int dual_nodes = dim == 1 ? std::max(1001, nodes / 4) : 201;
        std::vector<Axis> yaxes;
        for (int d = 0; d < dim; ++d) yaxes.push_back(Axis{-10.0, 10.0, dual_nodes});
        PotentialGrid u0 =
            reference_symplectic_potential(view.polytope(), moment_nodes, yaxes);

        std::vector<double> masses;
        for (int j = 0; j < 20; ++j) {
            const double lam = l0 == lc ? l0 : l0 + (lc - l0) * j / 19.0;
            masses.push_back(discrete_ma_mass(equilibrium(u0, view, lam, yaxes)));
        }
        for (std::size_t i = 0; i < masses.size(); ++i)
            for (std::size_t j = i + 1; j < masses.size(); ++j)
                ck.require(masses[j] <= masses[i] + 1e-3,
                           e.name + ": mass increased between lambda grid points " +
                               std::to_string(i) + " and " + std::to_string(j));
    }
    return {"6-comparison-monotonicity", ck.pass,
            ck.pass ? "equilibrium masses monotone within 1e-3 on all configurations"
                    : ck.first_failure,
            elapsed(start)};
}

// --------------------------------------------------------------------------
// Criterion 7: the Kahler-Einstein suite.

CriterionResult criterion_ke_suite(const std::vector<CorpusEntry>& corpus) {
    const auto start = Clock::now();
    Checker ck;
    const std::vector<PNorm> ps = {PNorm::of(1), PNorm::of(2), PNorm::of(4),
                                   PNorm::infinity()};

    // Line model: the round metric is Einstein and every bound holds.
    FanoModel p1 = make_fano_p1();
    const std::vector<Axis> axis1d = {Axis{-16.0, 16.0, 4001}};
    RatioGrid fs = density_ratio(p1, 0, axis1d);
    double worst = 0;
    for (std::size_t i = 0; i < fs.ratio.size(); ++i)
        if (fs.ma_density[i] > 1e-9) worst = std::max(worst, std::abs(fs.ratio[i] - 1.0));
    ck.require(worst <= 1e-3,
               "round-metric density ratio off by " + format_double(worst));

    for (const CorpusEntry& e : corpus) {
        if (ambient_dim(e.config) != 1) continue;
        for (PNorm p : ps) {
            for (int metric = 0; metric < p1.metric_count(); ++metric) {
                FanoBound b = verify_fano_bound(p1, e.config, metric, p, axis1d);
                if (b.trivial_norm) continue;  // zero-norm diagnosis: bound skipped
                ck.require(b.holds, e.name + ": line-model bound failed at p=" +
                                        p.label());
            }
        }
    }

    // Blow-up model: the destabilizing direction makes the bound nontrivial.
    FanoModel dp8 = make_fano_blowup();
    const std::vector<Axis> axes2d = {Axis{-12.0, 12.0, 241}, Axis{-12.0, 12.0, 241}};
    const CorpusEntry* dp8cfg = find_entry(corpus, "dp8_product");
    ck.require(dp8cfg != nullptr, "dp8_product missing from the corpus");
    double min_rhs = kPlusInf;
    if (dp8cfg) {
        for (PNorm p : ps) {
            for (int metric = 0; metric < dp8.metric_count(); ++metric) {
                FanoBound b = verify_fano_bound(dp8, dp8cfg->config, metric, p, axes2d);
                ck.require(!b.trivial_norm, "dp8_product: unexpected zero norm");
                ck.require(b.rhs > 0, "dp8_product: bound not nontrivial at p=" +
                                          p.label());
                ck.require(b.holds, "dp8_product: bound failed at p=" + p.label() +
                                        " metric " + std::to_string(metric));
                min_rhs = std::min(min_rhs, b.rhs);
            }
        }
    }
    for (const CorpusEntry& e : corpus) {
        if (ambient_dim(e.config) != 2) continue;
        for (PNorm p : ps) {
            for (int metric = 0; metric < dp8.metric_count(); ++metric) {
                FanoBound b = verify_fano_bound(dp8, e.config, metric, p, axes2d);
                if (b.trivial_norm) continue;
                ck.require(b.holds, e.name + ": blow-up-model bound failed at p=" +
                                        p.label());
            }
        }
    }
    const double secs = elapsed(start);
    ck.require(secs <= 120.0, "runtime exceeded 120 s");
    std::ostringstream detail;
    detail << "FS ratio gap " << format_double(worst) << ", min nontrivial rhs "
           << format_double(min_rhs);
    return {"7-ke-suite", ck.pass, ck.pass ? detail.str() : ck.first_failure, secs};
}

// --------------------------------------------------------------------------
// Criterion 8: Newton-region membership equals brute-force generator-product
// expansion on every flag corpus entry, powers up to four.

CriterionResult criterion_ideal_oracle(const std::vector<CorpusEntry>& corpus) {
    const auto start = Clock::now();
    Checker ck;
    int flags = 0;
    for (const CorpusEntry& e : corpus) {
        const auto* flag = std::get_if<FlagIdealConfig>(&e.config);
        if (!flag) continue;
        ++flags;
        for (const MonomialIdeal& ideal : flag->flag()) {
            const int n = ideal.nvars();
            std::int64_t box = 1;
            for (const Exponent& g : ideal.generators())
                for (std::int64_t v : g) box = std::max(box, v);
            box = 4 * box + 3;
            Exponent u(n, 0);
            for (std::int64_t m = 1; m <= 4; ++m) {
                std::int64_t mismatches = 0;
                std::function<void(int)> scan = [&](int coord) {
                    if (coord == n) {
                        if (ideal.newton_power_contains(u, m) !=
                            ideal.brute_force_power_contains(u, m))
                            ++mismatches;
                        return;
                    }
                    for (std::int64_t v = 0; v <= box; ++v) {
                        u[coord] = v;
                        scan(coord + 1);
                    }
                };
                scan(0);
                ck.require(mismatches == 0,
                           e.name + ": " + std::to_string(mismatches) +
                               " membership mismatches at power " + std::to_string(m));
            }
        }
    }
    ck.require(flags > 0, "no flag-ideal entries in the corpus");
    return {"8-ideal-oracle", ck.pass,
            ck.pass ? "Newton == generator-product membership on " +
                          std::to_string(flags) + " flag entries, powers <= 4"
                    : ck.first_failure,
            elapsed(start)};
}

}  // namespace

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
    std::vector<CorpusEntry> out;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        ConfigDocument doc = parse_config_file(path.string());
        out.push_back({path.stem().string(), doc.to_config()});
    }
    if (out.empty()) throw std::runtime_error("no corpus documents in " + dir);
    return out;
}

std::vector<CriterionResult> run_verify(const std::string& suite,
                                        const VerifyOptions& options) {
    const std::vector<CorpusEntry> corpus = load_corpus(options.corpus_dir);
    std::vector<CriterionResult> results;
    const bool all = suite == "all";
    if (all || suite == "exact") {
        results.push_back(criterion_exact_b0(corpus));
        results.push_back(criterion_main2_convergence(corpus, options.kmax));
        results.push_back(criterion_main3_norms(corpus));
        results.push_back(criterion_ideal_oracle(corpus));
    }
    if (all || suite == "geodesic") {
        results.push_back(criterion_trivial_ray(corpus, options.nodes));
        results.push_back(criterion_geodesic_suite(corpus, options.nodes));
        results.push_back(criterion_comparison(corpus, options.nodes));
    }
    if (all || suite == "ke") {
        results.push_back(criterion_ke_suite(corpus));
    }
    if (results.empty())
        throw std::invalid_argument("unknown suite: " + suite +
                                    " (expected exact, geodesic, ke or all)");
    std::sort(results.begin(), results.end(),
              [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
    return results;
}

}  // namespace kstab
