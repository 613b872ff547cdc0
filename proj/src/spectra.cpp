#include "kstab/spectra.hpp"

#include "kstab/pl_function.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace kstab {

namespace {

Rat int_pow(const Rat& x, int p) {
    Rat v = 1;
    for (int i = 0; i < p; ++i) v *= x;
    return v;
}

Rat eval_poly(const std::vector<Rat>& coeffs, const Rat& x) {
    Rat v = 0;
    for (const Rat& c : coeffs) v = v * x + c;
    return v;
}

// Interpolates the polynomial of degree `deg` through (ks[i], values[i]),
// i = 0..deg, exactly; verifies the remaining points and throws
// InterpolationError on mismatch. Returns coefficients in descending degree.
std::vector<Rat> interpolate_polynomial(const std::vector<Rat>& ks,
                                        const std::vector<Rat>& values, int deg,
                                        const std::string& what) {
    RatMat a;
    RatVec b;
    for (int i = 0; i <= deg; ++i) {
        RatVec row;
        Rat pw = 1;
        for (int d = 0; d <= deg; ++d) {
            row.push_back(pw);
            pw *= ks[i];
        }
        std::reverse(row.begin(), row.end());
        a.push_back(std::move(row));
        b.push_back(values[i]);
    }
    std::optional<RatVec> coeffs = solve_linear(std::move(a), std::move(b));
    if (!coeffs) throw std::logic_error("interpolation system singular");
    for (std::size_t i = deg + 1; i < ks.size(); ++i) {
        const Rat residual = eval_poly(*coeffs, ks[i]) - values[i];
        if (residual != 0)
            throw InterpolationError(what + " is not polynomial on the period progression",
                                     residual);
    }
    return *coeffs;
}

}  // namespace

Rat factorial_rat(int n) {
    Rat f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// ---------------------------------------------------------------------------
// SpectralMeasure

Rat SpectralMeasure::total_mass() const {
    Rat m = 0;
    for (const auto& [pos, mass] : atoms) m += mass;
    return m;
}

Rat SpectralMeasure::survival(const Rat& x) const {
    Rat m = 0;
    for (const auto& [pos, mass] : atoms)
        if (pos >= x) m += mass;
    return m;
}

Rat SpectralMeasure::survival_right(const Rat& x) const {
    Rat m = 0;
    for (const auto& [pos, mass] : atoms)
        if (pos > x) m += mass;
    return m;
}

SpectralMeasure spectral_measure(const Config& cfg, std::int64_t k) {
    FiltrationTable table = dims_by_weight(cfg, k);
    const int n = table.ambient_dim();
    SpectralMeasure mu;
    mu.level = k;
    mu.ambient_dim = n;
    const Rat scale = factorial_rat(n) / int_pow(Rat(k), n);
    for (const auto& [w, d] : table.entries())
        mu.atoms.emplace_back(Rat(w, k), scale * d);
    return mu;
}

// ---------------------------------------------------------------------------
// DHMeasure

Rat DHMeasure::survival(const Rat& x) const {
    if (x <= breakpoints_.front()) return full_mass_;
    if (x > breakpoints_.back()) return 0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        if (x <= breakpoints_[i + 1]) return eval_poly(pieces_[i], x);
    return 0;
}

Rat DHMeasure::survival_right(const Rat& x) const {
    if (x < breakpoints_.front()) return full_mass_;
    if (x >= breakpoints_.back()) return 0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        if (x < breakpoints_[i + 1]) return eval_poly(pieces_[i], x);
    return 0;
}

Rat DHMeasure::moment(int p) const {
    Rat total = 0;
    // Absolutely continuous part: -int lambda^p V'(lambda) d lambda per piece.
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const std::vector<Rat>& piece = pieces_[i];
        const int deg = static_cast<int>(piece.size()) - 1;
        const Rat lo = breakpoints_[i], hi = breakpoints_[i + 1];
        Rat integral = 0;
        for (int d = deg; d >= 1; --d) {
            const Rat cd = piece[deg - d];  // coefficient of lambda^d
            integral += Rat(d) * cd / (d + p) * (int_pow(hi, d + p) - int_pow(lo, d + p));
        }
        total -= integral;
    }
    for (const auto& [pos, mass] : atoms_) total += int_pow(pos, p) * mass;
    return total;
}

Rat DHMeasure::stieltjes_b0() const { return moment(1) / factorial_rat(ambient_dim_); }

DHMeasure dh_measure(const ToricConfig& cfg) {
    const Polytope& p = cfg.polytope();
    const PLConcave& g = cfg.g();
    const int n = p.dim();
    const Rat nfact = factorial_rat(n);

    // Critical values of g: its values at the cell-decomposition vertices.
    std::set<Rat> crit_set;
    for (const RatVec& v : cell_vertices(g, p)) crit_set.insert(g.value(v));
    std::vector<Rat> crit(crit_set.begin(), crit_set.end());

    auto slice = [&](const Rat& lam) -> Rat {
        std::optional<Polytope> region = superlevel_region(g, p, lam);
        return region ? nfact * region->volume() : Rat(0);
    };

    DHMeasure dh;
    dh.ambient_dim_ = n;
    dh.full_mass_ = nfact * p.volume();
    dh.breakpoints_ = crit;

    if (crit.size() == 1) {
        // Constant g: a single atom carrying the whole mass.
        dh.atoms_.emplace_back(crit[0], dh.full_mass_);
        return dh;
    }

    for (std::size_t i = 0; i + 1 < crit.size(); ++i) {
        // On (crit_i, crit_{i+1}] the slice volume is a polynomial of degree
        // <= n; interpolate from n+1 interior samples.
        const Rat lo = crit[i], hi = crit[i + 1];
        std::vector<Rat> ks, values;
        for (int j = 0; j <= n; ++j) {
            const Rat t = lo + (hi - lo) * Rat(j + 1, n + 2);
            ks.push_back(t);
            values.push_back(slice(t));
        }
        std::vector<Rat> piece = interpolate_polynomial(ks, values, n, "slice volume");
        // Left-continuity pin: the piece must reproduce the closed slice at
        // the right endpoint.
        if (eval_poly(piece, hi) != slice(hi))
            throw std::logic_error("slice polynomial misses the closed slice volume");
        dh.pieces_.push_back(std::move(piece));
    }

    // Atoms where the survival function jumps.
    for (std::size_t i = 0; i < crit.size(); ++i) {
        const Rat left = i == 0 ? dh.full_mass_ : eval_poly(dh.pieces_[i - 1], crit[i]);
        const Rat right =
            i + 1 < crit.size() ? eval_poly(dh.pieces_[i], crit[i]) : Rat(0);
        const Rat jump = left - right;
        if (jump < 0) throw std::logic_error("survival function increased at a breakpoint");
        if (jump > 0) dh.atoms_.emplace_back(crit[i], jump);
    }
    return dh;
}

// ---------------------------------------------------------------------------
// Invariants

InvariantSet make_invariant_set(Rat a0, Rat a1, Rat b0, Rat b1) {
    InvariantSet s;
    s.a0 = std::move(a0);
    s.a1 = std::move(a1);
    s.b0 = std::move(b0);
    s.b1 = std::move(b1);
    s.F0 = s.b0 / s.a0;
    s.F1 = (s.a0 * s.b1 - s.a1 * s.b0) / (s.a0 * s.a0);
    return s;
}

std::int64_t hilbert_dim(const Config& cfg, std::int64_t k) {
    return dims_by_weight(cfg, k).hilbert_dim();
}

Int total_weight(const Config& cfg, std::int64_t k) {
    return dims_by_weight(cfg, k).total_weight();
}

InvariantSet fit_invariants(const Config& cfg) { return fit_invariants(cfg, period(cfg)); }

InvariantSet fit_invariants(const Config& cfg, std::int64_t m) {
    const int n = ambient_dim(cfg);
    std::vector<Rat> ks, nks, wks;
    for (int i = 1; i <= n + 3; ++i) {
        const std::int64_t k = m * i;
        FiltrationTable t = dims_by_weight(cfg, k);
        ks.push_back(Rat(k));
        nks.push_back(Rat(t.hilbert_dim()));
        wks.push_back(Rat(t.total_weight()));
    }
    std::vector<Rat> ncoeffs = interpolate_polynomial(ks, nks, n, "N_k");
    std::vector<Rat> wcoeffs = interpolate_polynomial(ks, wks, n + 1, "w(k)");
    return make_invariant_set(ncoeffs[0], ncoeffs[1], wcoeffs[0], wcoeffs[1]);
}

Rat algebraic_Qp(const Config& cfg, int p) {
    const int n = ambient_dim(cfg);
    const std::int64_t m = period(cfg);
    const int deg = n + p;
    std::vector<Rat> ks, values;
    for (int i = 1; i <= deg + 2; ++i) {
        const std::int64_t k = m * i;
        ks.push_back(Rat(k));
        values.push_back(Rat(dims_by_weight(cfg, k).moment_sum(p)));
    }
    return interpolate_polynomial(ks, values, deg, "weight moment sum")[0];
}

Rat level_moment_sum(const Config& cfg, int p, std::int64_t k) {
    FiltrationTable t = dims_by_weight(cfg, k);
    return Rat(t.moment_sum(p)) / int_pow(Rat(k), t.ambient_dim() + p);
}

// ---------------------------------------------------------------------------
// Distances

DistanceReport cdf_distance(const SpectralMeasure& mu, const DHMeasure& nu) {
    if (mu.ambient_dim != nu.ambient_dim())
        throw std::invalid_argument("measures carry different ambient normalizations");
    std::set<Rat> xset;
    for (const auto& [pos, mass] : mu.atoms) xset.insert(pos);
    for (const Rat& b : nu.breakpoints()) xset.insert(b);
    std::vector<Rat> xs(xset.begin(), xset.end());

    Rat sup = rat_abs(mu.total_mass() - nu.full_mass());  // left of all support
    for (const Rat& x : xs) {
        sup = std::max(sup, rat_abs(mu.survival(x) - nu.survival(x)));
        sup = std::max(sup, rat_abs(mu.survival_right(x) - nu.survival_right(x)));
    }

    // L1 over the joint support hull: the spectral survival is constant on
    // each gap, so integrate |const - V| by fine rational sampling (float64
    // accumulation; reporting-grade only).
    double l1 = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const Rat mid_mass = mu.survival_right(xs[i]);
        const int steps = 64;
        const Rat width = xs[i + 1] - xs[i];
        for (int s = 0; s < steps; ++s) {
            const Rat t = xs[i] + width * Rat(2 * s + 1, 2 * steps);
            l1 += to_double(rat_abs(mid_mass - nu.survival(t))) * to_double(width) / steps;
        }
    }
    return {sup, l1};
}

Rat kolmogorov_distance(const SpectralMeasure& mu, const SpectralMeasure& nu) {
    std::set<Rat> xs;
    for (const auto& [pos, mass] : mu.atoms) xs.insert(pos);
    for (const auto& [pos, mass] : nu.atoms) xs.insert(pos);
    Rat sup = 0;
    for (const Rat& x : xs) {
        sup = std::max(sup, rat_abs(mu.survival(x) - nu.survival(x)));
        sup = std::max(sup, rat_abs(mu.survival_right(x) - nu.survival_right(x)));
    }
    return sup;
}

// ---------------------------------------------------------------------------
// Norms

NormTriple norms(const Config& cfg, int p) {
    if (p < 1) throw std::invalid_argument("p must be >= 1 (use hilbert_dim for p = 0)");
    std::optional<ToricConfig> view = toric_view(cfg);
    if (!view)
        throw std::invalid_argument("no exact toric model; use level_moment_sum instead");
    const InvariantSet inv = fit_invariants(cfg);
    NormTriple out;
    out.Qp = integrate_pl_power(view->g(), view->polytope(), p, Rat(0), false);
    out.Np = integrate_pl_power(view->g(), view->polytope(), p, inv.F0, false);
    out.norm_p_pow = integrate_pl_power(view->g(), view->polytope(), p, inv.F0, true);
    out.norm_p = std::pow(to_double(out.norm_p_pow), 1.0 / p);
    return out;
}

Rat norm_infinity(const Config& cfg) {
    std::optional<ToricConfig> view = toric_view(cfg);
    if (!view) throw std::invalid_argument("no exact toric model for the sup norm");
    const InvariantSet inv = fit_invariants(cfg);
    Rat best = 0;
    for (const RatVec& v : cell_vertices(view->g(), view->polytope()))
        best = std::max(best, rat_abs(view->g().value(v) - inv.F0));
    return best;
}

bool check_N2_identity(const Config& cfg) {
    const InvariantSet inv = fit_invariants(cfg);
    const Rat rhs = algebraic_Qp(cfg, 2) - inv.b0 * inv.b0 / inv.a0;
    if (std::optional<ToricConfig> view = toric_view(cfg)) {
        const Rat n2 = integrate_pl_power(view->g(), view->polytope(), 2, inv.F0, false);
        return n2 == rhs;
    }
    // Interpolation route: N2 is the leading coefficient of
    // (sum lambda^2 dim) * N_k - w(k)^2, divided by a0.
    const int n = ambient_dim(cfg);
    const std::int64_t m = period(cfg);
    const int deg = 2 * n + 2;
    std::vector<Rat> ks, values;
    for (int i = 1; i <= deg + 2; ++i) {
        const std::int64_t k = m * i;
        FiltrationTable t = dims_by_weight(cfg, k);
        ks.push_back(Rat(k));
        values.push_back(Rat(t.moment_sum(2)) * t.hilbert_dim() -
                         Rat(t.total_weight()) * Rat(t.total_weight()));
    }
    const Rat lead = interpolate_polynomial(ks, values, deg, "centred second moment")[0];
    return lead / inv.a0 == rhs;
}

StabilityRatio strong_stability_ratio(const Config& cfg) {
    const InvariantSet inv = fit_invariants(cfg);
    StabilityRatio out;
    std::optional<ToricConfig> view = toric_view(cfg);
    const Rat n2 = view
                       ? integrate_pl_power(view->g(), view->polytope(), 2, inv.F0, false)
                       : algebraic_Qp(cfg, 2) - inv.b0 * inv.b0 / inv.a0;
    if (n2 == 0) {
        out.defined = false;
        out.diagnosis = "norm is zero: the ray is phi + F0*t";
        return out;
    }
    out.defined = true;
    out.ratio_squared = inv.F1 * inv.F1 / n2;
    out.ratio = -to_double(inv.F1) / std::sqrt(to_double(n2));
    return out;
}

}  // namespace kstab
