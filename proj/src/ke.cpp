#include "kstab/ke.hpp"

#include "kstab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kstab {

namespace {

double to_d(const Rat& r) { return to_double(r); }

// Exact |T|_p (or the sup norm) of a configuration.
double config_norm(const Config& cfg, PNorm p, bool* zero) {
    if (p.infinite) {
        const Rat n = norm_infinity(cfg);
        *zero = (n == 0);
        return to_d(n);
    }
    const NormTriple t = norms(cfg, p.value);
    *zero = (t.norm_p_pow == 0);
    return t.norm_p;
}

}  // namespace

double PNorm::conjugate() const {
    if (infinite) return 1.0;
    if (value == 1) return kPlusInf;
    return static_cast<double>(value) / (value - 1);
}

std::string PNorm::label() const { return infinite ? "inf" : std::to_string(value); }

// ---------------------------------------------------------------------------
// FanoModel

FanoModel::FanoModel(Polytope anticanonical, std::vector<std::vector<double>> metric_coeffs)
    : polytope_(std::move(anticanonical)), coeffs_(std::move(metric_coeffs)) {
    // Reflexivity: canonical facet normals are primitive integral, so the
    // polytope is reflexive iff every facet offset is 1 (the origin is the
    // unique interior lattice point).
    for (const Halfspace& h : polytope_.halfspaces())
        if (h.offset != 1)
            throw std::invalid_argument("anticanonical polytope must be reflexive");
    lattice_ = enumerate_lattice_points(polytope_, 1);
    if (coeffs_.empty()) throw std::invalid_argument("at least one metric sample needed");
    for (const std::vector<double>& c : coeffs_) {
        if (c.size() != lattice_.size())
            throw std::invalid_argument("metric coefficient count must match the lattice");
        for (double v : c)
            if (!(v > 0)) throw std::invalid_argument("metric coefficients must be positive");
    }
}

double FanoModel::potential(int metric, const std::vector<double>& y) const {
    const std::vector<double>& c = coeffs_[metric];
    double top = kMinusInf;
    for (std::size_t i = 0; i < lattice_.size(); ++i) {
        double e = std::log(c[i]);
        for (std::size_t d = 0; d < y.size(); ++d) e += lattice_[i][d] * y[d];
        top = std::max(top, e);
    }
    double s = 0;
    for (std::size_t i = 0; i < lattice_.size(); ++i) {
        double e = std::log(c[i]);
        for (std::size_t d = 0; d < y.size(); ++d) e += lattice_[i][d] * y[d];
        s += std::exp(e - top);
    }
    return top + std::log(s);
}

std::vector<double> FanoModel::gradient(int metric, const std::vector<double>& y) const {
    const std::vector<double>& c = coeffs_[metric];
    const int n = dim();
    double top = kMinusInf;
    std::vector<double> weight(lattice_.size());
    for (std::size_t i = 0; i < lattice_.size(); ++i) {
        double e = std::log(c[i]);
        for (int d = 0; d < n; ++d) e += lattice_[i][d] * y[d];
        weight[i] = e;
        top = std::max(top, e);
    }
    double z = 0;
    for (double& w : weight) {
        w = std::exp(w - top);
        z += w;
    }
    std::vector<double> mean(n, 0.0);
    for (std::size_t i = 0; i < lattice_.size(); ++i)
        for (int d = 0; d < n; ++d) mean[d] += weight[i] * lattice_[i][d];
    for (double& m : mean) m /= z;
    return mean;
}

double FanoModel::ma_density(int metric, const std::vector<double>& y) const {
    const std::vector<double>& c = coeffs_[metric];
    const int n = dim();
    double top = kMinusInf;
    std::vector<double> weight(lattice_.size());
    for (std::size_t i = 0; i < lattice_.size(); ++i) {
        double e = std::log(c[i]);
        for (int d = 0; d < n; ++d) e += lattice_[i][d] * y[d];
        weight[i] = e;
        top = std::max(top, e);
    }
    double z = 0;
    for (double& w : weight) {
        w = std::exp(w - top);
        z += w;
    }
    std::vector<double> mean(n, 0.0);
    for (std::size_t i = 0; i < lattice_.size(); ++i)
        for (int d = 0; d < n; ++d) mean[d] += weight[i] * lattice_[i][d];
    for (double& m : mean) m /= z;
    // Covariance of the exponential family = Hessian of phi.
    double cxx = 0, cxy = 0, cyy = 0;
    for (std::size_t i = 0; i < lattice_.size(); ++i) {
        const double p = weight[i] / z;
        const double dx = lattice_[i][0] - mean[0];
        cxx += p * dx * dx;
        if (n == 2) {
            const double dy = lattice_[i][1] - mean[1];
            cxy += p * dx * dy;
            cyy += p * dy * dy;
        }
    }
    return n == 1 ? cxx : cxx * cyy - cxy * cxy;
}

FanoModel make_fano_p1() {
    Polytope p = Polytope::from_halfspaces(1, {{{Rat(1)}, Rat(1)}, {{Rat(-1)}, Rat(1)}});
    // Lattice points -1, 0, 1; binomial coefficients give the round metric.
    return FanoModel(std::move(p),
                     {{1.0, 2.0, 1.0}, {1.0, 2.6, 1.0}, {1.5, 2.0, 1.0}});
}

FanoModel make_fano_blowup() {
    Polytope p = Polytope::from_halfspaces(2, {{{Rat(-1), Rat(0)}, Rat(1)},
                                               {{Rat(0), Rat(-1)}, Rat(1)},
                                               {{Rat(1), Rat(1)}, Rat(1)},
                                               {{Rat(-1), Rat(-1)}, Rat(1)}});
    std::vector<LatticePoint> pts = enumerate_lattice_points(p, 1);
    std::vector<std::vector<double>> metrics;
    metrics.push_back(std::vector<double>(pts.size(), 1.0));
    for (int variant = 1; variant < 5; ++variant) {
        std::vector<double> c;
        for (const LatticePoint& u : pts) {
            const double x = static_cast<double>(u[0]);
            const double y = static_cast<double>(u[1]);
            switch (variant) {
                case 1: c.push_back(u[0] == 0 && u[1] == 0 ? 3.0 : 1.0); break;
                case 2: c.push_back(std::exp(0.3 * x)); break;
                case 3: c.push_back(std::exp(0.25 * (x + y))); break;
                default: c.push_back(std::exp(-0.4 * x + 0.2 * y)); break;
            }
        }
        metrics.push_back(std::move(c));
    }
    return FanoModel(std::move(p), std::move(metrics));
}

// ---------------------------------------------------------------------------
// Density ratio and the Fano bound

RatioGrid density_ratio(const FanoModel& model, int metric, const std::vector<Axis>& axes,
                        double density_floor) {
    if (static_cast<int>(axes.size()) != model.dim())
        throw std::invalid_argument("axis count must match the model dimension");
    RatioGrid out;
    out.axes = axes;
    const std::size_t total = axes.size() == 1
                                  ? static_cast<std::size_t>(axes[0].n)
                                  : static_cast<std::size_t>(axes[0].n) * axes[1].n;
    out.ratio.resize(total);
    out.ma_density.resize(total);

    double cell = axes[0].step();
    if (axes.size() == 2) cell *= axes[1].step();

    std::vector<double> y(axes.size());
    double raw_mass = 0;
    std::vector<double> edens(total);
    for (std::size_t i = 0; i < total; ++i) {
        if (axes.size() == 1) {
            y[0] = axes[0].node(static_cast<int>(i));
        } else {
            y[0] = axes[0].node(static_cast<int>(i) / axes[1].n);
            y[1] = axes[1].node(static_cast<int>(i) % axes[1].n);
        }
        out.ma_density[i] = model.ma_density(metric, y);
        edens[i] = std::exp(-model.potential(metric, y));
        raw_mass += edens[i] * cell;
    }

    // Normalize e^{-phi} so its mass matches the exact MA mass vol(P).
    out.scale = to_d(model.polytope().volume()) / raw_mass;
    for (std::size_t i = 0; i < total; ++i)
        out.ratio[i] = out.ma_density[i] > density_floor
                           ? out.scale * edens[i] / out.ma_density[i]
                           : 1.0;
    return out;
}

FanoBound verify_fano_bound(const FanoModel& model, const Config& cfg, int metric,
                            PNorm p, const std::vector<Axis>& axes) {
    FanoBound out;
    const InvariantSet inv = fit_invariants(cfg);
    out.f1 = inv.F1;

    bool zero_norm = false;
    const double tnorm = config_norm(cfg, p, &zero_norm);
    if (zero_norm) {
        out.trivial_norm = true;
        return out;
    }
    out.rhs = to_d(inv.F1) / tnorm;

    RatioGrid grid = density_ratio(model, metric, axes);
    double cell = axes[0].step();
    if (axes.size() == 2) cell *= axes[1].step();
    const double q = p.conjugate();
    if (q == kPlusInf) {
        double sup = 0;
        for (std::size_t i = 0; i < grid.ratio.size(); ++i)
            if (grid.ma_density[i] > 1e-13)
                sup = std::max(sup, std::abs(grid.ratio[i] - 1.0));
        out.lhs = sup;
    } else {
        double acc = 0;
        for (std::size_t i = 0; i < grid.ratio.size(); ++i)
            acc += std::pow(std::abs(grid.ratio[i] - 1.0), q) * grid.ma_density[i] * cell;
        out.lhs = std::pow(acc, 1.0 / q);
    }
    out.holds = out.lhs >= out.rhs - 1e-9;
    return out;
}

// ---------------------------------------------------------------------------
// Scalar curvature on the line models

CalabiBound calabi_bound_1d(const FanoModel& model, const Config& cfg, int metric,
                            PNorm p, int nodes) {
    if (model.dim() != 1)
        throw std::invalid_argument("scalar-curvature bound implemented for 1D models");

    std::optional<ToricConfig> view = toric_view(cfg);
    if (!view) throw std::invalid_argument("configuration has no exact toric model");
    const InvariantSet inv = fit_invariants(cfg);

    // Moment-side grid over the configuration's polytope, trimmed so the
    // mean-value inverse stays in a bounded y-range.
    const Rat lo_r = view->polytope().vertices().front()[0];
    const Rat hi_r = view->polytope().vertices().back()[0];
    const double trim = 1e-4 * (to_d(hi_r) - to_d(lo_r));
    const Axis xs{to_d(lo_r) + trim, to_d(hi_r) - trim, nodes};

    // The model's moment interval may differ from the configuration's; map
    // the configuration interval onto it affinely for the curvature data.
    const Rat mlo = model.polytope().vertices().front()[0];
    const Rat mhi = model.polytope().vertices().back()[0];
    const double scale = (to_d(mhi) - to_d(mlo)) / (to_d(hi_r) - to_d(lo_r));

    // y(x): phi'(y) = x by bisection (phi' strictly increasing onto int P).
    auto inverse_gradient = [&](double x) {
        double lo = -80, hi = 80;
        for (int it = 0; it < 200; ++it) {
            const double mid = (lo + hi) / 2;
            if (model.gradient(metric, {mid})[0] < x)
                lo = mid;
            else
                hi = mid;
        }
        return (lo + hi) / 2;
    };

    // F(x) = 1/u''(x) = phi''(y(x)); S = -2 F''.
    std::vector<double> bigF(xs.n), curvature(xs.n, 0.0);
    for (int i = 0; i < xs.n; ++i) {
        const double xm = to_d(mlo) + (xs.node(i) - xs.lo + trim) * scale;
        bigF[i] = model.ma_density(metric, {inverse_gradient(xm)});
    }
    const double hm = xs.step() * scale;
    for (int i = 1; i + 1 < xs.n; ++i)
        curvature[i] = -2.0 * (bigF[i + 1] - 2 * bigF[i] + bigF[i - 1]) / (hm * hm);
    curvature[0] = curvature[1];
    curvature[xs.n - 1] = curvature[xs.n - 2];

    // Mean against the pushed-forward MA measure, which is Lebesgue on P.
    const double h = xs.step();
    double mean = 0, len = 0;
    for (int i = 0; i < xs.n; ++i) {
        mean += curvature[i] * h;
        len += h;
    }
    mean /= len;

    const double q = p.conjugate();
    auto lq_norm = [&](const std::vector<double>& f) {
        if (q == kPlusInf) {
            double sup = 0;
            for (double v : f) sup = std::max(sup, std::abs(v));
            return sup;
        }
        double acc = 0;
        for (double v : f) acc += std::pow(std::abs(v), q) * h;
        return std::pow(acc, 1.0 / q);
    };

    std::vector<double> s_centered(xs.n), g_centered(xs.n);
    for (int i = 0; i < xs.n; ++i) {
        s_centered[i] = curvature[i] - mean;
        g_centered[i] = view->g().value(std::vector<double>{xs.node(i)}) - to_d(inv.F0);
    }

    CalabiBound out;
    out.f1 = inv.F1;

    bool zero_norm = false;
    const double gnorm_p = config_norm(cfg, p, &zero_norm);
    out.holder_lhs = gnorm_p * lq_norm(s_centered);
    double pairing = 0;
    for (int i = 0; i < xs.n; ++i) pairing += g_centered[i] * s_centered[i] * h;
    out.holder_rhs = pairing;
    out.holder_holds = out.holder_lhs >= out.holder_rhs - 1e-9;

    out.bound_lhs = gnorm_p * lq_norm(s_centered);
    out.bound_holds = out.bound_lhs >= to_d(inv.F1) - 1e-9;
    out.convexity_margin = pairing - to_d(inv.F1);
    return out;
}

}  // namespace kstab
