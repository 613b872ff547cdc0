#include "kstab/geodesic.hpp"

#include "kstab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kstab {

namespace {

double to_d(const Rat& r) { return to_double(r); }

GridRole flipped(GridRole role) {
    return role == GridRole::SymplecticPotential ? GridRole::KahlerPotential
                                                 : GridRole::SymplecticPotential;
}

// One-dimensional conjugate max_j (xs[j]*y - f[j]) for every y of the dual
// axis: lower convex hull of the finite graph points, then a monotone merge
// scan. Returns values and the argmax node index per output.
struct Conj1DResult {
    std::vector<double> value;
    std::vector<int> argmax;
};

Conj1DResult conjugate_1d(const Axis& primal, const std::vector<double>& f,
                          const Axis& dual) {
    std::vector<int> hull;
    auto slope_pop = [&](int a, int b, int c) {
        // Pop b when slope(a,b) >= slope(b,c): b lies on or above chord a-c.
        return (f[b] - f[a]) * (primal.node(c) - primal.node(b)) >=
               (f[c] - f[b]) * (primal.node(b) - primal.node(a));
    };
    for (int i = 0; i < primal.n; ++i) {
        if (f[i] == kPlusInf) continue;
        if (f[i] == kMinusInf)
            throw std::invalid_argument("conjugand carries the -infinity sentinel");
        while (hull.size() >= 2 &&
               slope_pop(hull[hull.size() - 2], hull.back(), i))
            hull.pop_back();
        hull.push_back(i);
    }
    if (hull.empty()) throw std::invalid_argument("empty effective domain");

    Conj1DResult out;
    out.value.resize(dual.n);
    out.argmax.resize(dual.n);
    std::size_t j = 0;
    for (int yi = 0; yi < dual.n; ++yi) {
        const double y = dual.node(yi);
        auto score = [&](std::size_t h) { return primal.node(hull[h]) * y - f[hull[h]]; };
        while (j + 1 < hull.size() && score(j + 1) >= score(j)) ++j;
        out.value[yi] = score(j);
        out.argmax[yi] = hull[j];
    }
    return out;
}

struct ConjResult {
    std::vector<double> value;            // flat on the dual axes
    std::vector<std::array<int, 2>> arg;  // argmax node indices (second = -1 in 1D)
};

ConjResult conjugate(const PotentialGrid& f, const std::vector<Axis>& dual) {
    ConjResult out;
    if (f.dim() == 1) {
        Conj1DResult r = conjugate_1d(f.axis(0), f.values(), dual[0]);
        out.value = std::move(r.value);
        out.arg.resize(dual[0].n);
        for (int i = 0; i < dual[0].n; ++i) out.arg[i] = {r.argmax[i], -1};
        return out;
    }

    const Axis& a0 = f.axis(0);
    const Axis& a1 = f.axis(1);
    const Axis& b0 = dual[0];
    const Axis& b1 = dual[1];

    // Stage 1: conjugate in the first coordinate for every fixed x1 column:
    // h(y0, i1) = max_{x0} (x0*y0 - f(x0, x1)).
    std::vector<double> h(static_cast<std::size_t>(b0.n) * a1.n, kMinusInf);
    std::vector<int> harg(static_cast<std::size_t>(b0.n) * a1.n, -1);
    std::vector<double> column(a0.n);
    for (int i1 = 0; i1 < a1.n; ++i1) {
        bool any_finite = false;
        for (int i0 = 0; i0 < a0.n; ++i0) {
            column[i0] = f.at(i0 * a1.n + i1);
            if (column[i0] != kPlusInf) any_finite = true;
        }
        if (!any_finite) continue;  // whole column excluded
        Conj1DResult r = conjugate_1d(a0, column, b0);
        for (int y0 = 0; y0 < b0.n; ++y0) {
            h[static_cast<std::size_t>(y0) * a1.n + i1] = r.value[y0];
            harg[static_cast<std::size_t>(y0) * a1.n + i1] = r.argmax[y0];
        }
    }

    // Stage 2: per y0 row, conjugate in the second coordinate:
    // f*(y0, y1) = max_{x1} (x1*y1 + h(y0, x1)) = conjugate of -h.
    out.value.assign(static_cast<std::size_t>(b0.n) * b1.n, kMinusInf);
    out.arg.assign(static_cast<std::size_t>(b0.n) * b1.n, {-1, -1});
    std::vector<double> negh(a1.n);
    bool any = false;
    for (int y0 = 0; y0 < b0.n; ++y0) {
        bool row_finite = false;
        for (int i1 = 0; i1 < a1.n; ++i1) {
            const double v = h[static_cast<std::size_t>(y0) * a1.n + i1];
            negh[i1] = (v == kMinusInf) ? kPlusInf : -v;
            if (v != kMinusInf) row_finite = true;
        }
        if (!row_finite) continue;
        Conj1DResult r = conjugate_1d(a1, negh, b1);
        for (int y1 = 0; y1 < b1.n; ++y1) {
            const int i1 = r.argmax[y1];
            out.value[static_cast<std::size_t>(y0) * b1.n + y1] = r.value[y1];
            out.arg[static_cast<std::size_t>(y0) * b1.n + y1] = {
                harg[static_cast<std::size_t>(y0) * a1.n + i1], i1};
        }
        any = true;
    }
    if (!any) throw std::invalid_argument("empty effective domain");
    return out;
}

std::vector<Axis> axes_of(const PotentialGrid& g) {
    std::vector<Axis> axes = {g.axis(0)};
    if (g.dim() == 2) axes.push_back(g.axis(1));
    return axes;
}

// Forward-difference slope range along one axis over the finite nodes; sizes
// the dual box for the mass measurement.
std::pair<double, double> slope_range(const PotentialGrid& g, int axis) {
    double lo = kPlusInf, hi = kMinusInf;
    auto consider = [&](double a, double b, double h) {
        if (!std::isfinite(a) || !std::isfinite(b)) return;
        const double s = (b - a) / h;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    };
    if (g.dim() == 1) {
        for (int i = 0; i + 1 < g.axis(0).n; ++i)
            consider(g.at(i), g.at(i + 1), g.axis(0).step());
        return {lo, hi};
    }
    const int n0 = g.axis(0).n, n1 = g.axis(1).n;
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1) {
            if (axis == 0 && i0 + 1 < n0)
                consider(g.at(i0, i1), g.at(i0 + 1, i1), g.axis(0).step());
            if (axis == 1 && i1 + 1 < n1)
                consider(g.at(i0, i1), g.at(i0, i1 + 1), g.axis(1).step());
        }
    return {lo, hi};
}

std::vector<double> g_samples(const PLConcave& g, const std::vector<Axis>& axes) {
    std::vector<double> out;
    if (axes.size() == 1) {
        out.resize(axes[0].n);
        for (int i = 0; i < axes[0].n; ++i)
            out[i] = g.value(std::vector<double>{axes[0].node(i)});
    } else {
        out.resize(static_cast<std::size_t>(axes[0].n) * axes[1].n);
        for (int i0 = 0; i0 < axes[0].n; ++i0)
            for (int i1 = 0; i1 < axes[1].n; ++i1)
                out[static_cast<std::size_t>(i0) * axes[1].n + i1] =
                    g.value(std::vector<double>{axes[0].node(i0), axes[1].node(i1)});
    }
    return out;
}

double n_factorial(int n) { return n == 2 ? 2.0 : 1.0; }

}  // namespace

// ---------------------------------------------------------------------------
// PotentialGrid

PotentialGrid::PotentialGrid(Axis axis, std::vector<double> values, GridRole role)
    : dim_(1), values_(std::move(values)), role_(role) {
    axes_[0] = axis;
    axes_[1] = Axis{};
    if (axis.n < 2 || static_cast<int>(values_.size()) != axis.n)
        throw std::invalid_argument("grid size mismatch");
}

PotentialGrid::PotentialGrid(Axis axis0, Axis axis1, std::vector<double> values,
                             GridRole role)
    : dim_(2), values_(std::move(values)), role_(role) {
    axes_[0] = axis0;
    axes_[1] = axis1;
    if (axis0.n < 2 || axis1.n < 2 ||
        static_cast<int>(values_.size()) != axis0.n * axis1.n)
        throw std::invalid_argument("grid size mismatch");
}

bool PotentialGrid::is_minus_infinity() const {
    for (double v : values_)
        if (v != kMinusInf) return false;
    return true;
}

PotentialGrid PotentialGrid::minus_infinity(const std::vector<Axis>& axes, GridRole role) {
    if (axes.size() == 1)
        return PotentialGrid(axes[0], std::vector<double>(axes[0].n, kMinusInf), role);
    return PotentialGrid(
        axes[0], axes[1],
        std::vector<double>(static_cast<std::size_t>(axes[0].n) * axes[1].n, kMinusInf),
        role);
}

PotentialGrid PotentialGrid::sample(
    const std::vector<Axis>& axes, GridRole role,
    const std::function<double(const std::vector<double>&)>& f) {
    if (axes.size() == 1) {
        std::vector<double> v(axes[0].n);
        for (int i = 0; i < axes[0].n; ++i) v[i] = f({axes[0].node(i)});
        return PotentialGrid(axes[0], std::move(v), role);
    }
    std::vector<double> v(static_cast<std::size_t>(axes[0].n) * axes[1].n);
    for (int i0 = 0; i0 < axes[0].n; ++i0)
        for (int i1 = 0; i1 < axes[1].n; ++i1)
            v[static_cast<std::size_t>(i0) * axes[1].n + i1] =
                f({axes[0].node(i0), axes[1].node(i1)});
    return PotentialGrid(axes[0], axes[1], std::move(v), role);
}

std::vector<Axis> moment_axes(const Polytope& p, int nodes_per_axis) {
    std::vector<Axis> axes;
    for (int c = 0; c < p.dim(); ++c) {
        Rat lo = p.vertices()[0][c], hi = lo;
        for (const RatVec& v : p.vertices()) {
            lo = std::min(lo, v[c]);
            hi = std::max(hi, v[c]);
        }
        axes.push_back(Axis{to_d(lo), to_d(hi), nodes_per_axis});
    }
    return axes;
}

PotentialGrid reference_symplectic_potential(const Polytope& p, int nodes_per_axis,
                                             const std::vector<Axis>& yaxes) {
    std::vector<LatticePoint> pts = enumerate_lattice_points(p, 1);
    PotentialGrid phi_ref = PotentialGrid::sample(
        yaxes, GridRole::KahlerPotential, [&](const std::vector<double>& y) {
            double top = kMinusInf;
            for (const LatticePoint& u : pts) {
                double e = 0;
                for (std::size_t c = 0; c < y.size(); ++c) e += u[c] * y[c];
                top = std::max(top, e);
            }
            double s = 0;
            for (const LatticePoint& u : pts) {
                double e = 0;
                for (std::size_t c = 0; c < y.size(); ++c) e += u[c] * y[c];
                s += std::exp(e - top);
            }
            return top + std::log(s);
        });
    return restrict_to_polytope(legendre(phi_ref, moment_axes(p, nodes_per_axis)), p);
}

PotentialGrid restrict_to_polytope(PotentialGrid grid, const Polytope& p) {
    const double eps = 1e-12;
    auto inside = [&](const std::vector<double>& x) {
        for (const Halfspace& h : p.halfspaces()) {
            double lhs = 0;
            for (std::size_t c = 0; c < x.size(); ++c) lhs += to_d(h.normal[c]) * x[c];
            if (lhs > to_d(h.offset) + eps) return false;
        }
        return true;
    };
    if (grid.dim() == 1) {
        for (int i = 0; i < grid.axis(0).n; ++i)
            if (!inside({grid.axis(0).node(i)})) grid.at(i) = kPlusInf;
        return grid;
    }
    for (int i0 = 0; i0 < grid.axis(0).n; ++i0)
        for (int i1 = 0; i1 < grid.axis(1).n; ++i1)
            if (!inside({grid.axis(0).node(i0), grid.axis(1).node(i1)}))
                grid.at(i0 * grid.axis(1).n + i1) = kPlusInf;
    return grid;
}

PotentialGrid constrain_superlevel(PotentialGrid grid, const PLConcave& g, double lambda) {
    const double eps = 1e-12;
    if (grid.dim() == 1) {
        for (int i = 0; i < grid.axis(0).n; ++i)
            if (g.value(std::vector<double>{grid.axis(0).node(i)}) < lambda - eps)
                grid.at(i) = kPlusInf;
        return grid;
    }
    for (int i0 = 0; i0 < grid.axis(0).n; ++i0)
        for (int i1 = 0; i1 < grid.axis(1).n; ++i1)
            if (g.value(std::vector<double>{grid.axis(0).node(i0),
                                            grid.axis(1).node(i1)}) < lambda - eps)
                grid.at(i0 * grid.axis(1).n + i1) = kPlusInf;
    return grid;
}

PotentialGrid legendre(const PotentialGrid& f, const std::vector<Axis>& dual_axes) {
    if (static_cast<int>(dual_axes.size()) != f.dim())
        throw std::invalid_argument("dual axis count must match the grid dimension");
    ConjResult r = conjugate(f, dual_axes);
    if (f.dim() == 1)
        return PotentialGrid(dual_axes[0], std::move(r.value), flipped(f.role()));
    return PotentialGrid(dual_axes[0], dual_axes[1], std::move(r.value), flipped(f.role()));
}

// ---------------------------------------------------------------------------
// Monge-Ampere masses

std::vector<double> ma_node_masses_1d(const PotentialGrid& phi) {
    if (phi.dim() != 1) throw std::invalid_argument("1D potential expected");
    const int n = phi.axis(0).n;
    const double h = phi.axis(0).step();
    std::vector<double> mass(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
        const double second = (phi.at(i + 1) - 2 * phi.at(i) + phi.at(i - 1)) / h;
        mass[i] = std::max(0.0, second);
    }
    return mass;
}

double discrete_ma_mass(const PotentialGrid& phi) {
    if (phi.is_minus_infinity()) return 0.0;
    if (phi.dim() == 1) {
        // Total variation of the discrete derivative.
        const int n = phi.axis(0).n;
        const double h = phi.axis(0).step();
        double tv = 0;
        double prev = (phi.at(1) - phi.at(0)) / h;
        for (int i = 1; i + 1 < n; ++i) {
            const double s = (phi.at(i + 1) - phi.at(i)) / h;
            tv += std::abs(s - prev);
            prev = s;
        }
        return tv;
    }

    // 2D: measure of the subgradient image. A dual node s lies in the image
    // iff the conjugating argmax of <s,y> - phi(y) is attained strictly
    // inside the grid.
    const int res = 481;
    std::vector<Axis> dual;
    for (int axis = 0; axis < 2; ++axis) {
        auto [lo, hi] = slope_range(phi, axis);
        const double pad = 2.0 * (hi - lo + 1.0) / res;
        dual.push_back(Axis{lo - pad, hi + pad, res});
    }
    ConjResult r = conjugate(phi, dual);
    const int n0 = phi.axis(0).n, n1 = phi.axis(1).n;
    std::int64_t interior = 0;
    for (const auto& [a0, a1] : r.arg) {
        if (a0 <= 0 || a0 >= n0 - 1 || a1 <= 0 || a1 >= n1 - 1) continue;
        ++interior;
    }
    return n_factorial(2) * interior * dual[0].step() * dual[1].step();
}

// ---------------------------------------------------------------------------
// Ray operations

PotentialGrid build_ray(const PotentialGrid& u0, const ToricConfig& cfg, double t,
                        const std::vector<Axis>& dual_axes) {
    if (t < 0) throw std::invalid_argument("ray time must be nonnegative");
    std::vector<double> g = g_samples(cfg.g(), axes_of(u0));
    PotentialGrid shifted = u0;
    for (int i = 0; i < shifted.size(); ++i)
        if (shifted.at(i) != kPlusInf) shifted.at(i) -= t * g[i];
    return legendre(shifted, dual_axes);
}

PotentialGrid equilibrium(const PotentialGrid& u0, const ToricConfig& cfg, double lambda,
                          const std::vector<Axis>& dual_axes) {
    PotentialGrid constrained = constrain_superlevel(u0, cfg.g(), lambda);
    bool any = false;
    for (int i = 0; i < constrained.size(); ++i)
        if (constrained.at(i) != kPlusInf) any = true;
    if (!any) return PotentialGrid::minus_infinity(dual_axes, GridRole::KahlerPotential);
    return legendre(constrained, dual_axes);
}

PotentialGrid bergman_approx(const PotentialGrid& u0, const ToricConfig& cfg, double lambda,
                             std::int64_t k, const std::vector<Axis>& dual_axes) {
    const std::int64_t lam_ceil =
        static_cast<std::int64_t>(std::ceil(lambda * static_cast<double>(k) - 1e-9));
    std::vector<std::vector<double>> basis;  // scaled lattice points u/k
    for (const LatticePoint& u : enumerate_lattice_points(cfg.polytope(), k)) {
        if (cfg.weight(u, k) < lam_ceil) continue;
        std::vector<double> s(u.size());
        for (std::size_t c = 0; c < u.size(); ++c)
            s[c] = static_cast<double>(u[c]) / static_cast<double>(k);
        basis.push_back(std::move(s));
    }
    if (basis.empty())
        return PotentialGrid::minus_infinity(dual_axes, GridRole::KahlerPotential);

    // Sup normalization of the monomial of slope u/k: the normalized weight
    // is <u/k, y> - u0(u/k), since u0 is the conjugate of the reference
    // potential. Evaluate u0 at u/k by interpolation over finite nodes.
    const std::vector<Axis> primal = axes_of(u0);
    auto interp_1d = [](const Axis& ax, const std::vector<double>& vals, double x) {
        int i = std::clamp(static_cast<int>((x - ax.lo) / ax.step()), 0, ax.n - 2);
        double w = (x - ax.node(i)) / ax.step();
        double a = vals[i], b = vals[i + 1];
        if (a == kPlusInf && b == kPlusInf) return kPlusInf;
        if (a == kPlusInf) return b;
        if (b == kPlusInf) return a;
        return (1 - w) * a + w * b;
    };
    std::vector<double> conj_val(basis.size());
    for (std::size_t b = 0; b < basis.size(); ++b) {
        if (primal.size() == 1) {
            conj_val[b] = interp_1d(primal[0], u0.values(), basis[b][0]);
        } else {
            // Interpolate along axis 1 for the two bracketing axis-0 rows.
            const Axis& a0 = primal[0];
            int i0 = std::clamp(static_cast<int>((basis[b][0] - a0.lo) / a0.step()), 0,
                                a0.n - 2);
            const double w0 = (basis[b][0] - a0.node(i0)) / a0.step();
            std::vector<double> row0(u0.values().begin() + i0 * primal[1].n,
                                     u0.values().begin() + (i0 + 1) * primal[1].n);
            std::vector<double> row1(u0.values().begin() + (i0 + 1) * primal[1].n,
                                     u0.values().begin() + (i0 + 2) * primal[1].n);
            const double v0 = interp_1d(primal[1], row0, basis[b][1]);
            const double v1 = interp_1d(primal[1], row1, basis[b][1]);
            conj_val[b] = (v0 == kPlusInf)   ? v1
                          : (v1 == kPlusInf) ? v0
                                             : (1 - w0) * v0 + w0 * v1;
        }
    }

    auto envelope = [&](const std::vector<double>& y) {
        double best = kMinusInf;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            double dotv = basis[b][0] * y[0];
            if (y.size() == 2) dotv += basis[b][1] * y[1];
            best = std::max(best, dotv - conj_val[b]);
        }
        return best;
    };
    return PotentialGrid::sample(dual_axes, GridRole::KahlerPotential, envelope);
}

double gradient_map_residual(const GeodesicRay& ray, double t, int lambda_samples) {
    if (t <= 0) throw std::invalid_argument("positive time expected");
    auto [l0r, lcr] = ray.cfg.lambda_bounds();
    const double l0 = to_d(l0r), lc = to_d(lcr);

    const double dt = ray.dt();
    PotentialGrid phi_t = build_ray(ray.u0, ray.cfg, t, ray.dual_axes);
    PotentialGrid phi_next = build_ray(ray.u0, ray.cfg, t + dt, ray.dual_axes);

    std::vector<PotentialGrid> psi;
    std::vector<double> lams;
    for (int j = 0; j < lambda_samples; ++j) {
        const double lam = l0 + (lc - l0) * j / (lambda_samples - 1);
        PotentialGrid p = equilibrium(ray.u0, ray.cfg, lam, ray.dual_axes);
        if (p.is_minus_infinity()) break;
        psi.push_back(std::move(p));
        lams.push_back(lam);
    }
    if (psi.size() < 2) throw std::invalid_argument("lambda grid too coarse");

    double worst = 0;
    for (int i = 0; i < phi_t.size(); ++i) {
        double lam = (phi_next.at(i) - phi_t.at(i)) / dt;
        lam = std::clamp(lam, lams.front(), lams.back());
        std::size_t j = 0;
        while (j + 2 < lams.size() && lams[j + 1] <= lam) ++j;
        const double w = (lam - lams[j]) / (lams[j + 1] - lams[j]);
        const double psi_lam = (1 - w) * psi[j].at(i) + w * psi[j + 1].at(i);
        worst = std::max(worst, std::abs(phi_t.at(i) - psi_lam - t * lam));
    }
    return worst;
}

MassIdentity ma_mass_identity(const PotentialGrid& u0, const ToricConfig& cfg, double lambda,
                              const std::vector<Axis>& dual_axes) {
    MassIdentity out{0.0, Rat(0)};
    PotentialGrid psi = equilibrium(u0, cfg, lambda, dual_axes);
    out.lhs = discrete_ma_mass(psi);

    // Exact side: n! * vol{g >= lambda} at the dyadic rational nearest lambda.
    const Rat lam_rat(Int(static_cast<long long>(std::llround(lambda * 4294967296.0))),
                      Int(4294967296LL));
    std::optional<Polytope> region = superlevel_region(cfg.g(), cfg.polytope(), lam_rat);
    out.rhs = region ? factorial_rat(cfg.polytope().dim()) * region->volume() : Rat(0);
    return out;
}

SlopeFit aubin_mabuchi_slope(const GeodesicRay& ray) {
    if (ray.tsteps < 3) throw std::invalid_argument("need at least three time samples");
    if (ray.dual_axes.size() != 1)
        throw std::invalid_argument("energy slope implemented on 1D grids");
    const double dt = ray.dt();
    const double nfac = n_factorial(static_cast<int>(ray.dual_axes.size()));

    // I(t) = int phidot_t MA(phi_t) at each time node; centred time
    // difference keeps the quadrature second order.
    std::vector<double> energy_rate(ray.tsteps + 1);
    PotentialGrid prev = build_ray(ray.u0, ray.cfg, 0.0, ray.dual_axes);
    PotentialGrid phi = prev;
    for (int j = 0; j <= ray.tsteps; ++j) {
        PotentialGrid next = build_ray(ray.u0, ray.cfg, (j + 1) * dt, ray.dual_axes);
        std::vector<double> mass = ma_node_masses_1d(phi);
        const double span = (j == 0) ? dt : 2 * dt;
        double rate = 0;
        for (int i = 0; i < phi.size(); ++i)
            rate += (next.at(i) - prev.at(i)) / span * mass[i];
        energy_rate[j] = nfac * rate;
        prev = std::move(phi);
        phi = std::move(next);
    }
    std::vector<double> ts(ray.tsteps + 1), energy(ray.tsteps + 1, 0.0);
    for (int j = 0; j <= ray.tsteps; ++j) ts[j] = j * dt;
    for (int j = 1; j <= ray.tsteps; ++j)
        energy[j] = energy[j - 1] + dt * (energy_rate[j - 1] + energy_rate[j]) / 2;

    // Least-squares line through (t_j, E_j).
    double st = 0, se = 0, stt = 0, ste = 0;
    const int m = ray.tsteps + 1;
    for (int j = 0; j < m; ++j) {
        st += ts[j];
        se += energy[j];
        stt += ts[j] * ts[j];
        ste += ts[j] * energy[j];
    }
    const double slope = (m * ste - st * se) / (m * stt - st * st);
    const double intercept = (se - slope * st) / m;
    double max_residual = 0;
    for (int j = 0; j < m; ++j)
        max_residual =
            std::max(max_residual, std::abs(energy[j] - slope * ts[j] - intercept));
    return {slope, max_residual};
}

double maximality_leakage(const PotentialGrid& psi, const PotentialGrid& phi) {
    if (psi.is_minus_infinity()) return 0.0;
    if (psi.dim() != 1) throw std::invalid_argument("leakage implemented on 1D grids");
    const double eps = 10.0 * psi.axis(0).step();
    std::vector<double> mass = ma_node_masses_1d(psi);
    double leak = 0;
    for (int i = 0; i < psi.size(); ++i)
        if (psi.at(i) < phi.at(i) - eps) leak += mass[i];
    return leak;
}

ComparisonResult comparison_monotonicity(const PotentialGrid& phi,
                                         const PotentialGrid& phi_prime, double tol) {
    ComparisonResult out{true, false, 0.0, 0.0};
    // phi must be less singular: phi' <= phi + C for some finite C.
    for (int i = 0; i < phi.size(); ++i) {
        if (phi.at(i) == kMinusInf && phi_prime.at(i) != kMinusInf) {
            out.conclusive = false;
            return out;
        }
    }
    out.mass_phi = discrete_ma_mass(phi);
    out.mass_phi_prime = discrete_ma_mass(phi_prime);
    out.holds = out.mass_phi_prime <= out.mass_phi + tol;
    return out;
}

}  // namespace kstab
