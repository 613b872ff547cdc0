#include "kstab/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace kstab {

std::vector<LatticePoint> enumerate_lattice_points(const Polytope& p, std::int64_t k) {
    if (k < 1) throw std::invalid_argument("dilation factor must be positive");
    const int n = p.dim();

    std::vector<std::int64_t> lo(n), hi(n);
    for (int c = 0; c < n; ++c) {
        Rat cmin = p.vertices()[0][c], cmax = cmin;
        for (const RatVec& v : p.vertices()) {
            if (v[c] < cmin) cmin = v[c];
            if (v[c] > cmax) cmax = v[c];
        }
        lo[c] = to_ll(ceil_int(Rat(k) * cmin));
        hi[c] = to_ll(floor_int(Rat(k) * cmax));
    }

    std::vector<LatticePoint> out;
    LatticePoint u(n);
    RatVec x(n);
    // Odometer over the bounding box; loop order gives lexicographic output.
    std::vector<std::int64_t> cur(lo);
    while (true) {
        for (int c = 0; c < n; ++c) x[c] = cur[c];
        bool inside = true;
        for (const Halfspace& h : p.halfspaces()) {
            if (dot(h.normal, x) > Rat(k) * h.offset) {
                inside = false;
                break;
            }
        }
        if (inside) {
            for (int c = 0; c < n; ++c) u[c] = cur[c];
            out.push_back(u);
        }
        int c = n - 1;
        while (c >= 0 && cur[c] == hi[c]) {
            cur[c] = lo[c];
            --c;
        }
        if (c < 0) break;
        ++cur[c];
    }
    return out;
}

Rat EhrhartCoefficients::evaluate(std::int64_t k) const {
    std::vector<Rat> coeffs;
    coeffs.push_back(a0);
    coeffs.push_back(a1);
    for (const Rat& c : lower_order) coeffs.push_back(c);
    Rat v = 0;
    for (const Rat& c : coeffs) v = v * k + c;
    return v;
}

EhrhartCoefficients ehrhart_coefficients(const Polytope& p) {
    const int n = p.dim();
    Int period_int = 1;
    for (const RatVec& v : p.vertices())
        period_int = int_lcm(period_int, denominator_lcm(v));
    const std::int64_t period = to_ll(period_int);

    // Counts at k = period, 2*period, ..., (n+2)*period.
    std::vector<std::int64_t> ks;
    std::vector<Rat> counts;
    for (int i = 1; i <= n + 2; ++i) {
        ks.push_back(period * i);
        counts.push_back(Rat(lattice_point_count(p, period * i)));
    }

    // Solve the (n+1)-coefficient Vandermonde system from the first n+1
    // counts; the last count is a consistency check.
    RatMat a;
    RatVec b;
    for (int i = 0; i <= n; ++i) {
        RatVec row;
        Rat pw = 1;
        for (int d = 0; d <= n; ++d) {
            row.push_back(pw);
            pw *= ks[i];
        }
        std::reverse(row.begin(), row.end());
        a.push_back(std::move(row));
        b.push_back(counts[i]);
    }
    std::optional<RatVec> coeffs = solve_linear(std::move(a), std::move(b));
    if (!coeffs) throw std::logic_error("ehrhart interpolation system singular");

    EhrhartCoefficients e;
    e.a0 = (*coeffs)[0];
    e.a1 = n >= 1 ? (*coeffs)[1] : Rat(0);
    for (int i = 2; i <= n; ++i) e.lower_order.push_back((*coeffs)[i]);
    e.period = period;
    if (e.evaluate(ks[n + 1]) != counts[n + 1])
        throw std::logic_error("ehrhart interpolation failed the held-out count");
    if (e.a0 != p.volume())
        throw std::logic_error("ehrhart leading coefficient disagrees with volume");
    return e;
}

}  // namespace kstab
