#include "kstab/monomial_ideal.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace kstab {

namespace {

bool dominates(const Exponent& u, const Exponent& g) {
    for (std::size_t c = 0; c < u.size(); ++c)
        if (u[c] < g[c]) return false;
    return true;
}

// Pareto-minimal generators (the staircase corners).
std::vector<Exponent> minimal_generators(std::vector<Exponent> gens) {
    std::vector<Exponent> out;
    for (const Exponent& g : gens) {
        bool dominated = false;
        for (const Exponent& h : gens)
            if (h != g && dominates(g, h)) dominated = true;
        if (!dominated && std::find(out.begin(), out.end(), g) == out.end())
            out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

MonomialIdeal::MonomialIdeal(std::vector<Exponent> generators) {
    if (generators.empty())
        throw std::invalid_argument("monomial ideal needs at least one generator");
    nvars_ = static_cast<int>(generators[0].size());
    if (nvars_ < 1 || nvars_ > 2)
        throw std::invalid_argument("monomial ideals implemented for 1 or 2 variables");
    for (const Exponent& g : generators) {
        if (static_cast<int>(g.size()) != nvars_)
            throw std::invalid_argument("generator exponent dimension mismatch");
        for (std::int64_t e : g)
            if (e < 0) throw std::invalid_argument("generator exponents must be nonnegative");
    }
    gens_ = minimal_generators(std::move(generators));

    // Axis directions always bound the Newton polyhedron from below.
    for (int c = 0; c < nvars_; ++c) {
        Exponent axis(nvars_, 0);
        axis[c] = 1;
        normals_.push_back(axis);
    }
    if (nvars_ == 2 && gens_.size() > 1) {
        // The minimal generators are sorted by x ascending (hence y strictly
        // descending on the staircase hull); the lower-left convex chain
        // contributes one inward normal per edge.
        std::vector<Exponent> chain;
        for (const Exponent& g : gens_) {
            while (chain.size() >= 2) {
                const Exponent& a = chain[chain.size() - 2];
                const Exponent& b = chain[chain.size() - 1];
                // Drop b when it lies on or above segment a-g (not a corner
                // of the staircase hull).
                const std::int64_t cross = (b[0] - a[0]) * (g[1] - a[1]) -
                                           (b[1] - a[1]) * (g[0] - a[0]);
                if (cross <= 0)
                    chain.pop_back();
                else
                    break;
            }
            chain.push_back(g);
        }
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            const Exponent& a = chain[i];
            const Exponent& b = chain[i + 1];
            Exponent normal = {a[1] - b[1], b[0] - a[0]};
            if (normal[0] > 0 && normal[1] > 0) normals_.push_back(std::move(normal));
        }
    }
}

bool MonomialIdeal::contains(const Exponent& u) const {
    for (const Exponent& g : gens_)
        if (dominates(u, g)) return true;
    return false;
}

std::int64_t MonomialIdeal::support(const Exponent& normal) const {
    std::int64_t best = 0;
    bool first = true;
    for (const Exponent& g : gens_) {
        std::int64_t v = 0;
        for (int c = 0; c < nvars_; ++c) v += normal[c] * g[c];
        if (first || v < best) best = v;
        first = false;
    }
    return best;
}

bool MonomialIdeal::newton_power_contains(const Exponent& u, std::int64_t m) const {
    if (m == 0) return true;
    for (const Exponent& v : normals_) {
        std::int64_t lhs = 0;
        for (int c = 0; c < nvars_; ++c) lhs += v[c] * u[c];
        if (lhs < m * support(v)) return false;
    }
    return true;
}

bool MonomialIdeal::brute_force_power_contains(const Exponent& u, std::int64_t m) const {
    if (m == 0) return true;
    // Expand all m-fold products of generators (multisets) and test division.
    std::set<Exponent> sums = {Exponent(nvars_, 0)};
    for (std::int64_t step = 0; step < m; ++step) {
        std::set<Exponent> next;
        for (const Exponent& s : sums) {
            for (const Exponent& g : gens_) {
                Exponent t(s);
                for (int c = 0; c < nvars_; ++c) t[c] += g[c];
                next.insert(std::move(t));
            }
        }
        sums = std::move(next);
    }
    for (const Exponent& s : sums)
        if (dominates(u, s)) return true;
    return false;
}

bool MonomialIdeal::contained_in(const MonomialIdeal& other) const {
    for (const Exponent& g : gens_)
        if (!other.contains(g)) return false;
    return true;
}

bool newton_product_contains(const std::vector<MonomialIdeal>& ideals,
                             const std::vector<std::int64_t>& powers, const Exponent& u) {
    if (ideals.empty()) return true;
    const int n = ideals[0].nvars();
    std::vector<Exponent> candidate_normals;
    for (int c = 0; c < n; ++c) {
        Exponent axis(n, 0);
        axis[c] = 1;
        candidate_normals.push_back(axis);
    }
    for (const MonomialIdeal& ideal : ideals)
        for (const Exponent& v : ideal.newton_normals())
            if (std::find(candidate_normals.begin(), candidate_normals.end(), v) ==
                candidate_normals.end())
                candidate_normals.push_back(v);
    for (const Exponent& v : candidate_normals) {
        std::int64_t lhs = 0;
        for (int c = 0; c < n; ++c) lhs += v[c] * u[c];
        std::int64_t rhs = 0;
        for (std::size_t i = 0; i < ideals.size(); ++i)
            rhs += powers[i] * ideals[i].support(v);
        if (lhs < rhs) return false;
    }
    return true;
}

}  // namespace kstab
