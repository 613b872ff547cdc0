#include "kstab/configurations.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <string>

namespace kstab {

namespace {

RatVec to_rat_vec(const LatticePoint& u) {
    RatVec x(u.size());
    for (std::size_t c = 0; c < u.size(); ++c) x[c] = u[c];
    return x;
}

struct CornerData {
    RatVec eta_sum;              // integral entries; l_v(x) = <eta_sum, x - v>
    Rat epsilon;                 // min of l_v over edge-adjacent vertices
    std::vector<int> adjacent;   // vertex indices joined to the corner
};

// Edge data of a Delzant corner: primitive edge directions forming a lattice
// basis, their dual sum, and the corner-cut bound.
CornerData corner_data(const Polytope& p, int vertex_index) {
    const int n = p.dim();
    if (vertex_index < 0 || vertex_index >= static_cast<int>(p.vertices().size()))
        throw std::invalid_argument("vertex index out of range");
    const RatVec& v = p.vertices()[vertex_index];

    CornerData data;
    for (const auto& [i, j] : p.edges()) {
        if (i == vertex_index)
            data.adjacent.push_back(j);
        else if (j == vertex_index)
            data.adjacent.push_back(i);
    }
    if (static_cast<int>(data.adjacent.size()) != n)
        throw std::invalid_argument("non-Delzant corner: expected " + std::to_string(n) +
                                    " edges at the vertex");

    RatMat edge_dirs;  // rows: primitive integer directions
    for (int w : data.adjacent) {
        RatVec dir = vec_sub(p.vertices()[w], v);
        Int m = denominator_lcm(dir);
        Int g = 0;
        for (const Rat& x : dir) g = int_gcd(g, rat_num(x) * (m / rat_den(x)));
        if (g < 0) g = -g;
        edge_dirs.push_back(vec_scale(Rat(m, g), dir));
    }
    Rat det = determinant(edge_dirs);
    if (det != 1 && det != -1)
        throw std::invalid_argument("non-Delzant corner: edge directions not a lattice basis");

    // eta_sum solves <edge_dir_j, eta_sum> = 1 for all j.
    std::optional<RatVec> eta = solve_linear(edge_dirs, RatVec(n, Rat(1)));
    data.eta_sum = std::move(*eta);

    data.epsilon = 0;
    bool first = true;
    for (int w : data.adjacent) {
        Rat d = dot(data.eta_sum, vec_sub(p.vertices()[w], v));
        if (first || d < data.epsilon) data.epsilon = d;
        first = false;
    }
    return data;
}

}  // namespace

// ---------------------------------------------------------------------------
// FiltrationTable

FiltrationTable::FiltrationTable(int ambient_dim, std::int64_t level,
                                 std::map<std::int64_t, std::int64_t> dims)
    : ambient_dim_(ambient_dim), level_(level) {
    if (level < 1) throw std::invalid_argument("level must be positive");
    for (const auto& [w, d] : dims) {
        if (d < 0) throw std::invalid_argument("negative eigenspace dimension");
        if (d > 0) entries_.emplace_back(w, d);
    }
    if (entries_.empty()) throw std::invalid_argument("empty weight table");
}

std::int64_t FiltrationTable::hilbert_dim() const {
    std::int64_t n = 0;
    for (const auto& [w, d] : entries_) n += d;
    return n;
}

Int FiltrationTable::total_weight() const {
    Int s = 0;
    for (const auto& [w, d] : entries_) s += Int(w) * d;
    return s;
}

Int FiltrationTable::moment_sum(int p) const {
    Int s = 0;
    for (const auto& [w, d] : entries_) {
        Int pw = 1;
        for (int i = 0; i < p; ++i) pw *= w;
        s += pw * d;
    }
    return s;
}

std::int64_t FiltrationTable::counting(std::int64_t lambda) const {
    std::int64_t s = 0;
    for (const auto& [w, d] : entries_)
        if (w >= lambda) s += d;
    return s;
}

std::int64_t FiltrationTable::min_weight() const { return entries_.front().first; }
std::int64_t FiltrationTable::max_weight() const { return entries_.back().first; }

// ---------------------------------------------------------------------------
// ToricConfig

ToricConfig::ToricConfig(Polytope polytope, PLConcave g, Rounding rounding)
    : polytope_(std::move(polytope)), g_(std::move(g)), rounding_(rounding) {
    g_.validate_irredundant(polytope_);
}

std::int64_t ToricConfig::weight(const LatticePoint& u, std::int64_t k) const {
    if (k < 1) throw std::invalid_argument("level must be positive");
    RatVec x = to_rat_vec(u);
    for (const Halfspace& h : polytope_.halfspaces())
        if (dot(h.normal, x) > Rat(k) * h.offset)
            throw std::invalid_argument("lattice point outside the dilated polytope");
    // k * g(u/k) = min over pieces of <grad, u> + const * k, exactly.
    Rat best;
    bool first = true;
    for (const AffinePiece& a : g_.affines()) {
        Rat v = dot(a.gradient, x) + a.constant * k;
        if (first || v < best) best = v;
        first = false;
    }
    return to_ll(rounding_ == Rounding::Ceil ? ceil_int(best) : floor_int(best));
}

FiltrationTable ToricConfig::dims_by_weight(std::int64_t k) const {
    std::map<std::int64_t, std::int64_t> dims;
    for (const LatticePoint& u : enumerate_lattice_points(polytope_, k))
        ++dims[weight(u, k)];
    return FiltrationTable(polytope_.dim(), k, std::move(dims));
}

std::pair<Rat, Rat> ToricConfig::lambda_bounds() const {
    std::vector<RatVec> verts = cell_vertices(g_, polytope_);
    Rat lo = g_.value(verts[0]), hi = lo;
    for (const RatVec& v : verts) {
        Rat val = g_.value(v);
        if (val < lo) lo = val;
        if (val > hi) hi = val;
    }
    return {lo, hi};
}

std::int64_t ToricConfig::period() const {
    Int m = 1;
    for (const RatVec& v : cell_vertices(g_, polytope_)) {
        m = int_lcm(m, denominator_lcm(v));
        m = int_lcm(m, rat_den(g_.value(v)));
    }
    return to_ll(m);
}

bool check_multiplicativity(const ToricConfig& cfg, std::int64_t k, std::int64_t kprime,
                            int sample_count, unsigned seed) {
    const std::vector<LatticePoint> us = enumerate_lattice_points(cfg.polytope(), k);
    const std::vector<LatticePoint> vs = enumerate_lattice_points(cfg.polytope(), kprime);
    const std::int64_t slack = cfg.rounding() == Rounding::Ceil ? 1 : 0;

    auto passes = [&](const LatticePoint& u, const LatticePoint& v) {
        LatticePoint sum(u.size());
        for (std::size_t c = 0; c < u.size(); ++c) sum[c] = u[c] + v[c];
        return cfg.weight(sum, k + kprime) >=
               cfg.weight(u, k) + cfg.weight(v, kprime) - slack;
    };

    if (static_cast<std::int64_t>(us.size()) * static_cast<std::int64_t>(vs.size()) <=
        sample_count) {
        for (const LatticePoint& u : us)
            for (const LatticePoint& v : vs)
                if (!passes(u, v)) return false;
        return true;
    }
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> du(0, us.size() - 1), dv(0, vs.size() - 1);
    for (int s = 0; s < sample_count; ++s)
        if (!passes(us[du(rng)], vs[dv(rng)])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// NormalConeConfig

Rat seshadri_fixed_point(const Polytope& p, int vertex_index) {
    return corner_data(p, vertex_index).epsilon;
}

NormalConeConfig::NormalConeConfig(Polytope polytope, int fixed_vertex, Rat c)
    : polytope_(std::move(polytope)), fixed_vertex_(fixed_vertex), c_(std::move(c)) {
    CornerData data = corner_data(polytope_, fixed_vertex_);
    if (c_ <= 0)
        throw std::invalid_argument("c must be positive");
    if (c_ >= data.epsilon)
        throw std::invalid_argument("c must be below the Seshadri bound " +
                                    rat_to_string(data.epsilon));
    eta_sum_ = std::move(data.eta_sum);
}

std::int64_t NormalConeConfig::order_at_vertex(const LatticePoint& u, std::int64_t k) const {
    const RatVec& v = polytope_.vertices()[fixed_vertex_];
    Rat ord = dot(eta_sum_, to_rat_vec(u)) - Rat(k) * dot(eta_sum_, v);
    if (rat_den(ord) != 1)
        throw DivisibilityError("level " + std::to_string(k) +
                                " does not clear the corner vertex denominators");
    return to_ll(rat_num(ord));
}

std::int64_t NormalConeConfig::period() const {
    Int m = rat_den(c_);
    m = int_lcm(m, rat_den(dot(eta_sum_, polytope_.vertices()[fixed_vertex_])));
    for (const RatVec& v : polytope_.vertices()) m = int_lcm(m, denominator_lcm(v));
    return to_ll(m);
}

FiltrationTable NormalConeConfig::dims_by_weight(std::int64_t k) const {
    const Rat ck_rat = c_ * k;
    if (rat_den(ck_rat) != 1)
        throw DivisibilityError("level " + std::to_string(k) +
                                " is not divisible by the period of c = " + rat_to_string(c_));
    const std::int64_t ck = to_ll(rat_num(ck_rat));

    std::vector<std::int64_t> orders;
    for (const LatticePoint& u : enumerate_lattice_points(polytope_, k))
        orders.push_back(order_at_vertex(u, k));
    const std::int64_t nk = static_cast<std::int64_t>(orders.size());

    // f(w) = dim W_{w/k, k}: all sections for w <= -ck, the order-cut subspace
    // on (-ck, 0], zero beyond. Eigenspace dims are successive differences.
    auto f = [&](std::int64_t w) -> std::int64_t {
        if (w <= -ck) return nk;
        if (w > 0) return 0;
        std::int64_t count = 0;
        for (std::int64_t ord : orders)
            if (ord >= w + ck) ++count;
        return count;
    };
    std::map<std::int64_t, std::int64_t> dims;
    for (std::int64_t w = -ck; w <= 0; ++w) {
        std::int64_t d = f(w) - f(w + 1);
        if (d != 0) dims[w] += d;
    }
    return FiltrationTable(polytope_.dim(), k, std::move(dims));
}

ToricConfig NormalConeConfig::toric_view() const {
    const RatVec& v = polytope_.vertices()[fixed_vertex_];
    // g = min(0, l_v(x) - c) with l_v(x) = <eta_sum, x - v>.
    std::vector<AffinePiece> pieces;
    pieces.push_back({RatVec(polytope_.dim(), Rat(0)), Rat(0)});
    pieces.push_back({eta_sum_, -dot(eta_sum_, v) - c_});
    return ToricConfig(polytope_, PLConcave(std::move(pieces)));
}

// ---------------------------------------------------------------------------
// FlagIdealConfig

FlagIdealConfig::FlagIdealConfig(std::vector<MonomialIdeal> flag, Rat c, std::int64_t degree)
    : flag_(std::move(flag)),
      c_(std::move(c)),
      degree_(degree),
      polytope_(Polytope::from_halfspaces(1, {{{Rat(1)}, Rat(1)}, {{Rat(-1)}, Rat(0)}})) {
    if (flag_.empty()) throw std::invalid_argument("flag must be nonempty");
    if (c_ <= 0) throw std::invalid_argument("c must be positive");
    if (degree_ < 1) throw std::invalid_argument("degree must be positive");
    const int n = flag_[0].nvars();
    for (const MonomialIdeal& ideal : flag_)
        if (ideal.nvars() != n)
            throw std::invalid_argument("flag ideals live in different variable counts");
    for (std::size_t i = 0; i + 1 < flag_.size(); ++i)
        if (!flag_[i].contained_in(flag_[i + 1]))
            throw std::invalid_argument("flag containment J_" + std::to_string(i) +
                                        " in J_" + std::to_string(i + 1) + " fails");

    // Moment polytope of O(degree) on P^n: degree * standard simplex.
    std::vector<Halfspace> hs;
    for (int cdx = 0; cdx < n; ++cdx) {
        RatVec neg(n, Rat(0));
        neg[cdx] = -1;
        hs.push_back({std::move(neg), Rat(0)});
    }
    hs.push_back({RatVec(n, Rat(1)), Rat(degree_)});
    polytope_ = Polytope::from_halfspaces(n, std::move(hs));

    // Integral-closure spot check: Newton membership must match the
    // generator-product expansion on small powers.
    for (const MonomialIdeal& ideal : flag_) {
        std::int64_t box = 2;
        for (const Exponent& g : ideal.generators())
            for (std::int64_t e : g) box = std::max(box, e);
        box = 2 * box + 2;
        Exponent u(n, 0);
        std::function<void(int)> scan = [&](int coord) {
            if (coord == n) {
                for (std::int64_t m = 1; m <= 2; ++m)
                    if (ideal.newton_power_contains(u, m) !=
                        ideal.brute_force_power_contains(u, m))
                        throw std::invalid_argument(
                            "flag ideal is not integrally closed: Newton and product "
                            "membership disagree");
                return;
            }
            for (std::int64_t e = 0; e <= box; ++e) {
                u[coord] = e;
                scan(coord + 1);
            }
        };
        scan(0);
    }
}

std::int64_t FlagIdealConfig::hilbert_dim(std::int64_t k) const {
    return lattice_point_count(polytope_, k);
}

std::int64_t FlagIdealConfig::weight(const LatticePoint& u, std::int64_t k) const {
    const Rat ck_rat = c_ * k;
    if (rat_den(ck_rat) != 1)
        throw DivisibilityError("level " + std::to_string(k) +
                                " is not divisible by the period of c = " + rat_to_string(c_));
    const std::int64_t ck = to_ll(rat_num(ck_rat));
    const int big_n = flag_length();

    // Minimize the pole order sum_{m>=1} m*i_m over decompositions
    // i_0 + ... + i_N = ck with u in J_0^{i_0} ... J_{N-1}^{i_{N-1}}
    // (the i_N slot carries no ideal).
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> powers(big_n, 0);
    std::function<void(int, std::int64_t, std::int64_t)> rec =
        [&](int m, std::int64_t used, std::int64_t cost) {
            if (cost >= best) return;
            if (m == big_n) {
                const std::int64_t i_last = ck - used;
                const std::int64_t total = cost + static_cast<std::int64_t>(big_n) * i_last;
                if (total < best && newton_product_contains(flag_, powers, u)) best = total;
                return;
            }
            for (std::int64_t i = 0; i <= ck - used; ++i) {
                powers[m] = i;
                rec(m + 1, used + i, cost + m * i);
            }
            powers[m] = 0;
        };
    rec(0, 0, 0);
    return -best;
}

FiltrationTable FlagIdealConfig::dims_by_weight(std::int64_t k) const {
    std::map<std::int64_t, std::int64_t> dims;
    for (const LatticePoint& u : enumerate_lattice_points(polytope_, k))
        ++dims[weight(u, k)];
    return FiltrationTable(polytope_.dim(), k, std::move(dims));
}

std::int64_t FlagIdealConfig::flag_W_dim(const Rat& lambda, std::int64_t k) const {
    const Rat ck_rat = c_ * k;
    if (rat_den(ck_rat) != 1)
        throw DivisibilityError("level " + std::to_string(k) +
                                " is not divisible by the period of c = " + rat_to_string(c_));
    const std::int64_t ck = to_ll(rat_num(ck_rat));
    const int big_n = flag_length();

    if (lambda <= Rat(-big_n) * c_) return hilbert_dim(k);
    if (lambda > Rat(big_n * (big_n - 1), 2) * c_) return 0;

    // Locate j with -(N - j(j-1)/2) c < lambda <= -(N - j(j+1)/2) c.
    int j = 0;
    for (int cand = 1; cand <= big_n; ++cand) {
        const Rat low = Rat(-(big_n - cand * (cand - 1) / 2)) * c_;
        const Rat high = Rat(-(big_n - cand * (cand + 1) / 2)) * c_;
        if (low < lambda && lambda <= high) {
            j = cand;
            break;
        }
    }
    const Int lam_ceil = ceil_int(lambda * k);
    const Rat exponent_rat =
        (Rat(lam_ceil) + Rat(big_n - j * (j - 1) / 2) * ck) / j;
    if (rat_den(exponent_rat) != 1 || exponent_rat < 0)
        throw DivisibilityError("displayed ideal exponent " + rat_to_string(exponent_rat) +
                                " is not a nonnegative integer at level " + std::to_string(k));
    const std::int64_t e = to_ll(rat_num(exponent_rat));

    // W = H^0(L^k ox J_{N-1}^{ck} ... J_{N-j+1}^{ck} J_{N-j}^{e}): the
    // lexicographic-maximal solution of the weight equation.
    std::vector<MonomialIdeal> factors;
    std::vector<std::int64_t> powers;
    for (int i = 1; i < j; ++i) {
        factors.push_back(flag_[big_n - i]);
        powers.push_back(ck);
    }
    factors.push_back(flag_[big_n - j]);
    powers.push_back(e);

    std::int64_t count = 0;
    for (const LatticePoint& u : enumerate_lattice_points(polytope_, k))
        if (newton_product_contains(factors, powers, u)) ++count;
    return count;
}

std::int64_t FlagIdealConfig::period() const { return to_ll(rat_den(c_)); }

std::pair<Rat, Rat> FlagIdealConfig::lambda_bounds() const {
    if (std::optional<ToricConfig> view = toric_view()) return view->lambda_bounds();
    // Reference-level estimate: weights scale linearly in k on these models.
    const std::int64_t k0 = period();
    FiltrationTable table = dims_by_weight(k0);
    return {Rat(table.min_weight(), k0), Rat(table.max_weight(), k0)};
}

std::optional<ToricConfig> FlagIdealConfig::toric_view() const {
    const int n = nvars();
    const int big_n = flag_length();

    // Detect full powers of the corner maximal ideal: generators of J_m are
    // exactly the degree-a_m monomials.
    std::vector<std::int64_t> a(big_n);
    for (int m = 0; m < big_n; ++m) {
        const auto& gens = flag_[m].generators();
        std::int64_t deg = 0;
        for (std::int64_t e : gens[0]) deg += e;
        std::size_t expected = (n == 1) ? 1 : static_cast<std::size_t>(deg + 1);
        if (gens.size() != expected) return std::nullopt;
        for (const Exponent& g : gens) {
            std::int64_t d2 = 0;
            for (std::int64_t e : g) d2 += e;
            if (d2 != deg) return std::nullopt;
        }
        if (deg < 1) return std::nullopt;
        a[m] = deg;
    }

    // Value function of the decomposition program as a concave function of
    // the corner order: upper concave envelope of the points (a_m, -m),
    // m = 0..N-1, and (0, -N), capped at zero.
    std::vector<std::pair<Rat, Rat>> pts;
    pts.emplace_back(Rat(0), Rat(-big_n));
    for (int m = big_n - 1; m >= 0; --m) pts.emplace_back(Rat(a[m]), Rat(-m));
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<Rat, Rat>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& A = hull[hull.size() - 2];
            const auto& B = hull[hull.size() - 1];
            const Rat cross = (B.first - A.first) * (pt.second - A.second) -
                              (B.second - A.second) * (pt.first - A.first);
            if (cross >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }

    // Compose each hull edge line with the corner order l(x) = sum x_i and
    // scale by c: piece value = c*beta + sigma * l(x). Pieces that never bind
    // on the moment simplex (e.g. the zero cap when the cut exhausts it) are
    // dropped afterwards.
    std::vector<AffinePiece> pieces;
    pieces.push_back({RatVec(n, Rat(0)), Rat(0)});  // the weight never exceeds 0
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        const Rat sigma = (hull[i + 1].second - hull[i].second) /
                          (hull[i + 1].first - hull[i].first);
        const Rat beta = hull[i].second - sigma * hull[i].first;
        if (sigma == 0) continue;  // coincides with the zero cap
        pieces.push_back({RatVec(n, sigma), c_ * beta});
    }

    std::optional<ToricConfig> view;
    try {
        view.emplace(polytope_, drop_redundant_pieces(std::move(pieces), polytope_));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }

    // Certify: the integer program and the envelope must produce identical
    // weight tables at two levels.
    const std::int64_t base = std::max<std::int64_t>(period(), view->period());
    for (std::int64_t k : {base, 2 * base}) {
        FiltrationTable ours = dims_by_weight(k);
        FiltrationTable theirs = view->dims_by_weight(k);
        if (ours.entries() != theirs.entries()) return std::nullopt;
    }
    return view;
}

// ---------------------------------------------------------------------------
// Config dispatch

FiltrationTable dims_by_weight(const Config& cfg, std::int64_t k) {
    return std::visit([&](const auto& c) { return c.dims_by_weight(k); }, cfg);
}

std::pair<Rat, Rat> lambda_bounds(const Config& cfg) {
    return std::visit([](const auto& c) { return c.lambda_bounds(); }, cfg);
}

std::int64_t period(const Config& cfg) {
    return std::visit([](const auto& c) { return c.period(); }, cfg);
}

int ambient_dim(const Config& cfg) {
    return std::visit([](const auto& c) { return c.polytope().dim(); }, cfg);
}

std::optional<ToricConfig> toric_view(const Config& cfg) {
    if (const auto* t = std::get_if<ToricConfig>(&cfg)) return *t;
    if (const auto* nc = std::get_if<NormalConeConfig>(&cfg)) return nc->toric_view();
    return std::get<FlagIdealConfig>(cfg).toric_view();
}

}  // namespace kstab
