#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kstab {

// Exact rational scalar. All quantities of the exact layer (volumes, Ehrhart
// and weight coefficients, norms-to-the-p) are Rat; floating point is
// confined to the grid modules.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int floor_int(const Rat& r) {
    Int q = rat_num(r) / rat_den(r);
    if (rat_num(r) < 0 && q * rat_den(r) != rat_num(r)) --q;
    return q;
}

inline Int ceil_int(const Rat& r) {
    Int q = rat_num(r) / rat_den(r);
    if (rat_num(r) > 0 && q * rat_den(r) != rat_num(r)) ++q;
    return q;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Int int_gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(Int a, Int b) { return boost::multiprecision::lcm(a, b); }

inline long long to_ll(const Int& v) { return v.convert_to<long long>(); }
inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Serialization: "p/q", or "p" when the denominator is 1.
inline std::string rat_to_string(const Rat& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

// Parses "p" or "p/q". Requires q >= 1 and gcd(|p|, q) == 1; returns nullopt
// otherwise so callers can attach their own context to the error.
std::optional<Rat> rat_from_string(const std::string& text);

// lcm of the denominators of a list of rationals (>= 1).
inline Int denominator_lcm(const std::vector<Rat>& values) {
    Int m = 1;
    for (const Rat& v : values) m = int_lcm(m, rat_den(v));
    return m;
}

}  // namespace kstab
