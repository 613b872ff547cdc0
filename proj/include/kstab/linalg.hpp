#pragma once

#include "kstab/rat.hpp"

#include <optional>
#include <vector>

namespace kstab {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // row-major

inline Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline RatVec vec_sub(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline RatVec vec_add(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline RatVec vec_scale(const Rat& c, const RatVec& a) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline bool is_zero_vec(const RatVec& a) {
    for (const Rat& x : a)
        if (x != 0) return false;
    return true;
}

// Solves A x = b by fraction-free-ish Gaussian elimination with exact pivots.
// Returns nullopt when A is singular.
std::optional<RatVec> solve_linear(RatMat a, RatVec b);

// Rank of a rational matrix.
int matrix_rank(RatMat a);

// Determinant of a square rational matrix.
Rat determinant(RatMat a);

// A nonzero kernel vector when rank < columns; nullopt for full column rank.
std::optional<RatVec> kernel_vector(RatMat a, int cols);

}  // namespace kstab
