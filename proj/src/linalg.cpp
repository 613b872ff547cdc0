#include "kstab/linalg.hpp"

namespace kstab {

namespace {

// Reduces `a` (and optionally the attached rhs) to row echelon form.
// Returns the pivot column of each pivot row.
std::vector<int> echelon(RatMat& a, RatVec* rhs) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
    std::vector<int> pivot_cols;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int piv = -1;
        for (int r = row; r < rows; ++r) {
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0) continue;
        std::swap(a[row], a[piv]);
        if (rhs) std::swap((*rhs)[row], (*rhs)[piv]);
        for (int r = row + 1; r < rows; ++r) {
            if (a[r][col] == 0) continue;
            Rat factor = a[r][col] / a[row][col];
            for (int c = col; c < cols; ++c) a[r][c] -= factor * a[row][c];
            if (rhs) (*rhs)[r] -= factor * (*rhs)[row];
        }
        pivot_cols.push_back(col);
        ++row;
    }
    return pivot_cols;
}

}  // namespace

std::optional<RatVec> solve_linear(RatMat a, RatVec b) {
    const int n = static_cast<int>(a.size());
    std::vector<int> pivots = echelon(a, &b);
    if (static_cast<int>(pivots.size()) < n) return std::nullopt;
    RatVec x(n, Rat(0));
    for (int r = n - 1; r >= 0; --r) {
        Rat s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

int matrix_rank(RatMat a) {
    return static_cast<int>(echelon(a, nullptr).size());
}

Rat determinant(RatMat a) {
    const int n = static_cast<int>(a.size());
    Rat det = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r) {
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0) return Rat(0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            Rat factor = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    return det;
}

std::optional<RatVec> kernel_vector(RatMat a, int cols) {
    std::vector<int> pivots = echelon(a, nullptr);
    if (static_cast<int>(pivots.size()) >= cols) return std::nullopt;
    // Pick the first free column and back-substitute with its value set to 1.
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    int free_col = 0;
    while (free_col < cols && is_pivot[free_col]) ++free_col;
    RatVec x(cols, Rat(0));
    x[free_col] = 1;
    for (int r = static_cast<int>(pivots.size()) - 1; r >= 0; --r) {
        const int pc = pivots[r];
        Rat s = 0;
        for (int c = pc + 1; c < cols; ++c) s += a[r][c] * x[c];
        x[pc] = -s / a[r][pc];
    }
    return x;
}

}  // namespace kstab
