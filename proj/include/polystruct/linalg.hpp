// linalg.hpp -- small dense linear algebra over F_p.
//
// Matrices are row-major vector<vector<int>> with entries in [0, p).  Sizes
// throughout the toolkit are tiny (n <= ~40), so simple Gaussian elimination
// is all we need; everything is exact.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "polystruct/field.hpp"

namespace polystruct {

using Matrix = std::vector<std::vector<int>>;

inline Matrix identity_matrix(int n) {
    Matrix m(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b, const PrimeField& F) {
    int r = static_cast<int>(a.size());
    int k = static_cast<int>(b.size());
    int c = k ? static_cast<int>(b[0].size()) : 0;
    Matrix out(r, std::vector<int>(c, 0));
    for (int i = 0; i < r; ++i)
        for (int t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (int j = 0; j < c; ++j)
                out[i][j] = (out[i][j] + a[i][t] * b[t][j]) % F.p;
        }
    return out;
}

inline Point mat_vec(const Matrix& a, const Point& x, const PrimeField& F) {
    Point out(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        long long acc = 0;
        for (size_t j = 0; j < x.size(); ++j) acc += static_cast<long long>(a[i][j]) * x[j];
        out[i] = F.reduce(acc);
    }
    return out;
}

inline Matrix transpose(const Matrix& a) {
    if (a.empty()) return {};
    Matrix t(a[0].size(), std::vector<int>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

// In-place reduced row-echelon form.  Returns the pivot column of each
// surviving nonzero row, in order; zero rows are deleted.
inline std::vector<int> rref(Matrix& m, const PrimeField& F) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    int rows = static_cast<int>(m.size());
    int cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int sel = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) { sel = r; break; }
        if (sel < 0) continue;
        std::swap(m[rank], m[sel]);
        int scale = F.inv(m[rank][col]);
        for (int j = 0; j < cols; ++j) m[rank][j] = m[rank][j] * scale % F.p;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            int factor = m[r][col];
            for (int j = 0; j < cols; ++j)
                m[r][j] = F.sub(m[r][j], factor * m[rank][j] % F.p);
        }
        pivots.push_back(col);
        ++rank;
    }
    m.resize(rank);
    return pivots;
}

inline int mat_rank(Matrix m, const PrimeField& F) {
    return static_cast<int>(rref(m, F).size());
}

// Basis of the null space {x : m x = 0}, one row per basis vector, in the
// standard free-variable parametrization of the RREF.
inline Matrix null_space(Matrix m, const PrimeField& F, int cols) {
    std::vector<int> pivots = rref(m, F);
    std::vector<int> pivot_of_col(cols, -1);
    for (size_t r = 0; r < pivots.size(); ++r) pivot_of_col[pivots[r]] = static_cast<int>(r);
    Matrix basis;
    for (int col = 0; col < cols; ++col) {
        if (pivot_of_col[col] >= 0) continue;  // pivot column, not free
        std::vector<int> v(cols, 0);
        v[col] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = F.neg(m[r][col]);
        basis.push_back(std::move(v));
    }
    return basis;
}

// One solution of m x = b, or nullopt if inconsistent.
inline std::optional<Point> solve(Matrix m, Point b, const PrimeField& F) {
    int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
    for (size_t i = 0; i < m.size(); ++i) m[i].push_back(b[i]);
    Matrix aug = std::move(m);
    std::vector<int> pivots = rref(aug, F);
    Point x(cols, 0);
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == cols) return std::nullopt;  // pivot in the constant column
        x[pivots[r]] = aug[r][cols];
    }
    return x;
}

inline std::optional<Matrix> mat_inverse(Matrix m, const PrimeField& F) {
    int n = static_cast<int>(m.size());
    for (int i = 0; i < n; ++i) {
        m[i].resize(2 * n, 0);
        m[i][n + i] = 1;
    }
    std::vector<int> pivots = rref(m, F);
    if (static_cast<int>(pivots.size()) != n || pivots.back() != n - 1) return std::nullopt;
    Matrix inv(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
    return inv;
}

// Does v lie in the row space of basis (basis already in RREF)?
inline bool in_row_space(const Matrix& basis, const std::vector<int>& pivots, Point v,
                         const PrimeField& F) {
    for (size_t r = 0; r < basis.size(); ++r) {
        int c = v[pivots[r]];
        if (c == 0) continue;
        for (size_t j = 0; j < v.size(); ++j) v[j] = F.sub(v[j], c * basis[r][j] % F.p);
    }
    for (int x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace polystruct
