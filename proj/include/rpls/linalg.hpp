#pragma once

#include "rpls/scalar.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rpls {

template <class S>
using Matrix = std::vector<std::vector<S>>;

/// Solves A X = B in place over the scalar field (Gaussian elimination
/// with first-nonzero pivoting; exact over exact backends). B holds one
/// right-hand side per column. Throws std::domain_error on singular A.
template <class S>
Matrix<S> solve_linear(Matrix<S> a, Matrix<S> b) {
    const size_t n = a.size();
    const size_t rhs = b.empty() ? 0 : b[0].size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && sign(a[piv][col]) == 0) ++piv;
        if (piv == n) throw std::domain_error("solve_linear: singular matrix");
        if constexpr (!scalar_traits<S>::is_exact) {  // partial pivoting for floats
            for (size_t r = piv + 1; r < n; ++r)
                if (abs_value(a[r][col]) > abs_value(a[piv][col])) piv = r;
        }
        if (piv != col) {
            std::swap(a[piv], a[col]);
            std::swap(b[piv], b[col]);
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || sign(a[r][col]) == 0) continue;
            S f = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            for (size_t c = 0; c < rhs; ++c) b[r][c] -= f * b[col][c];
        }
    }
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < rhs; ++c) b[r][c] /= a[r][r];
    return b;
}

/// Fraction-free (Bareiss) row echelon reduction. Returns the echelon
/// matrix, the pivot column of each pivot row, and the rank.
template <class S>
struct Echelon {
    Matrix<S> rows;
    std::vector<size_t> pivot_cols;
    size_t rank = 0;
};

template <class S>
Echelon<S> bareiss_echelon(Matrix<S> a) {
    Echelon<S> e;
    if (a.empty()) return e;
    const size_t nrows = a.size(), ncols = a[0].size();
    S prev_pivot(1);
    size_t row = 0;
    for (size_t col = 0; col < ncols && row < nrows; ++col) {
        size_t piv = row;
        while (piv < nrows && sign(a[piv][col]) == 0) ++piv;
        if (piv == nrows) continue;
        std::swap(a[piv], a[row]);
        for (size_t r = row + 1; r < nrows; ++r) {
            for (size_t c = col + 1; c < ncols; ++c)
                a[r][c] = (a[r][c] * a[row][col] - a[r][col] * a[row][c]) / prev_pivot;
            a[r][col] = S(0);
        }
        prev_pivot = a[row][col];
        e.pivot_cols.push_back(col);
        ++row;
    }
    e.rank = row;
    e.rows = std::move(a);
    return e;
}

/// Exact basis of { x : A x = 0 }, each vector scaled so its first
/// nonzero coordinate is 1.
template <class S>
std::vector<std::vector<S>> exact_null_space(const Matrix<S>& a) {
    if (a.empty()) return {};
    const size_t ncols = a[0].size();
    Echelon<S> e = bareiss_echelon(a);
    std::vector<bool> is_pivot(ncols, false);
    for (size_t c : e.pivot_cols) is_pivot[c] = true;

    std::vector<std::vector<S>> basis;
    for (size_t free_col = 0; free_col < ncols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<S> x(ncols, S(0));
        x[free_col] = S(1);
        for (size_t k = e.rank; k-- > 0;) {
            size_t pc = e.pivot_cols[k];
            S acc(0);
            for (size_t c = pc + 1; c < ncols; ++c)
                if (sign(x[c]) != 0) acc += e.rows[k][c] * x[c];
            x[pc] = -acc / e.rows[k][pc];
        }
        for (size_t c = 0; c < ncols; ++c) {
            if (sign(x[c]) != 0) {
                S lead = x[c];
                for (size_t cc = c; cc < ncols; ++cc) x[cc] /= lead;
                break;
            }
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

struct FloatNullSpace {
    std::vector<std::vector<double>> vectors;
    std::vector<double> singular_values;  // all of them, descending
};

/// Null space of a (tall) matrix via one-sided Jacobi SVD: columns are
/// rotated until mutually orthogonal, the column norms are the singular
/// values, and the accumulated rotations give the right singular
/// vectors. One-sided Jacobi resolves tiny singular values to high
/// relative accuracy, which a naive A^T A eigensolve cannot.
inline FloatNullSpace float_null_space(Matrix<double> a, double tau_rel) {
    FloatNullSpace out;
    if (a.empty()) return out;
    const size_t rows = a.size(), cols = a[0].size();
    Matrix<double> v(cols, std::vector<double>(cols, 0.0));
    for (size_t i = 0; i < cols; ++i) v[i][i] = 1.0;

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (size_t p = 0; p < cols; ++p) {
            for (size_t q = p + 1; q < cols; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (size_t r = 0; r < rows; ++r) {
                    app += a[r][p] * a[r][p];
                    aqq += a[r][q] * a[r][q];
                    apq += a[r][p] * a[r][q];
                }
                if (std::abs(apq) <= 1e-300 + 1e-15 * std::sqrt(app * aqq)) continue;
                double theta = (aqq - app) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
                for (size_t r = 0; r < rows; ++r) {
                    double arp = a[r][p], arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for (size_t r = 0; r < cols; ++r) {
                    double vrp = v[r][p], vrq = v[r][q];
                    v[r][p] = c * vrp - s * vrq;
                    v[r][q] = s * vrp + c * vrq;
                }
                rotated = true;
            }
        }
        if (!rotated) break;
    }

    std::vector<std::pair<double, size_t>> sv;
    for (size_t k = 0; k < cols; ++k) {
        double norm2 = 0;
        for (size_t r = 0; r < rows; ++r) norm2 += a[r][k] * a[r][k];
        sv.emplace_back(std::sqrt(norm2), k);
    }
    std::sort(sv.begin(), sv.end(), [](auto& x, auto& y) { return x.first > y.first; });
    double smax = sv.empty() ? 0.0 : sv.front().first;
    for (auto& [sigma, k] : sv) {
        out.singular_values.push_back(sigma);
        if (sigma <= tau_rel * smax || smax == 0.0) {
            std::vector<double> vec(cols);
            for (size_t c = 0; c < cols; ++c) vec[c] = v[c][k];
            double lead = 0;
            for (double x : vec)
                if (std::abs(x) > std::abs(lead)) lead = x;
            if (lead != 0)
                for (double& x : vec) x /= lead;
            out.vectors.push_back(std::move(vec));
        }
    }
    return out;
}

}  // namespace rpls
