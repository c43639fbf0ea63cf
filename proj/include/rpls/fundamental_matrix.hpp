#pragma once

#include "rpls/orbit.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpls {

enum class MatrixMode { Exact, Truncated };

/// Coefficients of the two linear identities satisfied by the visit
/// sums of every seed y:
///   sum_n unit_side[n-1]  * visits[n-1] = 1
///  -sum_n point_side[n-1] * visits[n-1] = y
/// Defined only when every mean inverse slope is nonzero.
template <class S>
struct IdentityCoefficients {
    std::vector<S> unit_side;   // S_n^{-1} - 1
    std::vector<S> point_side;  // S_n^{-1} * sum_j p_j intercept / slope
};

template <class S>
IdentityCoefficients<S> identity_coefficients(const RandomSystem<S>& sys) {
    std::vector<S> s = mean_inverse_slopes(sys);
    IdentityCoefficients<S> out;
    for (size_t n = 1; n <= sys.interval_count(); ++n) {
        if (sign(s[n - 1]) == 0)
            throw std::domain_error("identity_coefficients: zero mean inverse slope on interval " + std::to_string(n));
        S avg_intercept(0);
        for (size_t j = 0; j < sys.map_count(); ++j)
            avg_intercept += sys.probs[j] * sys.intercept(n, j) / sys.slope(n, j);
        out.unit_side.push_back(S(1) / s[n - 1] - S(1));
        out.point_side.push_back(avg_intercept / s[n - 1]);
    }
    return out;
}

/// Visit sums evaluated at a fixed set of points (the critical images),
/// either exactly from a finite closure or by depth-limited summation.
template <class S>
struct VisitSumsTable {
    std::map<S, std::vector<S>, detail::point_less<S>> rows{detail::point_less<S>{}};
    MatrixMode mode = MatrixMode::Exact;
    S error_bound = S(0);

    const std::vector<S>& at(const S& y) const {
        auto it = rows.find(y);
        if (it == rows.end()) throw std::invalid_argument("VisitSumsTable: point not tabulated");
        return it->second;
    }
};

template <class S>
std::vector<S> critical_seed_points(const RandomSystem<S>& sys) {
    CriticalImages<S> c = critical_images(sys);
    std::vector<S> seeds;
    for (const auto& row : c.left) seeds.insert(seeds.end(), row.begin(), row.end());
    for (const auto& row : c.right) seeds.insert(seeds.end(), row.begin(), row.end());
    return seeds;
}

template <class S>
VisitSumsTable<S> visit_table_exact(const RandomSystem<S>& sys, const OrbitClosure<S>& closure) {
    VisitSumsTable<S> table;
    table.rows = decltype(table.rows)(detail::point_less<S>{float_config::eps_cmp()});
    table.mode = scalar_traits<S>::is_exact ? MatrixMode::Exact : MatrixMode::Truncated;
    Matrix<S> all = visit_sums_all(sys, closure);
    for (size_t u = 0; u < closure.points.size(); ++u) table.rows.emplace(closure.points[u], all[u]);
    return table;
}

template <class S>
VisitSumsTable<S> visit_table_truncated(const RandomSystem<S>& sys, const std::vector<S>& seeds, int depth,
                                        const TruncatedOptions& opts = {}) {
    VisitSumsTable<S> table;
    table.rows = decltype(table.rows)(detail::point_less<S>{float_config::eps_cmp()});
    table.mode = MatrixMode::Truncated;
    for (const S& y : seeds) {
        if (table.rows.count(y)) continue;
        VisitSums<S> v = visit_sums_truncated(sys, y, depth, opts);
        table.error_bound = v.error_bound;
        table.rows.emplace(y, std::move(v.values));
    }
    return table;
}

/// N x (N-1) matrix whose null vectors parametrize the invariant
/// functions of the system.
template <class S>
struct FundamentalMatrix {
    Matrix<S> entries;  // [n-1][i-1]
    MatrixMode mode = MatrixMode::Exact;
    double error_bound = 0;  // entry-wise, truncated mode
};

template <class S>
FundamentalMatrix<S> build_fundamental_matrix(const RandomSystem<S>& sys, const VisitSumsTable<S>& table) {
    const size_t nints = sys.interval_count();
    CriticalImages<S> crit = critical_images(sys);
    FundamentalMatrix<S> out;
    out.mode = table.mode;
    out.entries.assign(nints, std::vector<S>(nints - 1, S(0)));
    double worst_coef = 0;
    for (size_t i = 1; i < nints; ++i) {
        double coef = 0;
        for (size_t j = 0; j < sys.map_count(); ++j) {
            const std::vector<S>& at_left = table.at(crit.left[i - 1][j]);
            const std::vector<S>& at_right = table.at(crit.right[i - 1][j]);
            S wl = sys.probs[j] / sys.slope(i, j);
            S wr = sys.probs[j] / sys.slope(i + 1, j);
            for (size_t n = 1; n <= nints; ++n) {
                S term = wl * at_left[n - 1] - wr * at_right[n - 1];
                if (n == i) term += wl;
                if (n == i + 1) term -= wr;
                out.entries[n - 1][i - 1] += term;
            }
            coef += to_double(sys.probs[j]) *
                    (1.0 / std::abs(to_double(sys.slope(i, j))) + 1.0 / std::abs(to_double(sys.slope(i + 1, j))));
        }
        worst_coef = std::max(worst_coef, coef);
    }
    if (table.mode == MatrixMode::Truncated) out.error_bound = worst_coef * to_double(table.error_bound);
    return out;
}

/// Null-space basis; exact mode carries exact vectors (first nonzero
/// coordinate 1), approximate mode reports the singular values and the
/// absolute cutoff that backed the rank decision.
template <class S>
struct KernelBasis {
    std::vector<std::vector<S>> vectors;
    bool exact = true;
    std::vector<double> singular_values;
    double rank_threshold = 0;  // absolute sigma cutoff (approximate mode)
    std::vector<std::string> warnings;
};

template <class S>
KernelBasis<S> null_space(const FundamentalMatrix<S>& m, double tau_rank = 1e-9) {
    KernelBasis<S> out;
    const size_t rows = m.entries.size();
    const size_t cols = m.entries.empty() ? 0 : m.entries[0].size();
    if (scalar_traits<S>::is_exact && m.mode == MatrixMode::Exact) {
        out.exact = true;
        out.vectors = exact_null_space(m.entries);
        if (out.vectors.empty()) throw std::logic_error("null_space: exact fundamental matrix has trivial kernel");
        size_t rank = cols - out.vectors.size();
        if (rank > rows - 2) throw std::logic_error("null_space: rank exceeds the guaranteed bound");
        return out;
    }
    out.exact = false;
    Matrix<double> a(rows, std::vector<double>(cols));
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) a[r][c] = to_double(m.entries[r][c]);
    FloatNullSpace probe = float_null_space(a, 0.0);
    out.singular_values = probe.singular_values;
    double smax = probe.singular_values.empty() ? 0.0 : probe.singular_values.front();

    // singular values are only known to within the entry-wise truncation
    // bound, so anything under it cannot be distinguished from zero
    double cut = tau_rank * smax;
    if (m.error_bound > 0) cut = std::max(cut, 4 * std::sqrt(double(rows * cols)) * m.error_bound);
    out.rank_threshold = cut;
    for (size_t k = 0; k < probe.singular_values.size(); ++k) {
        double sigma = probe.singular_values[k];
        if (sigma > cut / 10 && sigma < cut * 10 && sigma != smax)
            out.warnings.push_back("singular value " + std::to_string(sigma) +
                                   " sits near the rank cutoff; rank could be " + std::to_string(k) + " or " +
                                   std::to_string(k + 1));
    }

    FloatNullSpace sel = float_null_space(a, smax == 0 ? 1.0 : cut / smax);
    for (const auto& v : sel.vectors) {
        std::vector<S> vec;
        vec.reserve(v.size());
        for (double x : v) vec.push_back(scalar_traits<S>::from_double(x));
        out.vectors.push_back(std::move(vec));
    }
    if (out.vectors.empty())
        throw std::runtime_error(
            "null_space: no singular value fell below the rank cutoff; deepen the truncated series or raise tau_rank");
    return out;
}

struct ConsistencyReport {
    size_t column_identities = 0;
    size_t orthogonality_identities = 0;
};

/// Exact self-checks tying the matrix to the orbit sums: both column
/// identities (unit and point side) and, for each kernel vector, the two
/// orthogonality relations through the side sums. Any failure is an
/// internal error, hence std::logic_error.
template <class S>
ConsistencyReport consistency_check(const RandomSystem<S>& sys, const FundamentalMatrix<S>& m,
                                    const VisitSumsTable<S>& table, const KernelBasis<S>& kernel) {
    if (!scalar_traits<S>::is_exact || m.mode != MatrixMode::Exact)
        throw std::invalid_argument("consistency_check: needs an exact matrix");
    ConsistencyReport rep;
    const size_t nints = sys.interval_count();
    IdentityCoefficients<S> coef = identity_coefficients(sys);
    for (size_t i = 1; i < nints; ++i) {
        S unit_dot(0), point_dot(0);
        for (size_t n = 1; n <= nints; ++n) {
            unit_dot += coef.unit_side[n - 1] * m.entries[n - 1][i - 1];
            point_dot += coef.point_side[n - 1] * m.entries[n - 1][i - 1];
        }
        if (sign(unit_dot) != 0 || sign(point_dot) != 0)
            throw std::logic_error("consistency_check: column identity failed at column " + std::to_string(i));
        rep.column_identities += 2;
    }

    CriticalImages<S> crit = critical_images(sys);
    for (const auto& gamma : kernel.vectors) {
        for (size_t i = 1; i < nints; ++i) {
            S below_sum(0), above_sum(0);
            for (size_t mcol = 1; mcol < nints; ++mcol) {
                for (size_t j = 0; j < sys.map_count(); ++j) {
                    S wl = sys.probs[j] / sys.slope(mcol, j);
                    S wr = sys.probs[j] / sys.slope(mcol + 1, j);
                    SideSums<S> sa = side_sums(sys, VisitSums<S>{table.at(crit.left[mcol - 1][j]), S(0)}, i);
                    SideSums<S> sb = side_sums(sys, VisitSums<S>{table.at(crit.right[mcol - 1][j]), S(0)}, i);
                    below_sum += gamma[mcol - 1] * (wl * sa.below - wr * sb.below);
                    above_sum += gamma[mcol - 1] * (wl * sa.above - wr * sb.above);
                }
            }
            if (sign(gamma[i - 1] + below_sum) != 0 || sign(gamma[i - 1] - above_sum) != 0)
                throw std::logic_error("consistency_check: orthogonality failed at index " + std::to_string(i));
            rep.orthogonality_identities += 2;
        }
    }
    return rep;
}

}  // namespace rpls
