#pragma once

#include "rpls/linalg.hpp"
#include "rpls/system.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rpls {

enum class ClosureStatus { Finite, Truncated };

namespace detail {

/// Ordering for point-dedup maps: exact backends compare exactly, the
/// float backend identifies points within a tolerance ball.
template <class S>
struct point_less {
    double eps = 0;
    bool operator()(const S& x, const S& y) const {
        if constexpr (scalar_traits<S>::is_exact)
            return x < y;
        else
            return x < y - eps;
    }
};

}  // namespace detail

/// Forward-orbit closure of a seed set: every point reachable under every
/// map, with the one-step weights p_j / slope attached as edges. Finite
/// closures support exact series evaluation by linear solves.
template <class S>
struct OrbitClosure {
    static constexpr size_t npos = std::numeric_limits<size_t>::max();

    std::vector<S> points;                    // ascending
    std::vector<size_t> interval;             // 1-based branch index per point
    std::vector<std::vector<size_t>> target;  // [point][map] -> point index (npos if unexplored)
    std::vector<std::vector<S>> weight;       // [point][map] = p_j / slope(interval, j)
    ClosureStatus status = ClosureStatus::Finite;
    int depth_explored = 0;
    bool approx_dedup = false;  // float backend: tolerance-ball point identification

    std::optional<size_t> index_of(const S& x) const {
        detail::point_less<S> less{float_config::eps_cmp()};
        auto it = std::lower_bound(points.begin(), points.end(), x, less);
        if (it == points.end() || less(x, *it)) return std::nullopt;
        return static_cast<size_t>(it - points.begin());
    }
};

template <class S>
OrbitClosure<S> orbit_closure(const RandomSystem<S>& sys, const std::vector<S>& seeds, size_t cap = 10000) {
    detail::point_less<S> less{float_config::eps_cmp()};
    std::map<S, size_t, detail::point_less<S>> seen(less);

    OrbitClosure<S> out;
    out.approx_dedup = !scalar_traits<S>::is_exact;
    std::vector<S> frontier;
    for (const S& s : seeds)
        if (seen.emplace(s, 0).second) frontier.push_back(s);

    bool truncated = false;
    int depth = 0;
    while (!frontier.empty()) {
        std::vector<S> next;
        for (const S& x : frontier) {
            size_t i = branch_index(sys, x);
            for (size_t j = 0; j < sys.map_count(); ++j) {
                S y = apply_branch(sys, i, j, x);
                if (seen.size() >= cap && !seen.count(y)) {
                    truncated = true;
                    continue;
                }
                if (seen.emplace(y, 0).second) next.push_back(y);
            }
        }
        if (truncated) break;
        frontier = std::move(next);
        if (!frontier.empty()) ++depth;
    }

    out.status = truncated ? ClosureStatus::Truncated : ClosureStatus::Finite;
    out.depth_explored = depth;
    out.points.reserve(seen.size());
    for (auto& [pt, id] : seen) {
        id = out.points.size();
        out.points.push_back(pt);
    }
    out.interval.resize(out.points.size());
    out.target.assign(out.points.size(), std::vector<size_t>(sys.map_count(), OrbitClosure<S>::npos));
    out.weight.assign(out.points.size(), std::vector<S>(sys.map_count(), S(0)));
    for (size_t u = 0; u < out.points.size(); ++u) {
        size_t i = branch_index(sys, out.points[u]);
        out.interval[u] = i;
        for (size_t j = 0; j < sys.map_count(); ++j) {
            out.weight[u][j] = sys.probs[j] / sys.slope(i, j);
            S y = apply_branch(sys, i, j, out.points[u]);
            auto it = seen.find(y);
            if (it != seen.end()) out.target[u][j] = it->second;
        }
    }
    return out;
}

/// Weighted visit sums of the orbit of a seed: values[n-1] accumulates,
/// over every word, the word's weight each time the orbit sits in
/// interval n just before a step. error_bound is 0 in exact mode.
template <class S>
struct VisitSums {
    std::vector<S> values;
    S error_bound = S(0);
};

namespace detail {

template <class S>
void require_finite(const OrbitClosure<S>& closure) {
    if (closure.status != ClosureStatus::Finite)
        throw std::domain_error("orbit closure is truncated; exact evaluation needs a finite closure");
}

}  // namespace detail

/// Visit sums for every closure point at once: row u solves the linear
/// system X = R + W X over the closure (unique since the edge weights
/// contract). Layout: result[point][n-1].
template <class S>
Matrix<S> visit_sums_all(const RandomSystem<S>& sys, const OrbitClosure<S>& closure) {
    detail::require_finite(closure);
    const size_t n = closure.points.size();
    const size_t nints = sys.interval_count();
    std::vector<S> s = mean_inverse_slopes(sys);
    Matrix<S> a(n, std::vector<S>(n, S(0)));
    Matrix<S> r(n, std::vector<S>(nints, S(0)));
    for (size_t u = 0; u < n; ++u) {
        a[u][u] += S(1);
        for (size_t j = 0; j < sys.map_count(); ++j) a[u][closure.target[u][j]] -= closure.weight[u][j];
        r[u][closure.interval[u] - 1] = s[closure.interval[u] - 1];
    }
    return solve_linear(std::move(a), std::move(r));
}

template <class S>
VisitSums<S> visit_sums_exact(const RandomSystem<S>& sys, const OrbitClosure<S>& closure, const S& y) {
    auto idx = closure.index_of(y);
    if (!idx) throw std::invalid_argument("visit_sums_exact: seed not in closure");
    return VisitSums<S>{visit_sums_all(sys, closure)[*idx], S(0)};
}

/// Total path weight arriving at each closure point from the seed,
/// summed over all times (the t = 0 term contributes 1 at the seed).
template <class S>
struct VisitWeights {
    S seed;
    std::vector<std::pair<S, S>> weights;  // (point, weight), ascending points
    S tail_bound = S(0);
};

template <class S>
VisitWeights<S> visit_weights(const RandomSystem<S>& sys, const OrbitClosure<S>& closure, const S& y) {
    detail::require_finite(closure);
    auto idx = closure.index_of(y);
    if (!idx) throw std::invalid_argument("visit_weights: seed not in closure");
    const size_t n = closure.points.size();
    Matrix<S> a(n, std::vector<S>(n, S(0)));
    Matrix<S> e(n, std::vector<S>(1, S(0)));
    for (size_t u = 0; u < n; ++u) {
        a[u][u] += S(1);
        for (size_t j = 0; j < sys.map_count(); ++j) a[closure.target[u][j]][u] -= closure.weight[u][j];
    }
    e[*idx][0] = S(1);
    Matrix<S> sol = solve_linear(std::move(a), std::move(e));
    VisitWeights<S> out;
    out.seed = y;
    for (size_t u = 0; u < n; ++u)
        if (sign(sol[u][0]) != 0) out.weights.emplace_back(closure.points[u], sol[u][0]);
    return out;
}

/// Splits sum_n S_n^{-1} * values[n] at interval i: below covers
/// intervals 1..i, above covers i+1..N. Requires every S_n nonzero.
template <class S>
struct SideSums {
    S below, above;
};

template <class S>
SideSums<S> side_sums(const RandomSystem<S>& sys, const VisitSums<S>& sums, size_t i) {
    if (i < 1 || i >= sys.interval_count()) throw std::invalid_argument("side_sums: index out of range");
    std::vector<S> s = mean_inverse_slopes(sys);
    SideSums<S> out{S(0), S(0)};
    for (size_t n = 1; n <= sys.interval_count(); ++n) {
        if (sign(s[n - 1]) == 0) throw std::domain_error("side_sums: zero mean inverse slope");
        S term = sums.values[n - 1] / s[n - 1];
        (n <= i ? out.below : out.above) += term;
    }
    return out;
}

struct TruncatedOptions {
    size_t pair_cap = 200000;
    double eps_merge = 1e-10;  // float backend only
};

/// Result of the depth-limited dynamic program on weighted point masses.
template <class S>
struct TruncatedOrbit {
    VisitSums<S> sums;                     // series terms t = 1..depth
    std::vector<std::pair<S, S>> weights;  // visit weights over t = 0..depth
    S weight_tail;                         // bound on the discarded mass
};

/// Advances the measure sum_w delta_w(y,t) * point-mass(T_w y) through
/// t = 0..depth without enumerating words; duplicate points merge, which
/// keeps the pair list near the orbit-closure size whenever the closure
/// is thin. Exact backends refuse to grow past pair_cap.
template <class S>
TruncatedOrbit<S> truncated_orbit(const RandomSystem<S>& sys, const S& y, int depth,
                                  const TruncatedOptions& opts = {}) {
    if (depth < 0) throw std::invalid_argument("truncated_orbit: negative depth");
    std::vector<S> s = mean_inverse_slopes(sys);
    double eps = scalar_traits<S>::is_exact ? 0 : std::max(opts.eps_merge, float_config::eps_cmp());
    detail::point_less<S> less{eps};
    using Mass = std::map<S, S, detail::point_less<S>>;

    Mass layer(less), total(less);
    layer.emplace(y, S(1));
    total.emplace(y, S(1));
    std::vector<S> acc(sys.interval_count(), S(0));

    for (int t = 0; t < depth; ++t) {
        Mass next(less);
        for (const auto& [z, w] : layer) {
            size_t i = branch_index(sys, z);
            acc[i - 1] += w * s[i - 1];
            for (size_t j = 0; j < sys.map_count(); ++j) {
                S img = apply_branch(sys, i, j, z);
                next[img] += w * sys.probs[j] / sys.slope(i, j);
            }
        }
        if (next.size() > opts.pair_cap)
            throw std::runtime_error("truncated_orbit: point-mass list exceeded the configured cap");
        for (const auto& [z, w] : next) total[z] += w;
        layer = std::move(next);
    }

    S rho = contraction_bound(sys);
    S tail = S(1);
    for (int t = 0; t <= depth; ++t) tail *= rho;
    tail = tail / (S(1) - rho);

    TruncatedOrbit<S> out;
    out.sums.values = std::move(acc);
    out.sums.error_bound = tail;
    out.weight_tail = tail;
    out.weights.reserve(total.size());
    for (auto& [z, w] : total)
        if (sign(w) != 0) out.weights.emplace_back(z, w);
    return out;
}

template <class S>
VisitSums<S> visit_sums_truncated(const RandomSystem<S>& sys, const S& y, int depth,
                                  const TruncatedOptions& opts = {}) {
    return truncated_orbit(sys, y, depth, opts).sums;
}

/// Smallest depth whose certified tail rho^{depth+1}/(1-rho) undercuts
/// the target.
template <class S>
int depth_for_tail(const RandomSystem<S>& sys, double target = 1e-12) {
    double rho = to_double(contraction_bound(sys));
    if (!(rho > 0) || rho >= 1) throw std::domain_error("depth_for_tail: needs 0 < rho < 1");
    int depth = 0;
    double tail = rho / (1 - rho);
    while (tail >= target && depth < 100000) {
        tail *= rho;
        ++depth;
    }
    return depth;
}

}  // namespace rpls
