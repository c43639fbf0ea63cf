#pragma once

#include "rpls/scalar.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpls {

/// Side of the partition point z_l: Left means z_l belongs to I_l,
/// Right means z_l belongs to I_{l+1}.
enum class Membership { Left, Right };

/// Random piecewise-linear system on [A, B]: partition points
/// z_0 = A < ... < z_N = B, maps T_j (j < map_count) acting on interval
/// I_i as x -> slope[i][j] * x + intercept[i][j], chosen with
/// probability prob[j]. Treat as immutable after construction.
template <class S>
struct RandomSystem {
    std::vector<S> partition;                 // z_0 .. z_N
    std::vector<Membership> flags;            // interior points, size N-1
    std::vector<std::vector<S>> slopes;       // N rows, map_count columns
    std::vector<std::vector<S>> intercepts;   // same shape
    std::vector<S> probs;                     // map_count entries

    size_t interval_count() const { return partition.size() - 1; }
    size_t map_count() const { return probs.size(); }
    const S& domain_lo() const { return partition.front(); }
    const S& domain_hi() const { return partition.back(); }
    const S& slope(size_t i, size_t j) const { return slopes[i - 1][j]; }      // 1-based interval
    const S& intercept(size_t i, size_t j) const { return intercepts[i - 1][j]; }
};

/// Checks the structural (type-level) invariants; throws
/// std::invalid_argument naming the offending field. Assumption checks
/// (expanding on average etc.) live in validate().
namespace detail {

// containment with float-backend slack
template <class S>
bool outside_interval(const S& x, const S& lo, const S& hi) {
    return (x < lo && !scalars_equal(x, lo)) || (x > hi && !scalars_equal(x, hi));
}

}  // namespace detail

template <class S>
void check_structure(const RandomSystem<S>& sys) {
    const size_t n = sys.interval_count();
    const size_t m = sys.map_count();
    if (sys.partition.size() < 2) throw std::invalid_argument("partition: need at least two points");
    if (m == 0) throw std::invalid_argument("probs: need at least one map");
    for (size_t t = 0; t + 1 < sys.partition.size(); ++t)
        if (!(sys.partition[t] < sys.partition[t + 1]))
            throw std::invalid_argument("partition: points must be strictly increasing");
    if (sys.flags.size() != n - 1) throw std::invalid_argument("flags: expected one per interior point");
    if (sys.slopes.size() != n || sys.intercepts.size() != n)
        throw std::invalid_argument("slopes/intercepts: expected one row per interval");
    S psum(0);
    for (const S& p : sys.probs) {
        if (!(sign(p) > 0)) throw std::invalid_argument("probs: probabilities must be positive");
        psum += p;
    }
    if (!scalars_equal(psum, S(1))) throw std::invalid_argument("probs: probabilities must sum to 1");
    for (size_t i = 0; i < n; ++i) {
        if (sys.slopes[i].size() != m || sys.intercepts[i].size() != m)
            throw std::invalid_argument("slopes/intercepts: expected one column per map");
        for (size_t j = 0; j < m; ++j) {
            if (sign(sys.slopes[i][j]) == 0) throw std::invalid_argument("slopes: slope must be nonzero");
            for (const S& z : {sys.partition[i], sys.partition[i + 1]}) {
                S image = sys.slopes[i][j] * z + sys.intercepts[i][j];
                if (detail::outside_interval(image, sys.domain_lo(), sys.domain_hi()))
                    throw std::invalid_argument("slopes/intercepts: branch image leaves the domain");
            }
        }
    }
}

/// Index i (1-based) of the interval containing x under the membership
/// flags; z_0 always lands in I_1 and z_N in I_N.
template <class S>
size_t branch_index(const RandomSystem<S>& sys, const S& x) {
    if (detail::outside_interval(x, sys.domain_lo(), sys.domain_hi()))
        throw std::domain_error("branch_index: point outside domain");
    const auto& z = sys.partition;
    // flags decide only when x sits exactly on an interior point
    for (size_t l = 1; l + 1 < z.size(); ++l)
        if (scalars_equal(x, z[l])) return sys.flags[l - 1] == Membership::Left ? l : l + 1;
    if (scalars_equal(x, z.front())) return 1;
    if (scalars_equal(x, z.back())) return sys.interval_count();
    size_t i = std::upper_bound(z.begin(), z.end(), x) - z.begin();
    return std::min(i, sys.interval_count());
}

template <class S>
S apply_branch(const RandomSystem<S>& sys, size_t i, size_t j, const S& x) {
    return sys.slope(i, j) * x + sys.intercept(i, j);
}

/// T_j(x). The image staying inside [A, B] is a construction invariant;
/// a breach means the system data is corrupt.
template <class S>
S apply_map(const RandomSystem<S>& sys, size_t j, const S& x) {
    S y = apply_branch(sys, branch_index(sys, x), j, x);
    if (detail::outside_interval(y, sys.domain_lo(), sys.domain_hi()))
        throw std::logic_error("apply_map: image left the domain");
    return y;
}

/// One-sided limits of every map at the interior partition points:
/// left[i][j]  = slope(i,j)   * z_i + intercept(i,j)
/// right[i][j] = slope(i+1,j) * z_i + intercept(i+1,j)
/// for 1 <= i <= N-1 (stored 0-based). Independent of membership flags.
template <class S>
struct CriticalImages {
    std::vector<std::vector<S>> left, right;
};

template <class S>
CriticalImages<S> critical_images(const RandomSystem<S>& sys) {
    const size_t n = sys.interval_count(), m = sys.map_count();
    CriticalImages<S> c;
    c.left.assign(n - 1, std::vector<S>());
    c.right.assign(n - 1, std::vector<S>());
    for (size_t i = 1; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) {
            c.left[i - 1].push_back(apply_branch(sys, i, j, sys.partition[i]));
            c.right[i - 1].push_back(apply_branch(sys, i + 1, j, sys.partition[i]));
        }
    }
    return c;
}

template <class S>
struct ValidationReport {
    S rho;  // max over intervals of sum_j p_j / |slope|
    bool a1_ok = false, a2_ok = false, a3_ok = false, a4_ok = false;
    std::vector<std::string> diagnostics;
    bool all_ok() const { return a1_ok && a2_ok && a3_ok && a4_ok; }
};

/// S_n = sum_j p_j / slope(n, j), the mean inverse slope per interval
/// (index shifted down by one).
template <class S>
std::vector<S> mean_inverse_slopes(const RandomSystem<S>& sys) {
    std::vector<S> s(sys.interval_count(), S(0));
    for (size_t i = 1; i <= sys.interval_count(); ++i)
        for (size_t j = 0; j < sys.map_count(); ++j) s[i - 1] += sys.probs[j] / sys.slope(i, j);
    return s;
}

template <class S>
S contraction_bound(const RandomSystem<S>& sys) {
    S rho(0);
    for (size_t i = 1; i <= sys.interval_count(); ++i) {
        S row(0);
        for (size_t j = 0; j < sys.map_count(); ++j) row += sys.probs[j] / abs_value(sys.slope(i, j));
        if (row > rho) rho = row;
    }
    return rho;
}

/// Assumption checks:
///  a1: finitely many branch points and maps (structural given the types)
///  a2: expanding on average, rho < 1 strictly
///  a3: the weighted diagonal-intersection points are not all equal
///  a4: each endpoint maps (as one-sided limit) to an endpoint, positive
///      slopes fixing the near endpoint and negative slopes swapping
template <class S>
ValidationReport<S> validate(const RandomSystem<S>& sys) {
    ValidationReport<S> rep;
    rep.a1_ok = true;

    rep.rho = contraction_bound(sys);
    rep.a2_ok = rep.rho < S(1);
    if (!rep.a2_ok) rep.diagnostics.push_back("expanding-on-average fails: rho >= 1");

    // R_n = (sum_j p_j d_{n,j} / k_{n,j}) / (1 - S_n); a 1 - S_n == 0
    // denominator is marked infinite and compares equal only to infinite.
    const size_t n = sys.interval_count();
    std::vector<std::pair<bool, S>> ratio(n, {false, S(0)});
    for (size_t i = 1; i <= n; ++i) {
        S num(0), s(0);
        for (size_t j = 0; j < sys.map_count(); ++j) {
            num += sys.probs[j] * sys.intercept(i, j) / sys.slope(i, j);
            s += sys.probs[j] / sys.slope(i, j);
        }
        S den = S(1) - s;
        if (sign(den) == 0)
            ratio[i - 1] = {false, S(0)};
        else
            ratio[i - 1] = {true, num / den};
    }
    rep.a3_ok = false;
    for (size_t i = 1; i < n; ++i) {
        if (ratio[i].first != ratio[0].first || (ratio[i].first && !scalars_equal(ratio[i].second, ratio[0].second))) {
            rep.a3_ok = true;
            break;
        }
    }
    if (!rep.a3_ok) rep.diagnostics.push_back("weighted fixed points coincide on every interval");

    rep.a4_ok = true;
    for (size_t j = 0; j < sys.map_count(); ++j) {
        S at_lo = apply_branch(sys, 1, j, sys.domain_lo());
        S at_hi = apply_branch(sys, sys.interval_count(), j, sys.domain_hi());
        const S& want_lo = sign(sys.slope(1, j)) > 0 ? sys.domain_lo() : sys.domain_hi();
        const S& want_hi = sign(sys.slope(sys.interval_count(), j)) > 0 ? sys.domain_hi() : sys.domain_lo();
        if (!scalars_equal(at_lo, want_lo) || !scalars_equal(at_hi, want_hi)) {
            rep.a4_ok = false;
            rep.diagnostics.push_back("map " + std::to_string(j) + " does not send the endpoints to endpoints");
        }
    }
    return rep;
}

/// Same system with the membership flag of interior point z_l flipped
/// (l is 1-based).
template <class S>
RandomSystem<S> flip_membership(RandomSystem<S> sys, size_t l) {
    if (l == 0 || l >= sys.partition.size() - 1) throw std::invalid_argument("flip_membership: not an interior point");
    auto& f = sys.flags[l - 1];
    f = f == Membership::Left ? Membership::Right : Membership::Left;
    return sys;
}

template <class S>
RandomSystem<S> flip_all_memberships(RandomSystem<S> sys) {
    for (auto& f : sys.flags) f = f == Membership::Left ? Membership::Right : Membership::Left;
    return sys;
}

/// Refines the partition with an extra point strictly inside some
/// interval; the maps are unchanged (the new point is a continuity
/// point), so the split interval's branch rows are duplicated.
template <class S>
RandomSystem<S> refine_partition(const RandomSystem<S>& sys, const S& point) {
    for (const S& z : sys.partition)
        if (scalars_equal(z, point)) throw std::invalid_argument("refine_partition: point already present");
    if (point < sys.domain_lo() || point > sys.domain_hi())
        throw std::invalid_argument("refine_partition: point outside domain");
    size_t i = std::upper_bound(sys.partition.begin(), sys.partition.end(), point) - sys.partition.begin();
    RandomSystem<S> out = sys;
    out.partition.insert(out.partition.begin() + i, point);
    out.flags.insert(out.flags.begin() + (i - 1), Membership::Left);
    out.slopes.insert(out.slopes.begin() + (i - 1), sys.slopes[i - 1]);
    out.intercepts.insert(out.intercepts.begin() + (i - 1), sys.intercepts[i - 1]);
    return out;
}

}  // namespace rpls
