#pragma once

#include "rpls/fundamental_matrix.hpp"
#include "rpls/step_function.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rpls {

/// Assembles sum_z W(z) * 1_{[A, z)} from visit weights: the orbit-sum
/// step function of the seed.
template <class S>
StepFunction<S> orbit_step_function(const RandomSystem<S>& sys, const std::vector<std::pair<S, S>>& weights) {
    std::vector<typename StepFunction<S>::Piece> pieces;
    pieces.reserve(weights.size());
    for (const auto& [z, w] : weights) pieces.push_back({sys.domain_lo(), z, w});
    return StepFunction<S>::from_pieces(sys.domain_lo(), sys.domain_hi(), std::move(pieces));
}

template <class S>
StepFunction<S> orbit_step_function(const RandomSystem<S>& sys, const OrbitClosure<S>& closure, const S& y) {
    return orbit_step_function(sys, visit_weights(sys, closure, y).weights);
}

/// Orbit-sum step functions tabulated at the critical images.
template <class S>
struct OrbitStepTable {
    std::map<S, StepFunction<S>, detail::point_less<S>> rows{detail::point_less<S>{}};

    const StepFunction<S>& at(const S& y) const {
        auto it = rows.find(y);
        if (it == rows.end()) throw std::invalid_argument("OrbitStepTable: point not tabulated");
        return it->second;
    }
};

template <class S>
OrbitStepTable<S> orbit_step_table_exact(const RandomSystem<S>& sys, const OrbitClosure<S>& closure) {
    OrbitStepTable<S> table;
    table.rows = decltype(table.rows)(detail::point_less<S>{float_config::eps_cmp()});
    for (const S& y : critical_seed_points(sys))
        if (!table.rows.count(y)) table.rows.emplace(y, orbit_step_function(sys, closure, y));
    return table;
}

template <class S>
OrbitStepTable<S> orbit_step_table_truncated(const RandomSystem<S>& sys, int depth, const TruncatedOptions& opts = {}) {
    OrbitStepTable<S> table;
    table.rows = decltype(table.rows)(detail::point_less<S>{float_config::eps_cmp()});
    for (const S& y : critical_seed_points(sys))
        if (!table.rows.count(y)) table.rows.emplace(y, orbit_step_function(sys, truncated_orbit(sys, y, depth, opts).weights));
    return table;
}

/// The invariant candidate attached to a kernel vector gamma:
/// h_gamma = sum_m gamma_m sum_j [ (p_j/k_{m,j}) L(left image at z_m)
///                               - (p_j/k_{m+1,j}) L(right image at z_m) ].
template <class S>
StepFunction<S> assemble_invariant(const RandomSystem<S>& sys, const std::vector<S>& gamma,
                                   const OrbitStepTable<S>& steps) {
    const size_t nints = sys.interval_count();
    if (gamma.size() != nints - 1) throw std::invalid_argument("assemble_invariant: gamma has wrong length");
    CriticalImages<S> crit = critical_images(sys);
    StepFunction<S> h = StepFunction<S>::zero(sys.domain_lo(), sys.domain_hi());
    for (size_t m = 1; m < nints; ++m) {
        if (sign(gamma[m - 1]) == 0) continue;
        for (size_t j = 0; j < sys.map_count(); ++j) {
            S wl = gamma[m - 1] * sys.probs[j] / sys.slope(m, j);
            S wr = gamma[m - 1] * sys.probs[j] / sys.slope(m + 1, j);
            h += steps.at(crit.left[m - 1][j]).scaled(wl);
            h += steps.at(crit.right[m - 1][j]).scaled(-wr);
        }
    }
    return h;
}

/// h / integral(h); rejects functions of zero total mass.
template <class S>
StepFunction<S> normalize_density(const StepFunction<S>& h) {
    S total = h.integral();
    if (sign(total) == 0) throw std::domain_error("normalize_density: zero integral");
    return h.scaled(S(1) / total);
}

/// Sign decomposition into at most two probability densities; a part is
/// absent when the corresponding piece set is empty.
template <class S>
struct SignSplit {
    std::optional<StepFunction<S>> positive, negative;
};

template <class S>
SignSplit<S> sign_split_densities(const StepFunction<S>& h) {
    if (h.is_zero()) throw std::domain_error("sign_split_densities: zero function");
    SignSplit<S> out;
    StepFunction<S> pos = h.positive_part();
    StepFunction<S> neg = h.negative_part();
    if (!pos.is_zero()) out.positive = normalize_density(pos);
    if (!neg.is_zero()) out.negative = normalize_density(neg);
    return out;
}

/// Random Perron-Frobenius action on a step function: each branch maps
/// its piece of f affinely onto the branch image, scaled by
/// p_j / |slope|; the branch contributions add up.
template <class S>
StepFunction<S> apply_transfer(const RandomSystem<S>& sys, const StepFunction<S>& f) {
    std::vector<typename StepFunction<S>::Piece> pieces;
    for (size_t i = 1; i <= sys.interval_count(); ++i) {
        const S& lo = sys.partition[i - 1];
        const S& hi = sys.partition[i];
        for (size_t j = 0; j < sys.map_count(); ++j) {
            const S& k = sys.slope(i, j);
            S scale = sys.probs[j] / abs_value(k);
            for (size_t t = 0; t < f.piece_count(); ++t) {
                auto p = f.piece(t);
                S a = std::max(p.left, lo), b = std::min(p.right, hi);
                if (!(a < b) || sign(p.value) == 0) continue;
                S ia = apply_branch(sys, i, j, a);
                S ib = apply_branch(sys, i, j, b);
                if (sign(k) < 0) std::swap(ia, ib);
                pieces.push_back({std::move(ia), std::move(ib), p.value * scale});
            }
        }
    }
    return StepFunction<S>::from_pieces(sys.domain_lo(), sys.domain_hi(), std::move(pieces));
}

template <class S>
struct InvarianceReport {
    bool exact_equal = false;
    S l1_residual = S(0);
    S sup_residual = S(0);
    bool pass = false;
};

/// Compares transfer(h) with h: exact backends demand canonical
/// equality when tol is zero, otherwise the L1 and sup residuals must
/// both stay within tol.
template <class S>
InvarianceReport<S> check_invariance(const RandomSystem<S>& sys, const StepFunction<S>& h, double tol = 0) {
    StepFunction<S> image = apply_transfer(sys, h);
    InvarianceReport<S> rep;
    rep.exact_equal = image == h;
    rep.l1_residual = l1_distance(image, h);
    rep.sup_residual = sup_distance(image, h);
    rep.pass = rep.exact_equal || (tol > 0 && to_double(rep.l1_residual) <= tol && to_double(rep.sup_residual) <= tol);
    return rep;
}

}  // namespace rpls
