#pragma once

#include "rpls/system.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace rpls {

/// Random greedy/lazy beta-system on [0, 1/(beta-1)] for 1 < beta < 2.
/// Map 0 is the lazy branch choice, map 1 the greedy one; both interior
/// partition points belong to the middle interval.
template <class S>
RandomSystem<S> make_random_beta(const S& beta, const S& p) {
    if (!(S(1) < beta && beta < S(2))) throw std::invalid_argument("random_beta: need 1 < beta < 2");
    if (!(S(0) < p && p < S(1))) throw std::invalid_argument("random_beta: need 0 < p < 1");
    const S one(1);
    S b_minus_1 = beta - one;
    S hi = one / b_minus_1;
    RandomSystem<S> sys;
    sys.partition = {S(0), one / beta, one / (beta * b_minus_1), hi};
    sys.flags = {Membership::Right, Membership::Left};  // z_1, z_2 in I_2
    sys.slopes = {{beta, beta}, {beta, beta}, {beta, beta}};
    sys.intercepts = {{S(0), S(0)}, {S(0), S(-1)}, {S(-1), S(-1)}};
    sys.probs = {p, one - p};
    check_structure(sys);
    return sys;
}

/// Random mix of the (alpha,beta)-map and the greedy beta-map, extended
/// past 1 by the greedy branch so the endpoints land on endpoints. Lives
/// on [0, 1/(beta-1)]; requires p < alpha(beta-1)/(beta-alpha).
template <class S>
RandomSystem<S> make_random_alpha_beta(const S& alpha, const S& beta, const S& p) {
    if (!(S(1) < beta && beta < S(2))) throw std::invalid_argument("random_alpha_beta: need 1 < beta < 2");
    if (!(S(0) < alpha && alpha < S(1))) throw std::invalid_argument("random_alpha_beta: need 0 < alpha < 1");
    const S one(1);
    S p_max = alpha * (beta - one) / (beta - alpha);
    if (!(S(0) < p && p < p_max)) throw std::invalid_argument("random_alpha_beta: p out of range");
    RandomSystem<S> sys;
    sys.partition = {S(0), one / beta, one, one / (beta - one)};
    sys.flags = {Membership::Right, Membership::Left};  // I_2 = [1/beta, 1]
    sys.slopes = {{beta, beta}, {alpha, beta}, {beta, beta}};
    sys.intercepts = {{S(0), S(0)}, {S(-alpha / beta), S(-1)}, {S(-1), S(-1)}};
    sys.probs = {p, one - p};
    check_structure(sys);
    return sys;
}

/// Random Luroth system with digits 2 and 3 on [1/3, 1]: map 0 and map 1
/// mix the standard and alternating Luroth branches so every image stays
/// in [1/3, 1]. Its invariant density does not depend on p.
template <class S>
RandomSystem<S> make_luroth23(const S& p) {
    if (!(S(0) < p && p < S(1))) throw std::invalid_argument("luroth23: need 0 < p < 1");
    auto r = [](long long n, long long d) { return from_ratio<S>(n, d); };
    RandomSystem<S> sys;
    sys.partition = {r(1, 3), r(7, 18), r(4, 9), r(1, 2), r(2, 3), r(5, 6), S(1)};
    sys.flags = std::vector<Membership>(5, Membership::Left);
    // standard branch: 6x-2 on (1/3,1/2], 2x-1 on (1/2,1]
    // alternating branch: 3-6x, 2-2x on the same pieces
    sys.slopes = {{S(-6), S(-6)}, {S(6), S(-6)}, {S(6), S(6)}, {S(-2), S(-2)}, {S(2), S(-2)}, {S(2), S(2)}};
    sys.intercepts = {{S(3), S(3)}, {S(-2), S(3)}, {S(-2), S(-2)}, {S(2), S(2)}, {S(-1), S(2)}, {S(-1), S(-1)}};
    sys.probs = {p, S(1) - p};
    check_structure(sys);
    return sys;
}

/// Deterministic m-branch full shift x -> m x - (i-1) on [0, 1],
/// wrapped as a one-map random system.
template <class S>
RandomSystem<S> make_single_map(int branches) {
    if (branches < 2) throw std::invalid_argument("single_map: need at least 2 branches");
    RandomSystem<S> sys;
    for (int i = 0; i <= branches; ++i) sys.partition.push_back(from_ratio<S>(i, branches));
    sys.flags = std::vector<Membership>(branches - 1, Membership::Left);
    for (int i = 0; i < branches; ++i) {
        sys.slopes.push_back({S(branches)});
        sys.intercepts.push_back({S(-i)});
    }
    sys.probs = {S(1)};
    check_structure(sys);
    return sys;
}

template <class S>
struct GalleryParams {
    std::optional<S> beta, alpha, p;
    int branches = 2;
};

template <class S>
RandomSystem<S> gallery(const std::string& name, const GalleryParams<S>& params) {
    auto need = [&](const std::optional<S>& v, const char* what) -> const S& {
        if (!v) throw std::invalid_argument(std::string("gallery ") + name + ": missing parameter " + what);
        return *v;
    };
    if (name == "random_beta") return make_random_beta(need(params.beta, "beta"), need(params.p, "p"));
    if (name == "random_alpha_beta")
        return make_random_alpha_beta(need(params.alpha, "alpha"), need(params.beta, "beta"), need(params.p, "p"));
    if (name == "luroth23") return make_luroth23(need(params.p, "p"));
    if (name == "single_map") return make_single_map<S>(params.branches);
    throw std::invalid_argument("gallery: unknown system '" + name + "'");
}

inline const std::vector<std::string>& gallery_names() {
    static const std::vector<std::string> names = {"random_beta", "random_alpha_beta", "luroth23", "single_map"};
    return names;
}

}  // namespace rpls
