#pragma once

#include "rpls/step_function.hpp"
#include "rpls/system.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rpls {

/// Deterministic simulation parameters. Identical config and system give
/// bit-identical traces and estimates.
///
/// jitter dithers each step by jitter * (u - 1/2) with u drawn from the
/// same stream. Integer-slope branches are exact in binary floating
/// point, so undithered orbits drain mantissa entropy and can collapse
/// onto the (measure-zero) endpoint fixed points; the dither emulates
/// real-arithmetic sampling at a scale far below every statistical
/// tolerance. Set it to 0 for bit-exact piecewise-affine stepping.
struct SimConfig {
    std::uint64_t seed = 1;
    std::uint64_t n_steps = 1000000;
    std::uint64_t n_orbits = 1;
    std::uint64_t burn_in = 1000;
    std::uint32_t bins = 64;
    double jitter = 1e-12;
};

/// SplitMix64 stream; orbit k uses the state mix64(seed + (k+1) * phi),
/// so per-orbit streams are independent and order-free.
struct SplitMix64 {
    std::uint64_t state;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }
    static SplitMix64 for_orbit(std::uint64_t seed, std::uint64_t orbit_index) {
        return SplitMix64{mix(seed + (orbit_index + 1) * 0x9E3779B97F4A7C15ULL)};
    }
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        return mix(state);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// float64 snapshot of a system, shared by all sampling routines.
struct FloatSystem {
    std::vector<double> partition;
    std::vector<Membership> flags;
    std::vector<std::vector<double>> slopes, intercepts;
    std::vector<double> cum_probs;
    double lo = 0, hi = 1;

    template <class S>
    explicit FloatSystem(const RandomSystem<S>& sys) {
        for (const S& z : sys.partition) partition.push_back(to_double(z));
        flags = sys.flags;
        for (const auto& row : sys.slopes) {
            slopes.emplace_back();
            for (const S& v : row) slopes.back().push_back(to_double(v));
        }
        for (const auto& row : sys.intercepts) {
            intercepts.emplace_back();
            for (const S& v : row) intercepts.back().push_back(to_double(v));
        }
        double acc = 0;
        for (const S& p : sys.probs) cum_probs.push_back(acc += to_double(p));
        cum_probs.back() = 1.0;
        lo = partition.front();
        hi = partition.back();
    }

    size_t branch(double x) const {
        const double eps = float_config::eps_cmp();
        for (size_t l = 1; l + 1 < partition.size(); ++l)
            if (std::abs(x - partition[l]) <= eps) return flags[l - 1] == Membership::Left ? l : l + 1;
        size_t i = std::upper_bound(partition.begin(), partition.end(), x) - partition.begin();
        return std::min(std::max<size_t>(i, 1), partition.size() - 1);
    }

    size_t pick_map(double u) const {
        for (size_t j = 0; j + 1 < cum_probs.size(); ++j)
            if (u < cum_probs[j]) return j;
        return cum_probs.size() - 1;
    }

    double step(double x, double u) const {
        size_t i = branch(x);
        size_t j = pick_map(u);
        double y = slopes[i - 1][j] * x + intercepts[i - 1][j];
        return std::min(std::max(y, lo), hi);
    }
};

/// One dithered step; jitter == 0 draws nothing extra from the stream.
inline double advance(const FloatSystem& fs, double x, SplitMix64& rng, double jitter) {
    double y = fs.step(x, rng.uniform01());
    if (jitter > 0) y = std::min(std::max(y + jitter * (rng.uniform01() - 0.5), fs.lo), fs.hi);
    return y;
}

/// The n_steps successive images of x0 (x0 itself not included).
template <class S>
std::vector<double> sample_orbit(const RandomSystem<S>& sys, double x0, const SimConfig& cfg) {
    FloatSystem fs(sys);
    SplitMix64 rng = SplitMix64::for_orbit(cfg.seed, 0);
    std::vector<double> trace;
    trace.reserve(cfg.n_steps);
    double x = x0;
    for (std::uint64_t t = 0; t < cfg.n_steps; ++t) trace.push_back(x = advance(fs, x, rng, cfg.jitter));
    return trace;
}

struct FrequencyEstimate {
    double estimate = 0;
    double stderr_binomial = 0;  // sqrt(q(1-q)/n); ignores orbit correlation
    std::uint64_t hits = 0;
    std::uint64_t count = 0;
};

/// Fraction of post-burn-in trace points landing in [event_lo, event_hi].
template <class S>
FrequencyEstimate birkhoff_frequency(const RandomSystem<S>& sys, double x0, double event_lo, double event_hi,
                                     const SimConfig& cfg) {
    if (cfg.n_steps <= cfg.burn_in) throw std::invalid_argument("birkhoff_frequency: burn_in swallows the trace");
    FloatSystem fs(sys);
    SplitMix64 rng = SplitMix64::for_orbit(cfg.seed, 0);
    double x = x0;
    FrequencyEstimate est;
    for (std::uint64_t t = 0; t < cfg.n_steps; ++t) {
        x = advance(fs, x, rng, cfg.jitter);
        if (t < cfg.burn_in) continue;
        ++est.count;
        if (x >= event_lo && x <= event_hi) ++est.hits;
    }
    est.estimate = double(est.hits) / double(est.count);
    est.stderr_binomial = std::sqrt(est.estimate * (1 - est.estimate) / double(est.count));
    return est;
}

struct HistogramRow {
    double bin_left, bin_right, empirical, exact;
};

struct HistogramReport {
    double l1 = 0;
    std::uint64_t samples = 0;
    std::vector<HistogramRow> rows;
};

/// Empirical bin masses from n_orbits x n_steps post-burn-in samples
/// (orbit starting points drawn uniformly from each orbit's own stream)
/// against the exact bin masses of the given normalized density.
template <class S>
HistogramReport histogram_distance(const RandomSystem<S>& sys, const StepFunction<S>& density, const SimConfig& cfg) {
    if (cfg.bins == 0) throw std::invalid_argument("histogram_distance: need at least one bin");
    FloatSystem fs(sys);
    const double lo = fs.lo, hi = fs.hi;
    std::vector<std::uint64_t> counts(cfg.bins, 0);
    std::uint64_t total = 0;
    for (std::uint64_t k = 0; k < cfg.n_orbits; ++k) {
        SplitMix64 rng = SplitMix64::for_orbit(cfg.seed, k);
        double x = lo + (hi - lo) * rng.uniform01();
        for (std::uint64_t t = 0; t < cfg.n_steps + cfg.burn_in; ++t) {
            x = advance(fs, x, rng, cfg.jitter);
            if (t < cfg.burn_in) continue;
            auto b = static_cast<size_t>((x - lo) / (hi - lo) * cfg.bins);
            if (b >= cfg.bins) b = cfg.bins - 1;
            ++counts[b];
            ++total;
        }
    }

    HistogramReport rep;
    rep.samples = total;
    const S width = (density.domain_hi() - density.domain_lo()) / S(static_cast<long long>(cfg.bins));
    S edge = density.domain_lo();
    for (std::uint32_t b = 0; b < cfg.bins; ++b) {
        S next = b + 1 == cfg.bins ? density.domain_hi() : S(edge + width);
        double exact_mass = to_double(density.integral(edge, next));
        double empirical = double(counts[b]) / double(total);
        rep.rows.push_back({to_double(edge), to_double(next), empirical, exact_mass});
        rep.l1 += std::abs(empirical - exact_mass);
        edge = std::move(next);
    }
    return rep;
}

}  // namespace rpls
