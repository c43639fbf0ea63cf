#pragma once

#include "rpls/density.hpp"
#include "rpls/gallery.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rpls {

enum class PipelineMode { Auto, Exact, Truncated };

struct PipelineOptions {
    PipelineMode mode = PipelineMode::Auto;
    int depth = 40;              // truncated series length
    size_t closure_cap = 10000;  // finite-closure point budget
    double tau_rank = 1e-9;      // approximate-kernel rank threshold
    double verify_tol = 0;       // 0 = demand exact invariance
    TruncatedOptions truncated;
};

template <class S>
struct ReportedDensity {
    std::string label;  // "density", "positive_part", "negative_part"
    StepFunction<S> density;
    InvarianceReport<S> invariance;
};

template <class S>
struct KernelDensity {
    std::vector<S> gamma;
    StepFunction<S> raw;
    std::vector<ReportedDensity<S>> densities;
};

template <class S>
struct PipelineResult {
    ValidationReport<S> validation;
    ClosureStatus closure_status = ClosureStatus::Finite;
    size_t closure_points = 0;
    FundamentalMatrix<S> matrix;
    KernelBasis<S> kernel;
    std::vector<KernelDensity<S>> solutions;
    std::vector<std::string> notes;

    bool all_densities_invariant() const {
        for (const auto& sol : solutions)
            for (const auto& d : sol.densities)
                if (!d.invariance.pass) return false;
        return true;
    }
};

/// validate -> orbit sums -> fundamental matrix -> kernel -> densities
/// -> invariance checks. Auto mode takes the exact path whenever the
/// critical orbits close up within the point budget.
template <class S>
PipelineResult<S> run_pipeline(const RandomSystem<S>& sys, const PipelineOptions& opts = {}) {
    check_structure(sys);
    PipelineResult<S> res;
    res.validation = validate(sys);
    if (!res.validation.all_ok()) {
        std::string what = "system fails assumptions:";
        for (const auto& d : res.validation.diagnostics) what += " " + d;
        throw std::domain_error(what);
    }

    std::vector<S> seeds = critical_seed_points(sys);
    VisitSumsTable<S> table;
    OrbitStepTable<S> steps;
    bool exact_path = false;

    if (opts.mode != PipelineMode::Truncated) {
        OrbitClosure<S> closure = orbit_closure(sys, seeds, opts.closure_cap);
        res.closure_status = closure.status;
        res.closure_points = closure.points.size();
        if (closure.status == ClosureStatus::Finite) {
            exact_path = true;
            table = visit_table_exact(sys, closure);
            steps = orbit_step_table_exact(sys, closure);
        } else if (opts.mode == PipelineMode::Exact) {
            throw std::runtime_error("run_pipeline: critical orbits did not close up within the cap; use truncated mode");
        }
    }
    if (!exact_path) {
        res.closure_status = ClosureStatus::Truncated;
        table = visit_table_truncated(sys, seeds, opts.depth, opts.truncated);
        steps = orbit_step_table_truncated(sys, opts.depth, opts.truncated);
    }

    res.matrix = build_fundamental_matrix(sys, table);
    res.kernel = null_space(res.matrix, opts.tau_rank);

    if constexpr (scalar_traits<S>::is_exact) {
        if (res.kernel.exact) {
            try {
                consistency_check(sys, res.matrix, table, res.kernel);
            } catch (const std::domain_error&) {
                res.notes.push_back("identity self-checks skipped: some interval has zero mean inverse slope");
            }
        }
    }

    double tol = opts.verify_tol;
    for (const auto& gamma : res.kernel.vectors) {
        KernelDensity<S> sol;
        sol.gamma = gamma;
        sol.raw = assemble_invariant(sys, gamma, steps);
        if (sol.raw.is_zero()) {
            res.notes.push_back("kernel vector produced the zero function");
            res.solutions.push_back(std::move(sol));
            continue;
        }
        if (sol.raw.nonnegative() || sol.raw.nonpositive()) {
            StepFunction<S> d = normalize_density(sol.raw);
            InvarianceReport<S> inv = check_invariance(sys, d, tol);
            sol.densities.push_back({"density", std::move(d), std::move(inv)});
        } else {
            SignSplit<S> split = sign_split_densities(sol.raw);
            if (split.positive) {
                InvarianceReport<S> inv = check_invariance(sys, *split.positive, tol);
                sol.densities.push_back({"positive_part", std::move(*split.positive), std::move(inv)});
            }
            if (split.negative) {
                InvarianceReport<S> inv = check_invariance(sys, *split.negative, tol);
                sol.densities.push_back({"negative_part", std::move(*split.negative), std::move(inv)});
            }
            res.notes.push_back("kernel vector gave a sign-changing function; reported its signed parts");
        }
        res.solutions.push_back(std::move(sol));
    }
    return res;
}

/// Convenience: the unique normalized density of a system whose kernel
/// is one-dimensional.
template <class S>
const StepFunction<S>& unique_density(const PipelineResult<S>& res) {
    if (res.solutions.size() != 1 || res.solutions[0].densities.size() != 1)
        throw std::domain_error("unique_density: kernel is not one-dimensional single-signed");
    return res.solutions[0].densities[0].density;
}

/// Reruns the pipeline on an edited copy of the system and compares the
/// canonical densities. Membership flips and continuity-point
/// refinements must leave them untouched.
struct EditInvarianceReport {
    size_t kernel_dim_base = 0, kernel_dim_edited = 0;
    bool densities_match = false;
};

template <class S>
EditInvarianceReport density_invariance_under(const RandomSystem<S>& base, const RandomSystem<S>& edited,
                                              const PipelineOptions& opts = {}) {
    PipelineResult<S> a = run_pipeline(base, opts);
    PipelineResult<S> b = run_pipeline(edited, opts);
    EditInvarianceReport rep;
    rep.kernel_dim_base = a.kernel.vectors.size();
    rep.kernel_dim_edited = b.kernel.vectors.size();
    if (rep.kernel_dim_base != 1 || rep.kernel_dim_edited != 1)
        throw std::domain_error("density_invariance_under: comparison needs one-dimensional kernels");
    rep.densities_match = unique_density(a) == unique_density(b);
    return rep;
}

template <class S>
EditInvarianceReport flip_invariance_report(const RandomSystem<S>& sys, size_t l,
                                            const PipelineOptions& opts = {}) {
    return density_invariance_under(sys, flip_membership(sys, l), opts);
}

template <class S>
EditInvarianceReport refine_invariance_report(const RandomSystem<S>& sys, const S& point,
                                              const PipelineOptions& opts = {}) {
    return density_invariance_under(sys, refine_partition(sys, point), opts);
}

}  // namespace rpls
