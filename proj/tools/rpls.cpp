// rpls: construct and verify invariant densities of random
// piecewise-linear interval systems.

#include <rpls/rpls.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace rpls;

constexpr int kExitOk = 0;
constexpr int kExitMathFail = 1;
constexpr int kExitInputError = 2;

struct SystemSource {
    std::string file;
    std::string example;
    std::string beta_lit, alpha_lit, p_lit;
    int branches = 2;
    std::string scalar_flag;

    std::optional<json> doc;  // loaded lazily for file sources

    const json& document() {
        if (!doc) doc = load_json_file(file);
        return *doc;
    }

    bool wants_golden() const { return beta_lit == "golden" || alpha_lit == "golden" || alpha_lit == "1/golden"; }

    ScalarMode resolve_mode() {
        if (const char* env = std::getenv("RPLS_SCALAR_MODE"); env && *env) return scalar_mode_from_string(env);
        if (!scalar_flag.empty()) return scalar_mode_from_string(scalar_flag);
        if (!file.empty()) return scalar_mode_of(document());
        return wants_golden() ? ScalarMode::Quadratic : ScalarMode::Rational;
    }
};

template <class S>
S parse_param(const std::string& lit) {
    if (lit == "golden" || lit == "1/golden") {
        if constexpr (std::is_same_v<S, Quadratic>) {
            Quadratic g = Quadratic::golden_ratio();
            return lit == "golden" ? g : Quadratic(1) / g;
        } else if constexpr (std::is_same_v<S, double>) {
            double g = (1.0 + std::sqrt(5.0)) / 2.0;
            return lit == "golden" ? g : 1.0 / g;
        } else {
            throw std::invalid_argument("'" + lit + "' needs the quadratic or float64 backend");
        }
    }
    return parse_scalar<S>(lit);
}

template <class S>
RandomSystem<S> load_system(SystemSource& src) {
    if (!src.file.empty()) return system_from_json<S>(src.document());
    if (src.example.empty()) throw std::invalid_argument("no system given: pass a file or --example");
    GalleryParams<S> params;
    if (!src.beta_lit.empty()) params.beta = parse_param<S>(src.beta_lit);
    if (!src.alpha_lit.empty()) params.alpha = parse_param<S>(src.alpha_lit);
    if (!src.p_lit.empty()) params.p = parse_param<S>(src.p_lit);
    params.branches = src.branches;
    return gallery(src.example, params);
}

template <class Fn>
int with_backend(ScalarMode mode, Fn&& fn) {
    switch (mode) {
        case ScalarMode::Rational: return fn(Rational());
        case ScalarMode::Quadratic: return fn(Quadratic());
        case ScalarMode::Float64: return fn(0.0);
    }
    return kExitInputError;
}

void attach_source_options(CLI::App* cmd, SystemSource& src, bool file_positional = true) {
    if (file_positional) cmd->add_option("file", src.file, "system definition JSON file");
    cmd->add_option("--example", src.example, "gallery system: random_beta, random_alpha_beta, luroth23, single_map");
    cmd->add_option("--beta", src.beta_lit, "beta parameter ('golden' or an exact literal like 9/5)");
    cmd->add_option("--alpha", src.alpha_lit, "alpha parameter");
    cmd->add_option("--p", src.p_lit, "probability of map 0");
    cmd->add_option("--branches", src.branches, "branch count for single_map");
    cmd->add_option("--scalar", src.scalar_flag, "scalar backend: rational, quadratic, float64");
}

struct PipelineFlags {
    std::string mode = "auto";
    int depth = 40;
    double tol = 0;
    std::string out, report, plot;
    size_t plot_points = 256;
};

void attach_pipeline_options(CLI::App* cmd, PipelineFlags& fl) {
    cmd->add_option("--mode", fl.mode, "evaluation mode: auto, exact, truncated")
        ->check(CLI::IsMember({"auto", "exact", "truncated"}));
    cmd->add_option("--depth", fl.depth, "series depth in truncated mode (0 = pick from the tail bound)");
    cmd->add_option("--tol", fl.tol, "invariance tolerance (0 = exact)");
    cmd->add_option("--out", fl.out, "write the density as CSV");
    cmd->add_option("--report", fl.report, "write the full run report as JSON");
    cmd->add_option("--plot", fl.plot, "write sampled (x, h(x)) plot data as CSV");
    cmd->add_option("--plot-points", fl.plot_points, "plot resolution");
}

template <class S>
PipelineOptions make_options(const PipelineFlags& fl, const RandomSystem<S>& sys) {
    PipelineOptions opts;
    opts.mode = fl.mode == "exact" ? PipelineMode::Exact
                                   : (fl.mode == "truncated" ? PipelineMode::Truncated : PipelineMode::Auto);
    opts.depth = fl.depth > 0 ? fl.depth : depth_for_tail(sys);
    opts.verify_tol = fl.tol;
    return opts;
}

template <class S>
void print_validation(const ValidationReport<S>& v) {
    std::cout << "rho = " << scalar_to_string(v.rho) << " (" << to_double(v.rho) << ")\n";
    std::cout << "A1 finite branches     : " << (v.a1_ok ? "ok" : "FAIL") << "\n";
    std::cout << "A2 expanding on average: " << (v.a2_ok ? "ok" : "FAIL") << "\n";
    std::cout << "A3 distinct fixed pts  : " << (v.a3_ok ? "ok" : "FAIL") << "\n";
    std::cout << "A4 endpoint mapping    : " << (v.a4_ok ? "ok" : "FAIL") << "\n";
    for (const auto& d : v.diagnostics) std::cout << "  note: " << d << "\n";
}

template <class S>
int run_validate(SystemSource& src) {
    RandomSystem<S> sys = load_system<S>(src);
    ValidationReport<S> rep = validate(sys);
    print_validation(rep);
    return rep.all_ok() ? kExitOk : kExitMathFail;
}

template <class S>
int run_pipeline_cmd(SystemSource& src, const PipelineFlags& fl, bool want_matrix, bool want_kernel, bool want_density) {
    RandomSystem<S> sys = load_system<S>(src);
    PipelineResult<S> res = run_pipeline(sys, make_options(fl, sys));
    print_validation(res.validation);
    std::cout << "mode: " << (res.matrix.mode == MatrixMode::Exact ? "exact" : "truncated") << "\n";
    if (want_matrix) {
        std::cout << "fundamental matrix (" << res.matrix.entries.size() << " x "
                  << res.matrix.entries[0].size() << "):\n";
        std::cout << matrix_to_csv(res.matrix);
        if (res.matrix.mode == MatrixMode::Truncated)
            std::cout << "entry bound: " << res.matrix.error_bound << "\n";
    }
    if (want_kernel || want_density) {
        std::cout << "kernel dimension: " << res.kernel.vectors.size() << "\n";
        for (const auto& vec : res.kernel.vectors) {
            std::cout << "  kernel vector:";
            for (const S& v : vec) std::cout << " " << scalar_to_string(v);
            std::cout << "\n";
        }
        if (!res.kernel.exact) {
            std::cout << "  singular values:";
            for (double s : res.kernel.singular_values) std::cout << " " << s;
            std::cout << " (rank cutoff " << res.kernel.rank_threshold << ")\n";
            for (const auto& w : res.kernel.warnings) std::cout << "  warning: " << w << "\n";
        }
    }
    if (want_density) {
        for (const auto& sol : res.solutions) {
            S mass = sol.raw.integral();
            if (sign(mass) != 0)
                std::cout << "normalization constant: " << scalar_to_string(S(S(1) / mass)) << "\n";
            for (const auto& d : sol.densities) {
                std::cout << d.label << " (" << d.density.piece_count() << " pieces), invariance "
                          << (d.invariance.pass ? "pass" : "FAIL")
                          << ", L1 residual " << to_double(d.invariance.l1_residual) << "\n";
                for (size_t t = 0; t < d.density.piece_count(); ++t) {
                    auto p = d.density.piece(t);
                    std::cout << "  [" << scalar_to_string(p.left) << ", " << scalar_to_string(p.right) << "] -> "
                              << scalar_to_string(p.value) << " (" << to_double(p.value) << ")\n";
                }
            }
        }
        if (!fl.out.empty() && !res.solutions.empty() && !res.solutions[0].densities.empty())
            write_text_file(fl.out, density_to_csv(res.solutions[0].densities[0].density));
        if (!fl.plot.empty() && !res.solutions.empty() && !res.solutions[0].densities.empty())
            write_text_file(fl.plot, density_plot_csv(res.solutions[0].densities[0].density, fl.plot_points));
    }
    if (!fl.report.empty()) write_text_file(fl.report, report_to_json(sys, res).dump(2));
    for (const auto& n : res.notes) std::cout << "note: " << n << "\n";
    return res.all_densities_invariant() ? kExitOk : kExitMathFail;
}

template <class S>
int run_verify(SystemSource& src, const std::string& density_path, double tol) {
    RandomSystem<S> sys = load_system<S>(src);
    std::ifstream in(density_path);
    if (!in) throw std::invalid_argument("cannot open density file: " + density_path);
    std::stringstream buf;
    buf << in.rdbuf();
    StepFunction<S> h = density_from_csv<S>(buf.str());
    if (!scalars_equal(h.domain_lo(), sys.domain_lo()) || !scalars_equal(h.domain_hi(), sys.domain_hi()))
        throw std::invalid_argument("density domain does not match the system domain");
    InvarianceReport<S> rep = check_invariance(sys, h, tol);
    std::cout << "exact equal: " << (rep.exact_equal ? "yes" : "no") << "\n";
    std::cout << "L1 residual: " << to_double(rep.l1_residual) << "\n";
    std::cout << "sup residual: " << to_double(rep.sup_residual) << "\n";
    std::cout << (rep.pass ? "invariant" : "NOT invariant") << "\n";
    return rep.pass ? kExitOk : kExitMathFail;
}

struct SimFlags {
    SimConfig cfg;
    double event_lo = 0, event_hi = 0;
    bool has_event = false;
    std::string hist_density;
    std::string out, report;
    double x0 = -1;  // default: midpoint
};

template <class S>
int run_simulate(SystemSource& src, SimFlags& fl) {
    RandomSystem<S> sys = load_system<S>(src);
    double lo = to_double(sys.domain_lo()), hi = to_double(sys.domain_hi());
    double x0 = fl.x0 < lo || fl.x0 > hi ? (lo + hi) / 2 : fl.x0;
    json report;
    report["system"] = {{"intervals", sys.interval_count()},
                        {"maps", sys.map_count()},
                        {"scalar_mode", scalar_traits<S>::name}};
    report["config"] = {{"seed", fl.cfg.seed},       {"n_steps", fl.cfg.n_steps}, {"n_orbits", fl.cfg.n_orbits},
                        {"burn_in", fl.cfg.burn_in}, {"bins", fl.cfg.bins},       {"jitter", fl.cfg.jitter}};
    int code = kExitOk;
    if (fl.has_event) {
        FrequencyEstimate est = birkhoff_frequency(sys, x0, fl.event_lo, fl.event_hi, fl.cfg);
        std::cout << "frequency in [" << fl.event_lo << ", " << fl.event_hi << "]: " << est.estimate << " +/- "
                  << est.stderr_binomial << " (" << est.hits << "/" << est.count << ")\n";
        report["frequency"] = {{"event", {fl.event_lo, fl.event_hi}},
                               {"estimate", est.estimate},
                               {"stderr", est.stderr_binomial},
                               {"hits", est.hits},
                               {"count", est.count}};
    } else if (!fl.hist_density.empty()) {
        std::ifstream in(fl.hist_density);
        if (!in) throw std::invalid_argument("cannot open density file: " + fl.hist_density);
        std::stringstream buf;
        buf << in.rdbuf();
        StepFunction<S> h = density_from_csv<S>(buf.str());
        HistogramReport rep = histogram_distance(sys, h, fl.cfg);
        std::cout << "samples: " << rep.samples << "\n";
        std::cout << "histogram L1 distance: " << rep.l1 << "\n";
        if (!fl.out.empty()) write_text_file(fl.out, histogram_to_csv(rep));
        report["histogram"] = {{"samples", rep.samples}, {"l1_distance", rep.l1}};
    } else {
        std::vector<double> trace = sample_orbit(sys, x0, fl.cfg);
        std::cout << "orbit of " << x0 << ": " << trace.size() << " steps, last point "
                  << (trace.empty() ? x0 : trace.back()) << "\n";
        report["orbit"] = {{"x0", x0}, {"steps", trace.size()}, {"last", trace.empty() ? x0 : trace.back()}};
    }
    if (!fl.report.empty()) write_text_file(fl.report, report.dump(2));
    return code;
}

template <class S>
int run_example_show(SystemSource& src, const std::string& out) {
    RandomSystem<S> sys = load_system<S>(src);
    std::string text = system_to_json(sys).dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariant densities of random piecewise-linear interval systems"};
    app.require_subcommand(1);

    SystemSource src;
    PipelineFlags pfl;
    SimFlags sfl;
    double verify_tol = 0;
    std::string verify_density, example_out;

    auto* c_validate = app.add_subcommand("validate", "check the structural and dynamical assumptions");
    attach_source_options(c_validate, src);

    auto* c_matrix = app.add_subcommand("matrix", "build and print the fundamental matrix");
    attach_source_options(c_matrix, src);
    attach_pipeline_options(c_matrix, pfl);

    auto* c_kernel = app.add_subcommand("kernel", "print the null-space basis of the fundamental matrix");
    attach_source_options(c_kernel, src);
    attach_pipeline_options(c_kernel, pfl);

    auto* c_density = app.add_subcommand("density", "run the full density pipeline");
    attach_source_options(c_density, src);
    attach_pipeline_options(c_density, pfl);

    auto* c_verify = app.add_subcommand("verify", "check a density file against the transfer operator");
    attach_source_options(c_verify, src);
    c_verify->add_option("density", verify_density, "density CSV file")->required();
    c_verify->add_option("--tol", verify_tol, "residual tolerance (0 = exact)");

    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo orbits, frequencies and histograms");
    attach_source_options(c_sim, src);
    c_sim->add_option("--seed", sfl.cfg.seed, "RNG seed");
    c_sim->add_option("--steps", sfl.cfg.n_steps, "steps per orbit");
    c_sim->add_option("--orbits", sfl.cfg.n_orbits, "number of orbits (histogram)");
    c_sim->add_option("--burn-in", sfl.cfg.burn_in, "discarded leading steps");
    c_sim->add_option("--bins", sfl.cfg.bins, "histogram bins");
    c_sim->add_option("--x0", sfl.x0, "orbit starting point");
    auto* ev = c_sim->add_option("--event", [&sfl](const CLI::results_t& vals) {
        if (vals.size() != 2) return false;
        sfl.event_lo = std::stod(vals[0]);
        sfl.event_hi = std::stod(vals[1]);
        sfl.has_event = true;
        return true;
    }, "interval [a, b] whose visit frequency is estimated");
    ev->expected(2);
    c_sim->add_option("--hist", sfl.hist_density, "density CSV to compare a histogram against");
    c_sim->add_option("--out", sfl.out, "write the histogram table as CSV");
    c_sim->add_option("--jitter", sfl.cfg.jitter, "per-step dither scale (0 = exact float stepping)");
    c_sim->add_option("--report", sfl.report, "write simulation results as JSON");

    auto* c_example = app.add_subcommand("example", "gallery systems");
    c_example->require_subcommand(1);
    auto* c_list = c_example->add_subcommand("list", "list gallery names");
    auto* c_show = c_example->add_subcommand("show", "emit a gallery system as JSON");
    c_show->add_option("name", src.example, "gallery name")->required();
    c_show->add_option("--beta", src.beta_lit, "beta parameter");
    c_show->add_option("--alpha", src.alpha_lit, "alpha parameter");
    c_show->add_option("--p", src.p_lit, "probability of map 0");
    c_show->add_option("--branches", src.branches, "branch count for single_map");
    c_show->add_option("--scalar", src.scalar_flag, "scalar backend");
    c_show->add_option("--out", example_out, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        ScalarMode mode = src.resolve_mode();
        if (*c_validate) return with_backend(mode, [&](auto tag) { return run_validate<decltype(tag)>(src); });
        if (*c_matrix)
            return with_backend(mode, [&](auto tag) { return run_pipeline_cmd<decltype(tag)>(src, pfl, true, false, false); });
        if (*c_kernel)
            return with_backend(mode, [&](auto tag) { return run_pipeline_cmd<decltype(tag)>(src, pfl, false, true, false); });
        if (*c_density)
            return with_backend(mode, [&](auto tag) { return run_pipeline_cmd<decltype(tag)>(src, pfl, true, true, true); });
        if (*c_verify)
            return with_backend(mode, [&](auto tag) { return run_verify<decltype(tag)>(src, verify_density, verify_tol); });
        if (*c_sim) return with_backend(mode, [&](auto tag) { return run_simulate<decltype(tag)>(src, sfl); });
        if (*c_list) {
            for (const auto& name : gallery_names()) std::cout << name << "\n";
            return kExitOk;
        }
        if (*c_show) return with_backend(mode, [&](auto tag) { return run_example_show<decltype(tag)>(src, example_out); });
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kExitMathFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMathFail;
    }
    return kExitInputError;
}
