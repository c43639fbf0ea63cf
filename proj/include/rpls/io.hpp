#pragma once

#include "rpls/pipeline.hpp"
#include "rpls/simulate.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpls {

using json = nlohmann::json;

enum class ScalarMode { Rational, Quadratic, Float64 };

inline std::string to_string(ScalarMode m) {
    switch (m) {
        case ScalarMode::Rational: return "rational";
        case ScalarMode::Quadratic: return "quadratic";
        case ScalarMode::Float64: return "float64";
    }
    return "rational";
}

inline ScalarMode scalar_mode_from_string(const std::string& s) {
    if (s == "rational") return ScalarMode::Rational;
    if (s == "quadratic") return ScalarMode::Quadratic;
    if (s == "float64") return ScalarMode::Float64;
    throw std::invalid_argument("scalar.mode: expected rational, quadratic or float64, got '" + s + "'");
}

inline ScalarMode scalar_mode_of(const json& doc) {
    if (!doc.contains("scalar") || !doc["scalar"].contains("mode"))
        throw std::invalid_argument("scalar.mode: missing");
    return scalar_mode_from_string(doc["scalar"]["mode"].get<std::string>());
}

namespace detail {

template <class S>
S parse_field_scalar(const json& v, const std::string& field) {
    try {
        return parse_scalar<S>(v.get<std::string>());
    } catch (const std::exception& e) {
        throw std::invalid_argument(field + ": " + e.what());
    }
}

template <class S>
std::vector<S> parse_scalar_list(const json& arr, const std::string& field) {
    if (!arr.is_array()) throw std::invalid_argument(field + ": expected an array");
    std::vector<S> out;
    for (size_t i = 0; i < arr.size(); ++i)
        out.push_back(parse_field_scalar<S>(arr[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace detail

template <class S>
RandomSystem<S> system_from_json(const json& doc) {
    for (const char* field : {"domain", "partition", "flags", "slopes", "intercepts", "probs"})
        if (!doc.contains(field)) throw std::invalid_argument(std::string(field) + ": missing");

    RandomSystem<S> sys;
    sys.partition = detail::parse_scalar_list<S>(doc["partition"], "partition");
    std::vector<S> domain = detail::parse_scalar_list<S>(doc["domain"], "domain");
    if (domain.size() != 2) throw std::invalid_argument("domain: expected [A, B]");
    if (sys.partition.size() < 2 || !scalars_equal(domain[0], sys.partition.front()) ||
        !scalars_equal(domain[1], sys.partition.back()))
        throw std::invalid_argument("domain: endpoints must match the partition ends");

    for (size_t i = 0; i < doc["flags"].size(); ++i) {
        std::string f = doc["flags"][i].get<std::string>();
        if (f == "L")
            sys.flags.push_back(Membership::Left);
        else if (f == "R")
            sys.flags.push_back(Membership::Right);
        else
            throw std::invalid_argument("flags: expected \"L\" or \"R\"");
    }
    for (const auto& row : doc["slopes"]) sys.slopes.push_back(detail::parse_scalar_list<S>(row, "slopes"));
    for (const auto& row : doc["intercepts"]) sys.intercepts.push_back(detail::parse_scalar_list<S>(row, "intercepts"));
    sys.probs = detail::parse_scalar_list<S>(doc["probs"], "probs");
    check_structure(sys);
    return sys;
}

namespace detail {

inline long long radicand_of(const Rational&) { return 0; }
inline long long radicand_of(const Quadratic& q) { return q.radicand(); }
inline long long radicand_of(double) { return 0; }

template <class S>
long long system_radicand(const RandomSystem<S>& sys) {
    long long d = 0;
    auto visit = [&](const S& v) {
        if (long long r = radicand_of(v); r != 0) d = r;
    };
    for (const auto& z : sys.partition) visit(z);
    for (const auto& row : sys.slopes)
        for (const auto& v : row) visit(v);
    for (const auto& row : sys.intercepts)
        for (const auto& v : row) visit(v);
    for (const auto& p : sys.probs) visit(p);
    return d;
}

}  // namespace detail

template <class S>
json system_to_json(const RandomSystem<S>& sys) {
    json doc;
    doc["domain"] = {scalar_to_string(sys.domain_lo()), scalar_to_string(sys.domain_hi())};
    doc["partition"] = json::array();
    for (const S& z : sys.partition) doc["partition"].push_back(scalar_to_string(z));
    doc["flags"] = json::array();
    for (Membership f : sys.flags) doc["flags"].push_back(f == Membership::Left ? "L" : "R");
    doc["slopes"] = json::array();
    for (const auto& row : sys.slopes) {
        json r = json::array();
        for (const S& v : row) r.push_back(scalar_to_string(v));
        doc["slopes"].push_back(r);
    }
    doc["intercepts"] = json::array();
    for (const auto& row : sys.intercepts) {
        json r = json::array();
        for (const S& v : row) r.push_back(scalar_to_string(v));
        doc["intercepts"].push_back(r);
    }
    doc["probs"] = json::array();
    for (const S& p : sys.probs) doc["probs"].push_back(scalar_to_string(p));
    json scalar;
    if constexpr (std::is_same_v<S, Quadratic>) {
        scalar["mode"] = "quadratic";
        scalar["d"] = detail::system_radicand(sys);
    } else if constexpr (std::is_same_v<S, double>) {
        scalar["mode"] = "float64";
    } else {
        scalar["mode"] = "rational";
    }
    doc["scalar"] = scalar;
    return doc;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return doc;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << text;
}

// ---------------------------------------------------------------------------
// CSV exports

template <class S>
std::string density_to_csv(const StepFunction<S>& h) {
    std::ostringstream os;
    os << "left,right,value,value_float\n";
    for (size_t t = 0; t < h.piece_count(); ++t) {
        auto p = h.piece(t);
        os << scalar_to_string(p.left) << "," << scalar_to_string(p.right) << "," << scalar_to_string(p.value) << ","
           << scalar_to_string(to_double(p.value)) << "\n";
    }
    return os.str();
}

template <class S>
StepFunction<S> density_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("density csv: empty");
    std::vector<typename StepFunction<S>::Piece> pieces;
    S lo{}, hi{};
    bool have_domain = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string left, right, value;
        if (!std::getline(ls, left, ',') || !std::getline(ls, right, ',') || !std::getline(ls, value, ','))
            throw std::invalid_argument("density csv: bad row '" + line + "'");
        S l = parse_scalar<S>(left), r = parse_scalar<S>(right), v = parse_scalar<S>(value);
        if (!have_domain) {
            lo = l;
            have_domain = true;
        }
        hi = r;
        pieces.push_back({std::move(l), std::move(r), std::move(v)});
    }
    if (pieces.empty()) throw std::invalid_argument("density csv: no pieces");
    return StepFunction<S>::from_pieces(lo, hi, std::move(pieces));
}

template <class S>
std::string density_plot_csv(const StepFunction<S>& h, size_t points) {
    if (points < 2) points = 2;
    std::ostringstream os;
    os << "x,h\n";
    double lo = to_double(h.domain_lo()), hi = to_double(h.domain_hi());
    for (size_t t = 0; t < points; ++t) {
        double x = lo + (hi - lo) * double(t) / double(points - 1);
        S xs = scalar_traits<S>::from_double(x);
        if (xs < h.domain_lo()) xs = h.domain_lo();
        if (xs > h.domain_hi()) xs = h.domain_hi();
        os << scalar_to_string(x) << "," << scalar_to_string(to_double(h.value_at(xs))) << "\n";
    }
    return os.str();
}

template <class S>
std::string closure_to_csv(const OrbitClosure<S>& closure) {
    std::ostringstream os;
    os << "point,map,target,weight\n";
    for (size_t u = 0; u < closure.points.size(); ++u)
        for (size_t j = 0; j < closure.target[u].size(); ++j) {
            os << scalar_to_string(closure.points[u]) << "," << j << ",";
            if (closure.target[u][j] == OrbitClosure<S>::npos)
                os << "unexplored";
            else
                os << scalar_to_string(closure.points[closure.target[u][j]]);
            os << "," << scalar_to_string(closure.weight[u][j]) << "\n";
        }
    return os.str();
}

template <class S>
std::string matrix_to_csv(const FundamentalMatrix<S>& m) {
    std::ostringstream os;
    for (const auto& row : m.entries) {
        for (size_t c = 0; c < row.size(); ++c) os << scalar_to_string(row[c]) << (c + 1 < row.size() ? "," : "");
        os << "\n";
    }
    return os.str();
}

inline std::string histogram_to_csv(const HistogramReport& rep) {
    std::ostringstream os;
    os << "bin_left,bin_right,empirical,exact,diff\n";
    for (const auto& row : rep.rows)
        os << scalar_to_string(row.bin_left) << "," << scalar_to_string(row.bin_right) << ","
           << scalar_to_string(row.empirical) << "," << scalar_to_string(row.exact) << ","
           << scalar_to_string(row.empirical - row.exact) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Run report

template <class S>
json validation_to_json(const ValidationReport<S>& v) {
    json j;
    j["rho"] = scalar_to_string(v.rho);
    j["rho_float"] = to_double(v.rho);
    j["a1_ok"] = v.a1_ok;
    j["a2_ok"] = v.a2_ok;
    j["a3_ok"] = v.a3_ok;
    j["a4_ok"] = v.a4_ok;
    j["diagnostics"] = v.diagnostics;
    return j;
}

template <class S>
json density_to_json(const StepFunction<S>& h) {
    json rows = json::array();
    for (size_t t = 0; t < h.piece_count(); ++t) {
        auto p = h.piece(t);
        rows.push_back({{"left", scalar_to_string(p.left)},
                        {"right", scalar_to_string(p.right)},
                        {"value", scalar_to_string(p.value)},
                        {"value_float", to_double(p.value)}});
    }
    return rows;
}

template <class S>
json report_to_json(const RandomSystem<S>& sys, const PipelineResult<S>& res) {
    json j;
    j["system"] = {{"intervals", sys.interval_count()},
                   {"maps", sys.map_count()},
                   {"domain", {scalar_to_string(sys.domain_lo()), scalar_to_string(sys.domain_hi())}},
                   {"scalar_mode", scalar_traits<S>::name}};
    j["validation"] = validation_to_json(res.validation);
    j["mode"] = res.matrix.mode == MatrixMode::Exact ? "exact" : "truncated";
    j["closure"] = {{"status", res.closure_status == ClosureStatus::Finite ? "finite" : "truncated"},
                    {"points", res.closure_points}};
    json mat = json::array();
    for (const auto& row : res.matrix.entries) {
        json r = json::array();
        for (const S& v : row) r.push_back(scalar_to_string(v));
        mat.push_back(r);
    }
    j["matrix"] = mat;
    if (res.matrix.mode == MatrixMode::Truncated) j["matrix_entry_bound"] = res.matrix.error_bound;
    json kern = json::array();
    for (const auto& vec : res.kernel.vectors) {
        json r = json::array();
        for (const S& v : vec) r.push_back(scalar_to_string(v));
        kern.push_back(r);
    }
    j["kernel"] = {{"dimension", res.kernel.vectors.size()}, {"vectors", kern}, {"exact", res.kernel.exact}};
    if (!res.kernel.exact) {
        j["kernel"]["singular_values"] = res.kernel.singular_values;
        j["kernel"]["rank_threshold"] = res.kernel.rank_threshold;
        j["kernel"]["warnings"] = res.kernel.warnings;
    }
    json sols = json::array();
    for (const auto& sol : res.solutions) {
        json s;
        json g = json::array();
        for (const S& v : sol.gamma) g.push_back(scalar_to_string(v));
        s["gamma"] = g;
        s["densities"] = json::array();
        for (const auto& d : sol.densities) {
            json dj;
            dj["label"] = d.label;
            dj["pieces"] = density_to_json(d.density);
            dj["verification"] = {{"exact_equal", d.invariance.exact_equal},
                                  {"l1_residual", to_double(d.invariance.l1_residual)},
                                  {"sup_residual", to_double(d.invariance.sup_residual)},
                                  {"pass", d.invariance.pass}};
            s["densities"].push_back(dj);
        }
        sols.push_back(s);
    }
    j["solutions"] = sols;
    j["notes"] = res.notes;
    return j;
}

}  // namespace rpls
