#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rpls;

namespace {

template <class S>
bool systems_identical(const RandomSystem<S>& a, const RandomSystem<S>& b) {
    return a.partition == b.partition && a.flags == b.flags && a.slopes == b.slopes &&
           a.intercepts == b.intercepts && a.probs == b.probs;
}

}  // namespace

TEST_CASE("system JSON round-trips exactly", "[io]") {
    auto luroth = make_luroth23(Rational(2, 7));
    json doc = system_to_json(luroth);
    CHECK(scalar_mode_of(doc) == ScalarMode::Rational);
    CHECK(systems_identical(system_from_json<Rational>(doc), luroth));

    auto gsys = make_random_beta(Quadratic::golden_ratio(), Quadratic(Rational(1, 3)));
    json gdoc = system_to_json(gsys);
    CHECK(scalar_mode_of(gdoc) == ScalarMode::Quadratic);
    CHECK(gdoc["scalar"]["d"] == 5);
    CHECK(systems_identical(system_from_json<Quadratic>(gdoc), gsys));

    // quadratic documents also load into the float backend
    auto fsys = system_from_json<double>(gdoc);
    CHECK(fsys.partition.back() == Catch::Approx((1 + std::sqrt(5.0)) / 2));
}

TEST_CASE("malformed documents are rejected with the field name", "[io]") {
    auto base = system_to_json(make_luroth23(Rational(1, 3)));

    json bad = base;
    bad.erase("probs");
    CHECK_THROWS_WITH(system_from_json<Rational>(bad), Catch::Matchers::ContainsSubstring("probs"));

    bad = base;
    bad["probs"] = {"1/2", "2/5"};  // sums to 0.9
    CHECK_THROWS_WITH(system_from_json<Rational>(bad), Catch::Matchers::ContainsSubstring("probs"));

    bad = base;
    bad["partition"][1] = "1/3";
    CHECK_THROWS_WITH(system_from_json<Rational>(bad), Catch::Matchers::ContainsSubstring("partition"));

    bad = base;
    bad["domain"][1] = "2";
    CHECK_THROWS_WITH(system_from_json<Rational>(bad), Catch::Matchers::ContainsSubstring("domain"));

    bad = base;
    bad["flags"][0] = "X";
    CHECK_THROWS_WITH(system_from_json<Rational>(bad), Catch::Matchers::ContainsSubstring("flags"));

    bad = base;
    bad["slopes"][0][0] = "nonsense";
    CHECK_THROWS_WITH(system_from_json<Rational>(bad), Catch::Matchers::ContainsSubstring("slopes"));
}

TEST_CASE("density CSV round-trips exactly", "[io]") {
    auto res = run_pipeline(make_luroth23(Rational(1, 3)));
    const auto& h = unique_density(res);
    CHECK(density_from_csv<Rational>(density_to_csv(h)) == h);

    auto gres = run_pipeline(make_random_beta(Quadratic::golden_ratio(), Quadratic(Rational(1, 2))));
    const auto& gh = unique_density(gres);
    CHECK(density_from_csv<Quadratic>(density_to_csv(gh)) == gh);

    CHECK_THROWS_AS(density_from_csv<Rational>("left,right,value\n"), std::invalid_argument);
}

TEST_CASE("csv exports carry the advertised columns", "[io]") {
    auto luroth = make_luroth23(Rational(1, 3));
    auto closure = orbit_closure(luroth, critical_seed_points(luroth));
    std::string csv = closure_to_csv(closure);
    CHECK(csv.rfind("point,map,target,weight\n", 0) == 0);

    SimConfig cfg;
    cfg.n_orbits = 2;
    cfg.n_steps = 2000;
    auto density = unique_density(run_pipeline(luroth));
    std::string hist = histogram_to_csv(histogram_distance(luroth, density, cfg));
    CHECK(hist.rfind("bin_left,bin_right,empirical,exact,diff\n", 0) == 0);

    std::string plot = density_plot_csv(density, 16);
    CHECK(plot.rfind("x,h\n", 0) == 0);
    CHECK(std::count(plot.begin(), plot.end(), '\n') == 17);
}

TEST_CASE("run report attaches verification to every density", "[io]") {
    auto sys = make_random_beta(Quadratic::golden_ratio(), Quadratic(Rational(1, 3)));
    auto res = run_pipeline(sys);
    json rep = report_to_json(sys, res);
    CHECK(rep["kernel"]["dimension"] == 1);
    CHECK(rep["mode"] == "exact");
    REQUIRE(rep["solutions"].size() == 1);
    for (const auto& sol : rep["solutions"]) {
        REQUIRE(!sol["densities"].empty());
        for (const auto& d : sol["densities"]) {
            CHECK(d.contains("verification"));
            CHECK(d["verification"]["pass"] == true);
        }
    }
}

TEST_CASE("random rational systems survive the JSON round-trip", "[io]") {
    std::mt19937 rng(31);
    for (int t = 0; t < 25; ++t) {
        auto sys = make_luroth23(testing::random_probability(rng));
        CHECK(systems_identical(system_from_json<Rational>(system_to_json(sys)), sys));
    }
}
