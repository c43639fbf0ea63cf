#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace rpls;
using SF = StepFunction<Rational>;

TEST_CASE("construction canonicalizes", "[step]") {
    SF c = SF::constant(Rational(0), Rational(1), Rational(2));
    CHECK(c.piece_count() == 1);
    CHECK(c.integral() == Rational(2));

    // overlapping pieces add up
    SF f = SF::from_pieces(Rational(0), Rational(1),
                           {{Rational(0), Rational(1), Rational(1)}, {Rational(1, 2), Rational(1), Rational(1)}});
    REQUIRE(f.piece_count() == 2);
    CHECK(f.value_at(Rational(1, 4)) == Rational(1));
    CHECK(f.value_at(Rational(3, 4)) == Rational(2));
    CHECK(f.integral() == Rational(3, 2));

    // adjacent equal values merge
    SF g = SF::from_pieces(Rational(0), Rational(1),
                           {{Rational(0), Rational(1, 2), Rational(1)}, {Rational(1, 2), Rational(1), Rational(1)}});
    CHECK(g.piece_count() == 1);
    CHECK(g == SF::constant(Rational(0), Rational(1), Rational(1)));

    // indicator over the full domain is a.e. the constant 1
    CHECK(SF::indicator(Rational(0), Rational(1), Rational(0), Rational(1)) ==
          SF::constant(Rational(0), Rational(1), Rational(1)));
    // empty indicator is the zero function
    CHECK(SF::indicator(Rational(0), Rational(1), Rational(1, 2), Rational(1, 2)).is_zero());
}

TEST_CASE("integral over subintervals", "[step]") {
    SF f = SF::from_pieces(Rational(0), Rational(2),
                           {{Rational(0), Rational(1), Rational(3)}, {Rational(1), Rational(2), Rational(-1)}});
    CHECK(f.integral() == Rational(2));
    CHECK(f.integral(Rational(1, 2), Rational(3, 2)) == Rational(3, 2) - Rational(1, 2));
    CHECK(f.integral(Rational(0), Rational(0)) == Rational(0));
    CHECK_THROWS_AS(f.integral(Rational(1), Rational(0)), std::invalid_argument);
}

TEST_CASE("algebra and distances", "[step]") {
    std::mt19937 rng(3);
    for (int t = 0; t < 40; ++t) {
        SF f = testing::random_step_function<Rational>(rng, Rational(0), Rational(1));
        SF g = testing::random_step_function<Rational>(rng, Rational(0), Rational(1));
        CHECK((f + g).integral() == f.integral() + g.integral());
        CHECK(l1_distance(f, f) == Rational(0));
        CHECK(l1_distance(f, g) == l1_distance(g, f));
        CHECK(f.scaled(Rational(3)).integral() == Rational(3) * f.integral());
        CHECK(f - g == (g - f).scaled(Rational(-1)));
        // sign split reassembles the function
        CHECK(f.positive_part() - f.negative_part() == f);
    }
    SF a = SF::constant(Rational(0), Rational(1), Rational(1));
    SF b = SF::from_pieces(Rational(0), Rational(1), {{Rational(0), Rational(1, 2), Rational(2)}});
    CHECK(l1_distance(a, b) == Rational(1));
    CHECK(sup_distance(a, b) == Rational(1));
}

TEST_CASE("domain mismatch is rejected", "[step]") {
    SF a = SF::constant(Rational(0), Rational(1), Rational(1));
    SF b = SF::constant(Rational(0), Rational(2), Rational(1));
    CHECK_THROWS_AS(a + b, std::invalid_argument);
    CHECK_THROWS_AS(l1_distance(a, b), std::invalid_argument);
    CHECK_THROWS_AS(a.value_at(Rational(3)), std::domain_error);
}

TEST_CASE("float backend merges within tolerance", "[step]") {
    StepFunction<double> f = StepFunction<double>::from_pieces(
        0.0, 1.0, {{0.0, 0.5, 1.0}, {0.5 + 1e-14, 1.0, 1.0 + 1e-14}});
    CHECK(f.piece_count() == 1);
}
