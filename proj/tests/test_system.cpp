#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace rpls;

namespace {

// (alpha,beta)-mix without the gallery's p-range precondition, for
// probing exactly when the averaged-expansion check fails.
RandomSystem<Rational> alpha_beta_raw(const Rational& alpha, const Rational& beta, const Rational& p) {
    RandomSystem<Rational> sys;
    sys.partition = {Rational(0), 1 / beta, Rational(1), 1 / (beta - 1)};
    sys.flags = {Membership::Right, Membership::Left};
    sys.slopes = {{beta, beta}, {alpha, beta}, {beta, beta}};
    sys.intercepts = {{Rational(0), Rational(0)}, {-alpha / beta, Rational(-1)}, {Rational(-1), Rational(-1)}};
    sys.probs = {p, 1 - p};
    check_structure(sys);
    return sys;
}

}  // namespace

TEST_CASE("gallery systems match their defining data", "[system]") {
    auto luroth = make_luroth23(Rational(1, 3));
    std::vector<Rational> expected = {Rational(1, 3), Rational(7, 18), Rational(4, 9), Rational(1, 2),
                                      Rational(2, 3), Rational(5, 6),  Rational(1)};
    CHECK(luroth.partition == expected);

    Quadratic beta = Quadratic::golden_ratio();
    auto gb = make_random_beta(beta, Quadratic(Rational(1, 2)));
    for (size_t i = 1; i <= gb.interval_count(); ++i)
        for (size_t j = 0; j < gb.map_count(); ++j) CHECK(gb.slope(i, j) == beta);
    CHECK(gb.partition[2] == Quadratic(1));  // 1/(beta(beta-1)) = 1 at the golden mean

    auto ab = make_random_alpha_beta(Quadratic(1) / beta, beta, Quadratic(Rational(1, 4)));
    CHECK(ab.slope(2, 0) == Quadratic(1) / beta);
    CHECK(ab.intercept(2, 0) == -(Quadratic(1) / beta) / beta);

    CHECK_THROWS_AS(make_random_beta(Rational(5, 2), Rational(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(make_random_beta(Rational(3, 2), Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(make_luroth23(Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(make_single_map<Rational>(1), std::invalid_argument);
}

TEST_CASE("branch_index honors membership flags", "[system]") {
    Quadratic beta = Quadratic::golden_ratio();
    auto sys = make_random_beta(beta, Quadratic(Rational(1, 2)));
    // z_1, z_2 both sit in I_2
    CHECK(branch_index(sys, sys.partition[1]) == 2);
    CHECK(branch_index(sys, sys.partition[2]) == 2);
    CHECK(branch_index(sys, Quadratic(0)) == 1);
    CHECK(branch_index(sys, sys.domain_hi()) == 3);

    auto luroth = make_luroth23(Rational(1, 3));
    CHECK(branch_index(luroth, Rational(7, 18)) == 1);  // flag L
    CHECK(branch_index(luroth, Rational(2, 5)) == 2);   // interior of I_2

    auto flipped = flip_membership(luroth, 1);
    CHECK(branch_index(flipped, Rational(7, 18)) == 2);

    CHECK_THROWS_AS(branch_index(luroth, Rational(0)), std::domain_error);
}

TEST_CASE("apply_map follows the branch tables", "[system]") {
    Quadratic beta = Quadratic::golden_ratio();
    auto sys = make_random_beta(beta, Quadratic(Rational(1, 2)));
    CHECK(apply_map(sys, 1, Quadratic(1)) == beta - Quadratic(1));  // greedy: beta*1 - 1
    CHECK(apply_map(sys, 0, Quadratic(0)) == Quadratic(0));         // fixed point

    auto luroth = make_luroth23(Rational(1, 2));
    CHECK(apply_map(luroth, 0, Rational(1, 2)) == Rational(1));  // 6x - 2 on I_3
    // forward invariance of every branch image is a structural invariant
    for (size_t j = 0; j < luroth.map_count(); ++j) {
        Rational x(5, 7);
        for (int t = 0; t < 20; ++t) {
            x = apply_map(luroth, j, x);
            CHECK(x >= luroth.domain_lo());
            CHECK(x <= luroth.domain_hi());
        }
    }
}

TEST_CASE("critical images", "[system]") {
    Quadratic beta = Quadratic::golden_ratio();
    Quadratic one(1);
    auto sys = make_random_beta(beta, Quadratic(Rational(1, 3)));
    auto crit = critical_images(sys);
    CHECK(crit.left[0][0] == one);
    CHECK(crit.right[0][0] == one);
    CHECK(crit.right[0][1] == Quadratic(0));
    CHECK(crit.left[1][0] == beta);
    CHECK(crit.right[1][0] == one / beta);
    CHECK(crit.left[1][1] == one / beta);

    auto luroth = make_luroth23(Rational(2, 7));
    auto lc = critical_images(luroth);
    for (const auto& row : {lc.left, lc.right})
        for (const auto& vals : row)
            for (const auto& v : vals)
                CHECK((v == Rational(1, 3) || v == Rational(2, 3) || v == Rational(1)));

    // flag-independence: flip every flag, recompute, exact equality
    auto flipped = critical_images(flip_all_memberships(luroth));
    CHECK(lc.left == flipped.left);
    CHECK(lc.right == flipped.right);
}

TEST_CASE("validate accepts the gallery", "[system]") {
    Quadratic beta = Quadratic::golden_ratio();
    auto rep = validate(make_random_beta(beta, Quadratic(Rational(1, 2))));
    CHECK(rep.all_ok());
    CHECK(rep.rho == Quadratic(1) / beta);

    auto ab = validate(make_random_alpha_beta(Quadratic(1) / beta, beta, Quadratic(Rational(1, 4))));
    CHECK(ab.all_ok());

    CHECK(validate(make_luroth23(Rational(1, 2))).all_ok());
    CHECK(validate(make_single_map<Rational>(2)).all_ok());
}

TEST_CASE("validate rejects broken assumptions", "[system]") {
    // all slopes 1: averaged expansion fails with rho = 1
    RandomSystem<Rational> ident;
    ident.partition = {Rational(0), Rational(1, 2), Rational(1)};
    ident.flags = {Membership::Left};
    ident.slopes = {{Rational(1)}, {Rational(1)}};
    ident.intercepts = {{Rational(0)}, {Rational(0)}};
    ident.probs = {Rational(1)};
    check_structure(ident);
    auto rep = validate(ident);
    CHECK_FALSE(rep.a2_ok);
    CHECK(rep.rho == Rational(1));

    // single interval: the diagonal-intersection points trivially coincide
    RandomSystem<Rational> single;
    single.partition = {Rational(0), Rational(1)};
    single.flags = {};
    single.slopes = {{Rational(1)}};
    single.intercepts = {{Rational(0)}};
    single.probs = {Rational(1)};
    check_structure(single);
    auto srep = validate(single);
    CHECK_FALSE(srep.a3_ok);
    CHECK_FALSE(srep.a2_ok);
    CHECK(srep.a4_ok);

    // endpoint mapping violated: right branch ends at 3/4 instead of 1
    RandomSystem<Rational> bad;
    bad.partition = {Rational(0), Rational(1, 2), Rational(1)};
    bad.flags = {Membership::Left};
    bad.slopes = {{Rational(2)}, {Rational(3, 2)}};
    bad.intercepts = {{Rational(0)}, {Rational(-3, 4)}};
    bad.probs = {Rational(1)};
    check_structure(bad);
    auto brep = validate(bad);
    CHECK(brep.a2_ok);
    CHECK_FALSE(brep.a4_ok);
}

TEST_CASE("structure violations are rejected with named fields", "[system]") {
    auto sys = make_luroth23(Rational(1, 3));
    auto broken = sys;
    broken.probs = {Rational(1, 2), Rational(2, 5)};  // sums to 0.9
    CHECK_THROWS_WITH(check_structure(broken), Catch::Matchers::ContainsSubstring("probs"));
    broken = sys;
    broken.partition[1] = Rational(1, 3);
    CHECK_THROWS_WITH(check_structure(broken), Catch::Matchers::ContainsSubstring("partition"));
    broken = sys;
    broken.slopes[2][0] = Rational(0);
    CHECK_THROWS_WITH(check_structure(broken), Catch::Matchers::ContainsSubstring("slope"));
    broken = sys;
    broken.intercepts[2][0] = Rational(5);
    CHECK_THROWS_WITH(check_structure(broken), Catch::Matchers::ContainsSubstring("image"));
}

TEST_CASE("averaged expansion matches the p-range bound for random draws", "[system]") {
    std::mt19937 rng(17);
    int checked = 0;
    while (checked < 100) {
        // random rational alpha in (0,1), beta in (1,2), p in (0,1)
        Rational alpha = testing::random_probability(rng);
        Rational beta = Rational(1) + testing::random_probability(rng);
        Rational p = testing::random_probability(rng);
        RandomSystem<Rational> sys;
        try {
            sys = alpha_beta_raw(alpha, beta, p);
        } catch (const std::invalid_argument&) {
            continue;  // degenerate draw (e.g. collapsed partition)
        }
        bool in_range = p < alpha * (beta - 1) / (beta - alpha);
        CHECK(validate(sys).a2_ok == in_range);
        ++checked;
    }
}

TEST_CASE("partition refinement keeps the maps", "[system]") {
    auto luroth = make_luroth23(Rational(1, 3));
    auto refined = refine_partition(luroth, Rational(3, 5));
    CHECK(refined.interval_count() == luroth.interval_count() + 1);
    for (Rational x : {Rational(25, 72), Rational(9, 20), Rational(31, 40), Rational(17, 18)})
        for (size_t j = 0; j < luroth.map_count(); ++j) CHECK(apply_map(refined, j, x) == apply_map(luroth, j, x));
    CHECK_THROWS_AS(refine_partition(luroth, Rational(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(refine_partition(luroth, Rational(2)), std::invalid_argument);
}
