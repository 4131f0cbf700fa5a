#include <doctest.h>

#include <cmath>

#include "opineq/functions.hpp"

using namespace opineq;

TEST_CASE("catalog values and flags") {
    const auto p3 = builtin("pow", 3);
    CHECK(p3.support_constant(2.0) == doctest::Approx(12.0)); // f'(x) = 3x^2
    CHECK(p3.flags().superquadratic);
    CHECK(p3.flags().convex);
    CHECK(p3.flags().nonnegative);
    CHECK(!p3.flags().subquadratic);

    const auto p2 = builtin("pow", 2);
    CHECK(p2(1.5) == doctest::Approx(2.25));
    CHECK(p2.flags().superquadratic);
    CHECK(p2.flags().subquadratic); // t^2 sits on the boundary of both classes

    const auto p15 = builtin("pow", 1.5);
    CHECK(p15.flags().subquadratic);
    CHECK(p15.flags().convex);
    CHECK(!p15.flags().superquadratic);

    const auto sq1 = builtin("square_minus_c", 1);
    CHECK(sq1(0.0) == doctest::Approx(-1.0)); // f(0) <= 0 for superquadratic f
    CHECK(sq1.flags().superquadratic);
    CHECK(!sq1.flags().nonnegative);

    const auto ab = builtin("abs");
    CHECK(ab.support_constant(2.0) == 1.0);
    CHECK(ab.support_constant(-2.0) == -1.0);
    CHECK(ab.support_constant(0.0) == 0.0);
    CHECK(ab.flags().convex);

    const auto id = builtin("identity");
    CHECK(id.flags().convex);
    CHECK(id.flags().concave);

    const auto ec = builtin("exp_centered");
    CHECK(ec(0.0) == 0.0);
    CHECK(ec.derivative(0.0) == 0.0);
    CHECK(ec.flags().superquadratic);

    const auto rp = builtin("relu_power", 2);
    CHECK(rp(-3.0) == 0.0);
    CHECK(rp(2.0) == doctest::Approx(4.0));
    CHECK(rp.flags().convex);
    CHECK(!rp.flags().superquadratic);

    CHECK_THROWS_AS(builtin("nope"), UnknownFunction);
    CHECK_THROWS_AS(builtin("pow", 0.5), BadParameter);
    CHECK_THROWS_AS(builtin("relu_power", 1.5), BadParameter);
    CHECK_THROWS_AS(builtin("square_minus_c", -1), BadParameter);
}

TEST_CASE("spec strings parse and round-trip") {
    CHECK(parse_function_spec("pow:3").name() == "pow:3");
    CHECK(parse_function_spec("pow:1.5").name() == "pow:1.5");
    CHECK(parse_function_spec("abs").name() == "abs");
    CHECK(parse_function_spec("id").name() == "id");
    CHECK(parse_function_spec("sqmc:1").name() == "sqmc:1");
    CHECK(parse_function_spec("expc").name() == "expc");
    CHECK(parse_function_spec("relupow:2").name() == "relupow:2");
    CHECK_THROWS_AS(parse_function_spec("pow"), BadParameter);
    CHECK_THROWS_AS(parse_function_spec("what:3"), UnknownFunction);
}

TEST_CASE("superquadratic grid check: t^2 is the equality case") {
    const auto g = linear_grid(0.0, 10.0, 50);
    const auto report = check_superquadratic_grid(builtin("pow", 2), g, g, 1e-9);
    CHECK(report.violations.empty());
    CHECK(report.max_violation == 0.0);
    // t^2 = x^2 + 2x(t-x) + (t-x)^2 is an identity, so residuals vanish
    CHECK(std::abs(report.min_residual) <= 1e-12);
    CHECK(std::abs(report.max_residual) <= 1e-12);
}

TEST_CASE("superquadratic grid check: pow(3) clean, oracle agrees") {
    const auto g = log_spaced_grid(0.01, 100.0, 50);
    const auto f = builtin("pow", 3);
    const auto report = check_superquadratic_grid(f, g, g, 1e-9);
    CHECK(report.violations.empty());
    // independent residual scan with direct scalar arithmetic
    double min_res = 1e300;
    for (double x : g)
        for (double t : g) {
            const double res = std::pow(t, 3) - std::pow(x, 3) - 3.0 * x * x * (t - x) -
                               std::pow(std::abs(t - x), 3);
            min_res = std::min(min_res, res);
        }
    CHECK(min_res >= -1e-9);
    CHECK(report.min_residual == doctest::Approx(min_res).epsilon(1e-12));
}

TEST_CASE("superquadratic grid check: pow(1.5) fails, residual at (1,4) as computed by hand") {
    const auto f = builtin("pow", 1.5);
    const auto report = check_superquadratic_grid(f, {1.0}, {4.0}, 1e-9);
    REQUIRE(report.violations.size() == 1);
    const double expected = 8.0 - (1.0 + 4.5 + std::pow(3.0, 1.5));
    CHECK(report.violations[0].residual == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected < -2.6);

    const auto g = log_spaced_grid(0.01, 100.0, 50);
    CHECK(!check_superquadratic_grid(f, g, g, 1e-9).violations.empty());
}

TEST_CASE("convex support check") {
    // |t| has a support line of slope 0 at the origin
    const auto ab = builtin("abs");
    const auto rep = check_convex_support(ab, {0.0}, {-3.0}, 1e-12);
    CHECK(rep.violations.empty());
    CHECK(rep.min_residual == doctest::Approx(3.0));

    const auto id = builtin("identity");
    const auto g = linear_grid(-5.0, 5.0, 30);
    const auto rid = check_convex_support(id, g, g, 1e-12);
    CHECK(rid.violations.empty());
    CHECK(std::abs(rid.min_residual) <= 1e-14);

    const auto p2 = builtin("pow", 2);
    const auto gp = linear_grid(0.0, 10.0, 30);
    CHECK(check_convex_support(p2, gp, gp, 1e-12).violations.empty());

    CHECK_THROWS_AS(check_convex_support(p2, {-1.0}, {1.0}, 1e-9), DomainViolation);
}

TEST_CASE("lemma-style construction guards") {
    ScalarFunction::Flags flags;
    flags.superquadratic = true;
    CHECK_THROWS_AS(ScalarFunction("bad", Interval::nonnegative_reals(),
                                   [](double) { return 1.0; }, std::nullopt, flags),
                    BadParameter);
}

TEST_CASE("nonnegative superquadratic catalog entries behave like Lemma 1(3)") {
    for (const auto& f : {builtin("pow", 2), builtin("pow", 3), builtin("exp_centered")}) {
        REQUIRE(f.flags().superquadratic);
        REQUIRE(f.flags().nonnegative);
        CHECK(f.flags().convex);
        CHECK(f(0.0) == 0.0);
        CHECK(f.support_constant(0.0) == 0.0);
        CHECK(midpoint_convexity_margin([&f](double t) { return f(t); }, 0.0, 50.0) >= -1e-12);
    }
}

TEST_CASE("lemma 2 numerically: pow(p>=2) and exp_centered are clean on the log grid") {
    const auto g = log_spaced_grid(0.01, 100.0, 50);
    for (const auto& f : {builtin("pow", 2), builtin("pow", 2.5), builtin("pow", 4),
                          builtin("exp_centered")}) {
        const auto report = check_superquadratic_grid(f, g, g, 1e-9);
        CHECK(report.violations.empty());
    }
}

TEST_CASE("subquadratic-but-convex: pow(1.5) passes the support check, fails Eq-style check") {
    const auto f = builtin("pow", 1.5);
    REQUIRE(f.flags().subquadratic);
    REQUIRE(f.flags().convex);
    const auto g = log_spaced_grid(0.01, 100.0, 50);
    CHECK(check_convex_support(f, g, g, 1e-9).violations.empty());
    CHECK(!check_superquadratic_grid(f, g, g, 1e-9).violations.empty());
}

TEST_CASE("central-difference fallback agrees with closed-form derivatives") {
    for (const auto& f : {builtin("pow", 2), builtin("pow", 3), builtin("exp_centered")}) {
        ScalarFunction no_deriv("nd", f.domain(), [&f](double t) { return f(t); }, std::nullopt,
                                ScalarFunction::Flags{});
        for (double x : {0.5, 1.0, 2.0, 4.0})
            CHECK(no_deriv.support_constant(x) ==
                  doctest::Approx(f.support_constant(x)).epsilon(1e-5));
    }
}

TEST_CASE("support constant override hook") {
    const auto f = builtin("pow", 2).with_support_constant([](double) { return 0.0; });
    CHECK(f.support_constant(3.0) == 0.0);
    CHECK(f(3.0) == doctest::Approx(9.0)); // evaluation unchanged
}
