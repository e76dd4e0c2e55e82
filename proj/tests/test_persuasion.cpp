#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gossip/error.hpp"
#include "gossip/persuasion.hpp"
#include "gossip/rng.hpp"

using namespace gossip;

TEST_SUITE("persuasion")
{
TEST_CASE("linear: standard but not strong")
{
    const auto r = validate_assumptions(PersuasionFunction::linear());
    CHECK(r.standard());
    CHECK_FALSE(r.strong());
    CHECK_FALSE(r.slope_below_value_at_zero);
}

TEST_CASE("constant 0.3: standard and strong")
{
    const auto r = validate_assumptions(PersuasionFunction::parse("constant:0.3"));
    CHECK(r.standard());
    CHECK(r.strong());
}

TEST_CASE("1 - z fails monotonicity with a witness")
{
    const auto r = validate_assumptions(PersuasionFunction::parse("poly:1,-1"));
    CHECK_FALSE(r.nondecreasing);
    CHECK_FALSE(r.standard());
    REQUIRE(r.witness.has_value());
    CHECK(*r.witness >= 0.0);
    CHECK(*r.witness <= 1.0);
}

TEST_CASE("convex function fails concavity")
{
    const auto r = validate_assumptions(PersuasionFunction::parse("poly:0,0,1"));
    CHECK(r.nondecreasing);
    CHECK_FALSE(r.concave);
}

TEST_CASE("closed-form outcomes do not depend on the grid size")
{
    for (std::size_t grid : {3, 4, 5, 11, 100, 1001, 4096}) {
        CAPTURE(grid);
        const auto lin = validate_assumptions(PersuasionFunction::linear(), grid);
        CHECK(lin.standard());
        CHECK_FALSE(lin.strong());
        for (double c : {0.0, 0.3, 1.0}) {
            const auto con = validate_assumptions(PersuasionFunction::constant(c), grid);
            CHECK(con.standard());
            // φ′(0) = 0 < φ(0) = c holds exactly when c > 0
            CHECK(con.strong() == (c > 0.0));
        }
    }
    CHECK_THROWS_AS(validate_assumptions(PersuasionFunction::linear(), 2), invalid_argument);
}

TEST_CASE("values outside [0, 1] raise an assumption error with a witness")
{
    try {
        validate_assumptions(PersuasionFunction::parse("poly:0,2"));
        FAIL("expected assumption_error");
    } catch (const assumption_error& e) {
        CHECK(e.witness() > 0.5);
        CHECK(e.witness() <= 1.0);
    }
    CHECK_THROWS_AS(validate_assumptions(PersuasionFunction::parse("poly:-0.1,1")), assumption_error);
}

TEST_CASE("sqrt is standard and not strong")
{
    const auto phi = PersuasionFunction::custom("sqrt", [](double z) { return std::sqrt(z); });
    const auto r = validate_assumptions(phi);
    CHECK(r.standard());
    CHECK_FALSE(r.strong());
}

TEST_CASE("tabulated interpolation stays within the hull of the table values")
{
    rng_t engine(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t points = 2 + uniform_index(engine, 8);
        std::vector<double> grid{0.0}, values;
        for (std::size_t i = 1; i + 1 < points; ++i)
            grid.push_back(static_cast<double>(i) / static_cast<double>(points - 1));
        grid.push_back(1.0);
        for (std::size_t i = 0; i < points; ++i)
            values.push_back(uniform01(engine));
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        const auto phi = PersuasionFunction::tabulated(grid, values);
        for (int i = 0; i <= 1000; ++i) {
            const double v = phi(i / 1000.0);
            CHECK(v >= *lo);
            CHECK(v <= *hi);
        }
        for (std::size_t i = 0; i < points; ++i)
            CHECK(phi(grid[i]) == values[i]);
    }
}

TEST_CASE("tabulated concave table passes the standard checks")
{
    const auto phi = PersuasionFunction::parse("table:0:0.1,0.5:0.6,1:0.8");
    const auto r = validate_assumptions(phi);
    CHECK(r.standard());
    CHECK(phi(0.25) == doctest::Approx(0.35));
}

TEST_CASE("parse and to_string round trip")
{
    for (const char* spec : {"linear", "constant:0.3", "poly:0.1,0.5,-0.2", "table:0:0,0.5:0.7,1:1"}) {
        const auto phi = PersuasionFunction::parse(spec);
        const auto again = PersuasionFunction::parse(phi.to_string());
        CHECK(again.to_string() == phi.to_string());
        for (int i = 0; i <= 20; ++i)
            CHECK(again(i / 20.0) == phi(i / 20.0));
    }
    CHECK(PersuasionFunction::parse("linear").kind() == PersuasionFunction::Kind::linear);
    CHECK(PersuasionFunction::parse("poly:0.1,0.5").coefficients() == std::vector<double>{0.1, 0.5});
}

TEST_CASE("malformed specs")
{
    for (const char* spec : {"", "quadratic", "constant:", "constant:abc", "constant:1.5", "poly:", "poly:1,x",
                             "table:0:0", "table:0.2:0,1:1", "table:0:0,1"}) {
        CAPTURE(spec);
        CHECK_THROWS_AS(PersuasionFunction::parse(spec), invalid_argument);
    }
}
}
