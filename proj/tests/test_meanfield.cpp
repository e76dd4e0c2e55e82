#include <doctest.h>

#include <cmath>

#include "gossip/error.hpp"
#include "gossip/meanfield.hpp"

using namespace gossip;

namespace {

const PersuasionFunction linear = PersuasionFunction::linear();

// Closed-form roots of β(1 - z)z = 1.
std::pair<double, double> linear_roots(double beta)
{
    const double r = std::sqrt(1.0 - 4.0 / beta);
    return {0.5 - 0.5 * r, 0.5 + 0.5 * r};
}

// Maximizer of (1 - z)√z from g′(z) = (1 - 3z) / (2√z): bisection on the
// sign of the numerator, independent of the library's grid search.
double sqrt_peak_oracle()
{
    double lo = 1e-9, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (1.0 - 3.0 * mid > 0.0 ? lo : hi) = mid;
    }
    const double z = 0.5 * (lo + hi);
    return (1.0 - z) * std::sqrt(z);
}

} // namespace

TEST_SUITE("meanfield")
{
TEST_CASE("F_eval")
{
    for (double beta : {0.0, 1.0, 10.0}) {
        CHECK(F_eval(0.0, beta, linear) == 0.0);
        CHECK(F_eval(1.0, beta, linear) == -1.0);
        CHECK(F_eval(1.0, beta, PersuasionFunction::constant(0.4)) == -1.0);
    }
    CHECK(F_eval(0.5, 10.0, linear) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("beta_star")
{
    CHECK(std::abs(beta_star(linear) - 4.0) <= 1e-9);
    const auto peak = persuasion_peak(linear);
    CHECK(peak.z_max == doctest::Approx(0.5).epsilon(1e-6));
    for (double c : {0.1, 0.3, 1.0}) {
        CHECK(beta_star(PersuasionFunction::constant(c)) == doctest::Approx(1.0 / c).epsilon(1e-12));
        CHECK(persuasion_peak(PersuasionFunction::constant(c)).z_max == 0.0);
    }
    const auto sqrt_phi = PersuasionFunction::custom("sqrt", [](double z) { return std::sqrt(z); });
    const double expected = 3.0 * std::sqrt(3.0) / 2.0;
    CHECK(std::abs(1.0 / sqrt_peak_oracle() - expected) <= 1e-12);
    CHECK(std::abs(beta_star(sqrt_phi) - expected) <= 1e-9);
    CHECK(std::isinf(beta_star(PersuasionFunction::constant(0.0))));
}

TEST_CASE("equilibria: beta = 10, linear")
{
    const auto eq = equilibria(10.0, linear);
    REQUIRE(eq.z_u.has_value());
    REQUIRE(eq.z_s.has_value());
    CHECK(std::abs(*eq.z_u - (0.5 - 0.5 * std::sqrt(0.6))) <= 1e-9);
    CHECK(std::abs(*eq.z_s - (0.5 + 0.5 * std::sqrt(0.6))) <= 1e-9);
    CHECK(*eq.z_u == doctest::Approx(0.112702).epsilon(1e-5));
    CHECK(*eq.z_s == doctest::Approx(0.887298).epsilon(1e-6));
    CHECK_FALSE(eq.tangency);
}

TEST_CASE("equilibria: tangency and no roots")
{
    const auto tangent = equilibria(4.0, linear);
    CHECK(tangent.tangency);
    REQUIRE(tangent.z_u.has_value());
    CHECK(*tangent.z_u == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(*tangent.z_s == doctest::Approx(0.5).epsilon(1e-6));

    const auto none = equilibria(3.0, linear);
    CHECK_FALSE(none.z_u.has_value());
    CHECK_FALSE(none.z_s.has_value());
    CHECK_THROWS_AS(equilibria(0.0, linear), invalid_argument);
}

TEST_CASE("equilibria: closed forms for beta >= 4")
{
    for (double beta = 4.001; beta < 60.0; beta *= 1.07) {
        CAPTURE(beta);
        const auto eq = equilibria(beta, linear);
        const auto [zu, zs] = linear_roots(beta);
        REQUIRE(eq.z_u.has_value());
        CHECK(std::abs(*eq.z_u - zu) <= 1e-9);
        CHECK(std::abs(*eq.z_s - zs) <= 1e-9);
    }
}

TEST_CASE("equilibria: residuals and stability signs")
{
    const std::vector<PersuasionFunction> phis{
        linear, PersuasionFunction::parse("poly:0.05,0.9"), PersuasionFunction::parse("poly:0,1.5,-0.6"),
        PersuasionFunction::custom("sqrt", [](double z) { return std::sqrt(z); })};
    for (const auto& phi : phis) {
        for (double beta : {5.0, 8.0, 15.0, 40.0}) {
            const auto eq = equilibria(beta, phi);
            const double h = 1e-6;
            for (const auto& root : {eq.z_u, eq.z_s}) {
                if (!root)
                    continue;
                CHECK(std::abs(beta * (1.0 - *root) * phi(*root) - 1.0) <= 1e-9);
            }
            if (eq.z_u && !eq.tangency)
                CHECK(F_eval(*eq.z_u + h, beta, phi) - F_eval(*eq.z_u - h, beta, phi) > 0.0);
            if (eq.z_s && !eq.tangency)
                CHECK(F_eval(*eq.z_s + h, beta, phi) - F_eval(*eq.z_s - h, beta, phi) < 0.0);
        }
    }
}

TEST_CASE("classify_regime: examples")
{
    const auto r1 = classify_regime(3.0, linear);
    CHECK(r1.regime == 1);
    CHECK(r1.beta_star == doctest::Approx(4.0));

    const auto r2 = classify_regime(10.0, linear);
    CHECK(r2.regime == 2);
    CHECK(std::isinf(r2.phi0_inv));
    CHECK(r2.z_u.has_value());
    CHECK(r2.z_s.has_value());

    const auto r3 = classify_regime(5.0, PersuasionFunction::constant(0.3));
    CHECK(r3.regime == 3);
    CHECK(r3.phi0_inv == doctest::Approx(10.0 / 3.0));
    CHECK_FALSE(r3.z_u.has_value());

    const auto tangent = classify_regime(4.0, linear);
    CHECK(tangent.regime == 1);
    CHECK(tangent.tangency);

    CHECK_THROWS_AS(classify_regime(5.0, PersuasionFunction::parse("poly:1,-1")), invalid_argument);
}

TEST_CASE("classify_regime agrees with equilibria")
{
    const std::vector<PersuasionFunction> phis{linear, PersuasionFunction::parse("poly:0.05,0.9"),
                                               PersuasionFunction::constant(0.25)};
    for (const auto& phi : phis)
        for (double beta = 0.5; beta < 40.0; beta *= 1.3) {
            const auto r = classify_regime(beta, phi);
            const auto eq = equilibria(beta, phi);
            const bool two_roots = eq.z_u && eq.z_s && !eq.tangency;
            CHECK((r.regime == 2) == two_roots);
            if (r.regime == 2)
                CHECK(*eq.z_u < *eq.z_s);
        }
}

TEST_CASE("integrate_ode: fixed points and basins")
{
    const auto zero = integrate_ode(10.0, linear, 0.0, 20.0);
    for (double z : zero.z)
        CHECK(z == 0.0);

    const double zs = 0.5 + 0.5 * std::sqrt(0.6);
    const auto up = integrate_ode(10.0, linear, 0.5, 20.0);
    CHECK(up.horizon() == 20.0);
    CHECK(std::abs(up.z.back() - zs) <= 1e-4);
    CHECK(up.step_halving_delta < 1e-6);

    const auto down = integrate_ode(10.0, linear, 0.05, 20.0);
    CHECK(down.z.back() < 1e-3);

    CHECK_THROWS_AS(integrate_ode(10.0, linear, 1.5, 1.0), invalid_argument);
    CHECK_THROWS_AS(integrate_ode(10.0, linear, 0.5, 1.0, 0.0), invalid_argument);
}

TEST_CASE("integrate_ode: monotone between equilibria")
{
    const auto [zu, zs] = linear_roots(10.0);
    for (double z0 : {zu + 0.01, 0.3, 0.6, zs - 0.01}) {
        const auto sol = integrate_ode(10.0, linear, z0, 10.0);
        for (std::size_t i = 1; i < sol.z.size(); ++i)
            CHECK(sol.z[i] >= sol.z[i - 1]);
    }
    for (double z0 : {0.01, 0.05, zu - 0.01}) {
        const auto sol = integrate_ode(10.0, linear, z0, 10.0);
        for (std::size_t i = 1; i < sol.z.size(); ++i)
            CHECK(sol.z[i] <= sol.z[i - 1]);
    }
    for (double z0 : {0.95, 1.0}) {
        const auto sol = integrate_ode(10.0, linear, z0, 10.0);
        for (std::size_t i = 1; i < sol.z.size(); ++i)
            CHECK(sol.z[i] <= sol.z[i - 1]);
        CHECK(sol.z.back() == doctest::Approx(zs).epsilon(1e-6));
    }
}

TEST_CASE("OdeSolution::at interpolates")
{
    const auto sol = integrate_ode(10.0, linear, 0.5, 1.0, 0.1);
    CHECK(sol.t.size() == 11);
    CHECK(sol.at(0.0) == sol.z.front());
    CHECK(sol.at(2.0) == sol.z.back());
    CHECK(sol.at(0.15) == doctest::Approx(0.5 * (sol.z[1] + sol.z[2])));
}

TEST_CASE("kurtz_gap")
{
    const auto sol = integrate_ode(10.0, linear, 0.5, 10.0, 0.01);
    Trajectory same;
    same.horizon = 10.0;
    for (std::size_t i = 0; i < sol.t.size(); ++i)
        same.samples.push_back({sol.t[i], sol.z[i]});
    CHECK(kurtz_gap(same, sol) == 0.0);

    Trajectory flat;
    flat.horizon = 10.0;
    flat.samples = {{0.0, 0.0}, {10.0, 0.0}};
    flat.absorbed_at = 0.0;
    CHECK(kurtz_gap(flat, integrate_ode(10.0, linear, 0.0, 10.0)) == 0.0);
    CHECK(kurtz_gap(flat, sol) == doctest::Approx(sol.z.back()));

    Trajectory short_path = flat;
    short_path.horizon = 5.0;
    CHECK_THROWS_AS(kurtz_gap(short_path, sol), invalid_argument);
}
}
