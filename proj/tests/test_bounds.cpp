#include <doctest.h>

#include <cmath>

#include "gossip/bounds.hpp"
#include "gossip/error.hpp"
#include "gossip/meanfield.hpp"
#include "gossip/rng.hpp"
#include "oracles.hpp"

using namespace gossip;

namespace {

Graph path_graph(node_t n)
{
    std::vector<arc_t> edges;
    for (node_t v = 0; v + 1 < n; ++v)
        edges.emplace_back(v, v + 1);
    return symmetric_graph(n, edges);
}

LinearSimulationOptions quiet(double horizon, std::uint64_t seed)
{
    LinearSimulationOptions o;
    o.horizon = horizon;
    o.seed = seed;
    o.sampling = {0, 0};
    return o;
}

// Index of the recorded time closest to t.
std::size_t index_at(const MomentTrajectory& m, double t)
{
    std::size_t best = 0;
    for (std::size_t i = 0; i < m.t.size(); ++i)
        if (std::abs(m.t[i] - t) < std::abs(m.t[best] - t))
            best = i;
    return best;
}

} // namespace

TEST_SUITE("bounds")
{
TEST_CASE("simulate_linear: zero start stays at zero")
{
    const auto g = path_graph(5);
    const auto traj = simulate_linear(LinearProcessParams(g, 0.3), std::vector<std::uint64_t>(5, 0), quiet(10, 1));
    CHECK(traj.absorbed_at.has_value());
    CHECK(traj.event_count == 0);
    CHECK(traj.final_z() == 0.0);
    CHECK_THROWS_AS(simulate_linear(LinearProcessParams(g, 0.3), {1, 2}, quiet(10, 1)), invalid_argument);
}

TEST_CASE("simulate_linear: self-loop node has mean count e^{-t/2}")
{
    const auto g = gen_complete(1, true);
    const LinearProcessParams params(g, 0.5);
    CHECK(params.rho_mu == doctest::Approx(0.5));
    std::vector<double> at1, at2;
    for (std::uint64_t s = 0; s < 100000; ++s) {
        auto o = quiet(2.0, s);
        o.sampling.stride = 1;
        const auto traj = simulate_linear(params, {1}, o);
        at1.push_back(traj.z_at(1.0));
        at2.push_back(traj.z_at(2.0));
    }
    const auto m1 = oracle::moments(at1), m2 = oracle::moments(at2);
    CHECK(std::abs(m1.mean - std::exp(-0.5)) <= 3 * m1.se);
    CHECK(std::abs(m2.mean - std::exp(-1.0)) <= 3 * m2.se);
}

TEST_CASE("simulate_linear: mu = 0 is independent pure death")
{
    const auto g = path_graph(4);
    const LinearProcessParams params(g, 0.0);
    std::vector<double> at;
    for (std::uint64_t s = 0; s < 20000; ++s)
        at.push_back(simulate_linear(params, {3, 0, 1, 2}, quiet(1.0, s)).z_at(1.0));
    const auto m = oracle::moments(at);
    CHECK(std::abs(m.mean - 1.5 * std::exp(-1.0)) <= 3 * m.se);
}

TEST_CASE("simulate_linear: supercritical runs are truncated at the event cap")
{
    const auto g = gen_complete(10, false);
    auto o = quiet(100.0, 3);
    o.event_cap = 5000;
    const auto traj = simulate_linear(LinearProcessParams(g, 1.0), std::vector<std::uint64_t>(10, 5), o);
    CHECK(traj.truncated);
    CHECK(traj.event_count == 5000);
    CHECK(traj.samples.back().t < 100.0);
}

TEST_CASE("integrate_first_moment: mu = 0 decays as e^{-t}")
{
    const auto g = path_graph(4);
    Eigen::VectorXd m0(4);
    m0 << 1, 2, 3, 4;
    const auto m = integrate_first_moment(LinearProcessParams(g, 0.0), m0, 2.0);
    for (std::size_t i = 0; i < m.t.size(); i += 100)
        CHECK((m.mean[i] - std::exp(-m.t[i]) * m0).norm() <= 1e-10);
}

TEST_CASE("integrate_first_moment: scalar self-loop")
{
    const auto g = gen_complete(1, true);
    Eigen::VectorXd m0(1);
    m0 << 1.0;
    const auto m = integrate_first_moment(LinearProcessParams(g, 0.5), m0, 4.0);
    for (std::size_t i = 0; i < m.t.size(); i += 50)
        CHECK(std::abs(m.mean[i](0) - std::exp(-0.5 * m.t[i])) <= 1e-10);
}

TEST_CASE("integrate_first_moment: matches the matrix exponential")
{
    const auto g = path_graph(3);
    Eigen::VectorXd m0(3);
    m0 << 1, 0, 0;
    const auto m = integrate_first_moment(LinearProcessParams(g, 0.3), m0, 1.0);
    const Eigen::MatrixXd a = oracle::dense_adjacency(g);
    const Eigen::MatrixXd generator = 0.3 * a - Eigen::MatrixXd::Identity(3, 3);
    const Eigen::VectorXd exact = oracle::expm(generator) * m0;
    CHECK(m.t.back() == doctest::Approx(1.0));
    CHECK((m.mean.back() - exact).norm() <= 1e-6);
}

TEST_CASE("integrate_first_moment: norm decays at rate mu rho - 1")
{
    const auto g = gen_er(30, 0.2, 3);
    const LinearProcessParams params(g, 0.05);
    Eigen::VectorXd m0 = Eigen::VectorXd::Ones(30);
    const auto m = integrate_first_moment(params, m0, 3.0, 1e-3, 100);
    for (std::size_t i = 0; i < m.t.size(); ++i)
        CHECK(m.mean[i].norm() <= std::exp((params.rho_mu - 1.0) * m.t[i]) * m0.norm() * (1 + 1e-9));
    CHECK(m.t.back() == doctest::Approx(3.0));
}

TEST_CASE("integrate_covariance: starts at zero")
{
    const auto g = path_graph(5);
    const auto c = integrate_covariance(LinearProcessParams(g, 0.2), Eigen::VectorXd::Ones(5), 1.0);
    CHECK(c.covariance.front().norm() == 0.0);
    CHECK(c.variance_z(0) == 0.0);
    CHECK(c.mean_z(0) == doctest::Approx(1.0));
}

TEST_CASE("integrate_covariance: pure-death scalar variance")
{
    const auto g = gen_complete(1, true);
    Eigen::VectorXd m0(1);
    m0 << 1.0;
    const auto c = integrate_covariance(LinearProcessParams(g, 0.0), m0, 3.0);
    for (std::size_t i = 0; i < c.t.size(); i += 10) {
        const double t = c.t[i];
        CHECK(std::abs(c.covariance[i](0, 0) - std::exp(-t) * (1 - std::exp(-t))) <= 1e-6);
    }
}

TEST_CASE("integrate_covariance: symmetric with nonnegative diagonal on a random digraph")
{
    rng_t engine(6);
    std::vector<arc_t> arcs;
    for (node_t v = 0; v < 5; ++v)
        for (node_t w = 0; w < 5; ++w)
            if (w == (v + 1) % 5 || bernoulli(engine, 0.3))
                arcs.emplace_back(v, w);
    const auto g = Graph::from_arcs(5, arcs);
    Eigen::VectorXd m0(5);
    m0 << 2, 0, 1, 0, 3;
    const auto c = integrate_covariance(LinearProcessParams(g, 0.25), m0, 2.0);
    for (const auto& omega : c.covariance) {
        CHECK((omega - omega.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(omega.diagonal().minCoeff() >= 0.0);
    }
}

TEST_CASE("integrate_covariance: size cap")
{
    const auto g = gen_torus(1, kCovarianceMaxNodes + 1);
    CHECK_THROWS_AS(integrate_covariance(LinearProcessParams(g, 0.1), Eigen::VectorXd::Ones(g.node_count()), 1.0),
                    size_cap_error);
}

TEST_CASE("variance_bound")
{
    const auto g = path_graph(5);
    const double rho = oracle::spectral_radius(g);
    const LinearProcessParams params(g, 0.5 / rho);
    CHECK(params.rho_mu == doctest::Approx(0.5).epsilon(1e-9));
    const double expected = 3.0 * std::exp(-0.5) * std::sqrt(0.2) / std::sqrt(5.0);
    CHECK(variance_bound(params, 0.2, 1.0) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(variance_bound(params, 0.0, 1.0) == 0.0);
    CHECK(variance_bound(params, 0.2, 200.0) < 1e-40);

    // the covariance ODE respects the bound; Y(0) = (1, 0, 0, 0, 0) has Z0 = 0.2
    Eigen::VectorXd m0 = Eigen::VectorXd::Zero(5);
    m0(0) = 1.0;
    const auto c = integrate_covariance(params, m0, 2.0);
    for (double t : {0.5, 1.0, 2.0}) {
        const auto i = index_at(c, t);
        CHECK(c.variance_z(i) <= variance_bound(params, 0.2, c.t[i]));
    }

    CHECK_THROWS_AS(variance_bound(LinearProcessParams(g, 0.5, 2.0), 0.2, 1.0), inapplicable_error);
    CHECK_THROWS_AS(variance_bound(LinearProcessParams(g, 2.0 / rho), 0.2, 1.0), inapplicable_error);
}

TEST_CASE("general_thresholds: analytic family values on a regular graph")
{
    // 2-torus: d̄ = ρ = 4 so e1 = 1; the family gives γ = d̄ / e2 = 2
    const auto g = gen_torus(2, 32);
    const auto m = compute_metrics(g, ExpansiveParams{1.0, 1.0, 2.0});
    const auto t = general_thresholds(g, m, 10.0, PersuasionFunction::linear());
    CHECK(t.gamma_source == "analytic");
    REQUIRE(t.z_u_prime.has_value());
    CHECK(*t.z_u_prime == doctest::Approx(0.01).epsilon(1e-9));
    REQUIRE(t.z_u_gamma.has_value());
    CHECK(std::abs(*t.z_u_gamma - 0.2764) <= 1e-4);
    CHECK(std::abs(*t.z_u_gamma - (0.5 - 0.5 * std::sqrt(0.2))) <= 1e-9);
    REQUIRE(t.z_s_rho.has_value());
    CHECK(std::abs(*t.z_s_rho - (0.5 + 0.5 * std::sqrt(0.6))) <= 1e-9);
    CHECK(t.ordered());
}

TEST_CASE("general_thresholds: regular graphs reduce to the mean-field equilibria")
{
    const auto phi = PersuasionFunction::linear();
    for (const auto& g : {gen_torus(2, 10), gen_torus(3, 4), gen_complete(12, false)}) {
        const auto m = compute_metrics(g);
        for (double beta : {5.0, 10.0, 20.0}) {
            const auto t = general_thresholds(g, m, beta, phi);
            const auto eq = equilibria(beta, phi);
            CHECK(t.z_u_dprime == eq.z_u);
            CHECK(t.z_s_general == eq.z_s);
        }
    }
}

TEST_CASE("general_thresholds: regime items")
{
    const auto phi = PersuasionFunction::linear();
    const auto g = gen_ba(18, 2, 1);
    const auto m = compute_metrics(g);
    REQUIRE(m.cheeger.has_value());
    const double dbar = m.avg_degree, delta = static_cast<double>(m.max_degree), rho = m.spectral.value;

    auto at = [&](double beta) { return general_thresholds(g, m, beta, phi); };
    CHECK(at(0.5 * dbar / delta).regime == GeneralRegime::fast_extinction);
    const double between = 0.5 * (dbar / delta + dbar / rho);
    CHECK(at(between).regime == GeneralRegime::fast_extinction_spectral);
    // φ(0) = 0: neither the item-2 upper end nor item 3 is finite
    const auto t = at(1000.0);
    CHECK(std::isinf(t.beta_initial_condition_high));
    CHECK(t.regime == GeneralRegime::initial_condition);
    CHECK(t.gamma_source == "exact");

    const auto c = PersuasionFunction::constant(0.5);
    const auto persistent = general_thresholds(g, m, 1e4, c);
    CHECK(persistent.regime == GeneralRegime::persistence);
    // constant φ: β* = φ(0)⁻¹ and d̄/γ ≥ d̄/ρ, so the item-2 band is empty
    CHECK(persistent.initial_condition_band_empty);
}

TEST_CASE("general_thresholds: gamma absent without Cheeger or family")
{
    const auto g = gen_er(100, 0.1, 2);
    const auto t = general_thresholds(g, compute_metrics(g), 10.0, PersuasionFunction::linear());
    CHECK(t.gamma_source == "absent");
    CHECK_FALSE(t.gamma.has_value());
    CHECK_FALSE(t.z_s_gamma.has_value());
    CHECK_FALSE(t.beta_persistence.has_value());
    CHECK(t.z_u_prime.has_value());
    CHECK(to_string(t.regime) == "no-conclusion");
}

TEST_CASE("expansive_thresholds: published values")
{
    const double delta = 1e-9;
    const auto t = expansive_thresholds(1 - delta, 2 + delta, 1 - delta, 10.0);
    CHECK(std::abs(*t.z_u_prime - 0.01) <= 1e-4);
    CHECK(std::abs(*t.z_u_dprime - 0.2764) <= 1e-4);
    CHECK(std::abs(*t.z_s - 0.8873) <= 1e-4);
    CHECK(t.regime == 2);

    const auto exact = expansive_thresholds(1.0, 2.0, 0.5, 10.0);
    CHECK(*exact.z_u_prime == 0.01);
}

TEST_CASE("expansive_thresholds: edge cases")
{
    const auto tangent = expansive_thresholds(1.0, 2.0, 0.5, 8.0);
    REQUIRE(tangent.z_u_dprime.has_value());
    CHECK(*tangent.z_u_dprime == 0.5);
    CHECK(tangent.regime == 0);

    const auto low = expansive_thresholds(1.0, 2.0, 0.5, 0.3);
    CHECK(low.regime == 1);
    CHECK_FALSE(low.z_u_prime.has_value());
    CHECK_FALSE(low.z_u_dprime.has_value());
    CHECK_FALSE(low.z_s.has_value());

    const auto band = expansive_thresholds(1.0, 2.0, 0.5, 6.0);
    CHECK(band.regime == 0);
    CHECK_FALSE(band.z_u_dprime.has_value());
    CHECK(band.z_s.has_value());

    CHECK_THROWS_AS(expansive_thresholds(2.0, 1.0, 0.5, 10.0), invalid_argument);
    CHECK_THROWS_AS(expansive_thresholds(1.0, 2.0, 1.5, 10.0), invalid_argument);
}
}

TEST_SUITE("threshold-ordering")
{
TEST_CASE("general_thresholds: ordering on every instance")
{
    const std::vector<PersuasionFunction> phis{PersuasionFunction::linear(), PersuasionFunction::parse("poly:0.05,0.9"),
                                               PersuasionFunction::custom("sqrt", [](double z) { return std::sqrt(z); })};
    for (std::uint64_t s = 0; s < 3; ++s)
        for (const auto& g : {gen_er(16, 0.4, s), gen_ba(18, 2, s), gen_er(200, 0.05, s), gen_ba(200, 3, s)}) {
            const auto m = compute_metrics(g);
            for (const auto& phi : phis)
                for (double beta : {2.0, 6.0, 12.0, 30.0, 80.0}) {
                    CAPTURE(s);
                    CAPTURE(g.node_count());
                    CAPTURE(m.avg_degree);
                    CAPTURE(m.max_degree);
                    CAPTURE(m.spectral.value);
                    const std::string phi_name = phi.to_string();
                    CAPTURE(phi_name);
                    CAPTURE(beta);
                    const auto t = general_thresholds(g, m, beta, phi);
                    CHECK(t.ordered());
                    if (t.z_u_prime && t.z_u_dprime && t.z_s_general) {
                        CHECK(*t.z_u_prime <= *t.z_u_dprime);
                        CHECK(*t.z_u_dprime < *t.z_s_general);
                    }
                }
        }
}
}
