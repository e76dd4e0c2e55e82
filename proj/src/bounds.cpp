#include "gossip/bounds.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "gossip/detail/fenwick.hpp"
#include "gossip/rng.hpp"

namespace gossip {

LinearProcessParams::LinearProcessParams(const Graph& g, double mu_)
    : LinearProcessParams(g, mu_, spectral_radius(g).value)
{
}

LinearProcessParams::LinearProcessParams(const Graph& g, double mu_, double spectral_radius)
    : graph(&g), mu(mu_), rho(spectral_radius), rho_mu(mu_ * spectral_radius)
{
    if (!(mu_ >= 0.0))
        throw invalid_argument("linear process: mu must be >= 0");
}

Trajectory simulate_linear(const LinearProcessParams& params, const std::vector<std::uint64_t>& init,
                           const LinearSimulationOptions& options)
{
    const Graph& g = *params.graph;
    const std::size_t n = g.node_count();
    if (init.size() != n)
        throw invalid_argument(fmt::format("simulate_linear: init has {} entries, graph has {} nodes", init.size(), n));

    // Births: pick w with weight y_w · indeg(w), then a uniform v with w ∈ N_v.
    detail::FenwickTree spread(n), units(n);
    std::uint64_t total = 0;
    for (node_t v = 0; v < n; ++v) {
        units.set(v, init[v]);
        spread.set(v, init[v] * g.in_degree(v));
        total += init[v];
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    rng_t engine(options.seed);
    TrajectoryRecorder recorder(options.horizon, options.sampling, options.seed);
    auto z_now = [&] { return static_cast<double>(total) * inv_n; };

    recorder.start(z_now(), nan);
    double t = 0.0;
    std::uint64_t events = 0;
    bool truncated = false;
    while (true) {
        if (total == 0) {
            recorder.absorb(t, nan);
            break;
        }
        if (events >= options.event_cap) {
            truncated = true;
            break;
        }
        const double birth = params.mu * static_cast<double>(spread.total());
        const double rate = birth + static_cast<double>(total);
        const double next = t + exponential(engine, rate);
        recorder.advance(next, z_now(), nan);
        if (next > options.horizon)
            break;
        t = next;
        node_t v;
        if (uniform01(engine) * rate < birth) {
            const auto w = static_cast<node_t>(spread.find(uniform_index(engine, spread.total())));
            const auto in = g.in_neighbors(w);
            v = in[uniform_index(engine, in.size())];
            units.set(v, units.weight(v) + 1);
            ++total;
        } else {
            v = static_cast<node_t>(units.find(uniform_index(engine, units.total())));
            units.set(v, units.weight(v) - 1);
            --total;
        }
        spread.set(v, units.weight(v) * g.in_degree(v));
        ++events;
        recorder.event(t, z_now(), nan);
    }
    Trajectory traj = recorder.finish(z_now(), nan);
    traj.truncated = truncated;
    if (truncated) {
        // the recorder forwarded the last state to the horizon; drop that
        while (traj.samples.size() > 1 && traj.samples.back().t > t)
            traj.samples.pop_back();
    }
    return traj;
}

double MomentTrajectory::mean_z(std::size_t i) const
{
    return mean[i].sum() / static_cast<double>(mean[i].size());
}

double MomentTrajectory::variance_z(std::size_t i) const
{
    const auto n = static_cast<double>(covariance[i].rows());
    return covariance[i].sum() / (n * n);
}

namespace {

Eigen::MatrixXd dense_adjacency(const Graph& g)
{
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (node_t v = 0; v < g.node_count(); ++v)
        for (node_t w : g.neighbors(v))
            a(v, w) = 1.0;
    return a;
}

Eigen::VectorXd apply_adjacency(const Graph& g, const Eigen::VectorXd& x)
{
    Eigen::VectorXd y(x.size());
    for (node_t v = 0; v < g.node_count(); ++v) {
        double s = 0.0;
        for (node_t w : g.neighbors(v))
            s += x[w];
        y[v] = s;
    }
    return y;
}

std::size_t step_count(double horizon, double step)
{
    if (!(step > 0.0) || !(horizon >= 0.0))
        throw invalid_argument("moment integration: need step > 0 and horizon >= 0");
    return static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
}

} // namespace

MomentTrajectory integrate_first_moment(const LinearProcessParams& params, const Eigen::VectorXd& m0, double horizon,
                                        double step, std::size_t record_stride)
{
    const Graph& g = *params.graph;
    if (static_cast<std::size_t>(m0.size()) != g.node_count())
        throw invalid_argument("integrate_first_moment: M0 size does not match the graph");
    const std::size_t steps = step_count(horizon, step);
    const double h = steps == 0 ? 0.0 : horizon / static_cast<double>(steps);
    record_stride = std::max<std::size_t>(record_stride, 1);

    auto drift = [&](const Eigen::VectorXd& m) -> Eigen::VectorXd { return params.mu * apply_adjacency(g, m) - m; };

    MomentTrajectory out;
    Eigen::VectorXd m = m0;
    out.t.push_back(0.0);
    out.mean.push_back(m);
    for (std::size_t i = 1; i <= steps; ++i) {
        const Eigen::VectorXd k1 = drift(m);
        const Eigen::VectorXd k2 = drift(m + 0.5 * h * k1);
        const Eigen::VectorXd k3 = drift(m + 0.5 * h * k2);
        const Eigen::VectorXd k4 = drift(m + h * k3);
        m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (i % record_stride == 0 || i == steps) {
            out.t.push_back(i == steps ? horizon : h * static_cast<double>(i));
            out.mean.push_back(m);
        }
    }
    return out;
}

MomentTrajectory integrate_covariance(const LinearProcessParams& params, const Eigen::VectorXd& m0, double horizon,
                                      double step, std::size_t record_stride)
{
    const Graph& g = *params.graph;
    const std::size_t n = g.node_count();
    if (n > kCovarianceMaxNodes)
        throw size_cap_error(fmt::format("integrate_covariance: N = {} exceeds the dense cap of {}", n, kCovarianceMaxNodes));
    if (static_cast<std::size_t>(m0.size()) != n)
        throw invalid_argument("integrate_covariance: M0 size does not match the graph");
    const std::size_t steps = step_count(horizon, step);
    const double h = steps == 0 ? 0.0 : horizon / static_cast<double>(steps);
    record_stride = std::max<std::size_t>(record_stride, 1);

    const Eigen::MatrixXd a = dense_adjacency(g);
    const double mu = params.mu;
    const auto size = static_cast<Eigen::Index>(n);

    struct State {
        Eigen::VectorXd m;
        Eigen::MatrixXd omega;
    };
    auto drift = [&](const State& s) {
        State d;
        const Eigen::VectorXd am = a * s.m;
        d.m = mu * am - s.m;
        d.omega = mu * (a * s.omega + s.omega * a.transpose()) - 2.0 * s.omega;
        d.omega.diagonal() += mu * am + s.m;
        return d;
    };
    auto axpy = [](const State& s, double c, const State& d) {
        return State{s.m + c * d.m, s.omega + c * d.omega};
    };

    MomentTrajectory out;
    State s{m0, Eigen::MatrixXd::Zero(size, size)};
    out.t.push_back(0.0);
    out.mean.push_back(s.m);
    out.covariance.push_back(s.omega);
    for (std::size_t i = 1; i <= steps; ++i) {
        const State k1 = drift(s);
        const State k2 = drift(axpy(s, 0.5 * h, k1));
        const State k3 = drift(axpy(s, 0.5 * h, k2));
        const State k4 = drift(axpy(s, h, k3));
        s.m += h / 6.0 * (k1.m + 2.0 * k2.m + 2.0 * k3.m + k4.m);
        s.omega += h / 6.0 * (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega);
        if (i % record_stride == 0 || i == steps) {
            out.t.push_back(i == steps ? horizon : h * static_cast<double>(i));
            out.mean.push_back(s.m);
            out.covariance.push_back(s.omega);
        }
    }
    return out;
}

double variance_bound(const LinearProcessParams& params, double z0, double t)
{
    if (params.rho_mu >= 1.0)
        throw inapplicable_error(fmt::format("variance_bound: mu * rho = {} is not below 1", params.rho_mu));
    if (!(z0 >= 0.0) || !(t >= 0.0))
        throw invalid_argument("variance_bound: need z0 >= 0 and t >= 0");
    const double n = static_cast<double>(params.graph->node_count());
    const double r = params.rho_mu;
    return (r + 1.0) / (1.0 - r) * std::exp((r - 1.0) * t) * std::sqrt(z0) / std::sqrt(n);
}

std::string to_string(GeneralRegime regime)
{
    switch (regime) {
    case GeneralRegime::fast_extinction:
        return "fast-extinction";
    case GeneralRegime::fast_extinction_spectral:
        return "fast-extinction-spectral";
    case GeneralRegime::initial_condition:
        return "initial-condition";
    case GeneralRegime::persistence:
        return "persistence";
    case GeneralRegime::no_conclusion:
        return "no-conclusion";
    }
    return "?";
}

bool GeneralThresholds::ordered() const
{
    if (!z_u_prime || !z_u_dprime || !z_s_general)
        return true;
    return *z_u_prime <= *z_u_dprime && *z_u_dprime < *z_s_general;
}

GeneralThresholds general_thresholds(const Graph& g, const GraphMetrics& metrics, double beta,
                                     const PersuasionFunction& phi)
{
    if (!(beta > 0.0))
        throw invalid_argument("general_thresholds: beta must be > 0");
    if (metrics.spectral.value <= 0.0)
        throw invalid_argument("general_thresholds: metrics lack a spectral radius");
    (void)g;

    constexpr double inf = std::numeric_limits<double>::infinity();
    const double dbar = metrics.avg_degree;
    const double delta = static_cast<double>(metrics.max_degree);
    const double rho = metrics.spectral.value;
    const double phi0 = phi(0.0), phi1 = phi(1.0);
    const double inv_phi0 = phi0 > 0.0 ? 1.0 / phi0 : inf;
    const double inv_phi1 = phi1 > 0.0 ? 1.0 / phi1 : inf;
    const auto peak = persuasion_peak(phi);

    GeneralThresholds out;
    out.beta_star = peak.g_max > 0.0 ? 1.0 / peak.g_max : inf;
    out.beta_fast_extinction = dbar / delta * inv_phi1;
    out.beta_fast_extinction_spectral = dbar / rho * inv_phi1;
    out.beta_initial_condition_high = dbar / rho * inv_phi0;

    // z_u′: ψ(s) = φ(√s) - d̄/(βρ) is nondecreasing on [0, 1]
    const double level = dbar / (beta * rho);
    if (phi0 <= level && level <= phi1) {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > kRootTolerance) {
            const double mid = 0.5 * (lo + hi);
            if (phi(std::sqrt(mid)) < level)
                lo = mid;
            else
                hi = mid;
        }
        out.z_u_prime = 0.5 * (lo + hi);
    }

    const auto upper = equilibria(beta * (delta / dbar), phi, peak);
    out.z_u_dprime = upper.z_u;
    out.z_s_general = upper.z_s;
    out.z_s_rho = equilibria(beta * (rho / dbar), phi, peak).z_s;

    if (metrics.cheeger) {
        out.gamma = metrics.cheeger->value();
        out.gamma_source = "exact";
    } else if (auto gm = metrics.gamma()) {
        out.gamma = *gm;
        out.gamma_source = "analytic";
    }
    if (out.gamma && *out.gamma > 0.0) {
        const auto lower = equilibria(beta * (*out.gamma / dbar), phi, peak);
        out.z_u_gamma = lower.z_u;
        out.z_s_gamma = lower.z_s;
        out.beta_initial_condition_low = dbar / *out.gamma * out.beta_star;
        out.beta_persistence = dbar / *out.gamma * inv_phi0;
        out.initial_condition_band_empty = *out.beta_initial_condition_low >= out.beta_initial_condition_high;
    }

    if (beta < out.beta_fast_extinction)
        out.regime = GeneralRegime::fast_extinction;
    else if (beta < out.beta_fast_extinction_spectral)
        out.regime = GeneralRegime::fast_extinction_spectral;
    else if (out.beta_persistence && beta > *out.beta_persistence)
        out.regime = GeneralRegime::persistence;
    else if (out.beta_initial_condition_low && *out.beta_initial_condition_low < beta
             && beta < out.beta_initial_condition_high)
        out.regime = GeneralRegime::initial_condition;
    return out;
}

ExpansiveThresholds expansive_thresholds(double e1, double e2, double a, double beta)
{
    if (!(0.0 <= a && a <= e1 && e1 <= e2))
        throw invalid_argument("expansive_thresholds: need 0 <= a <= e1 <= e2");
    if (!(beta > 0.0))
        throw invalid_argument("expansive_thresholds: beta must be > 0");

    ExpansiveThresholds out;
    if (beta < a) {
        out.regime = 1;
        return out;
    }
    out.z_u_prime = e1 * e1 / (beta * beta);
    if (const double disc = 1.0 - 4.0 * e2 / beta; disc >= 0.0)
        out.z_u_dprime = 0.5 - 0.5 * std::sqrt(disc);
    if (const double disc = 1.0 - 4.0 * e1 / beta; disc >= 0.0)
        out.z_s = 0.5 + 0.5 * std::sqrt(disc);
    out.regime = beta > 4.0 * e2 ? 2 : 0;
    return out;
}

} // namespace gossip
