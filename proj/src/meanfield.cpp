#include "gossip/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace gossip {

double F_eval(double z, double beta, const PersuasionFunction& phi)
{
    return beta * z * (1.0 - z) * phi(z) - z;
}

PersuasionPeak persuasion_peak(const PersuasionFunction& phi)
{
    constexpr std::size_t intervals = 10000;
    auto g = [&](double z) { return (1.0 - z) * phi(z); };

    std::size_t best = 0;
    double best_value = g(0.0);
    for (std::size_t i = 1; i <= intervals; ++i) {
        const double value = g(static_cast<double>(i) / intervals);
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }

    double lo = static_cast<double>(best == 0 ? 0 : best - 1) / intervals;
    double hi = static_cast<double>(std::min(best + 1, intervals)) / intervals;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
    double ga = g(a), gb = g(b);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (ga < gb) {
            lo = a;
            a = b;
            ga = gb;
            b = lo + inv_phi * (hi - lo);
            gb = g(b);
        } else {
            hi = b;
            b = a;
            gb = ga;
            a = hi - inv_phi * (hi - lo);
            ga = g(a);
        }
    }
    PersuasionPeak peak{best_value > 0.0 ? static_cast<double>(best) / intervals : 0.0, best_value};
    for (double z : {lo, hi, 0.5 * (lo + hi)}) {
        if (const double value = g(z); value > peak.g_max) {
            peak.g_max = value;
            peak.z_max = z;
        }
    }
    return peak;
}

double beta_star(const PersuasionFunction& phi)
{
    const double m = persuasion_peak(phi).g_max;
    return m > 0.0 ? 1.0 / m : std::numeric_limits<double>::infinity();
}

namespace {

// Root of f on [lo, hi] given f(lo) and f(hi) of opposite sign.
template <class Fn>
double bisect(Fn f, double lo, double hi)
{
    const bool rising = f(lo) < 0.0;
    while (hi - lo > kRootTolerance) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) < 0.0) == rising)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

Equilibria equilibria(double beta, const PersuasionFunction& phi, const PersuasionPeak& peak)
{
    if (!(beta > 0.0))
        throw invalid_argument("equilibria: beta must be > 0");
    auto f = [&](double z) { return beta * (1.0 - z) * phi(z) - 1.0; };

    Equilibria eq;
    const double top = beta * peak.g_max - 1.0;
    if (top < -kRootTolerance)
        return eq;
    if (top <= kRootTolerance) {
        eq.z_u = eq.z_s = peak.z_max;
        eq.tangency = true;
        return eq;
    }
    if (f(0.0) < 0.0)
        eq.z_u = bisect(f, 0.0, peak.z_max);
    eq.z_s = bisect(f, peak.z_max, 1.0);
    return eq;
}

Equilibria equilibria(double beta, const PersuasionFunction& phi)
{
    return equilibria(beta, phi, persuasion_peak(phi));
}

RegimeReport classify_regime(double beta, const PersuasionFunction& phi)
{
    if (!(beta > 0.0))
        throw invalid_argument("classify_regime: beta must be > 0");
    if (const auto report = validate_assumptions(phi); !report.standard())
        throw invalid_argument("classify_regime: persuasion function fails the standard assumptions: " + report.message);

    const auto peak = persuasion_peak(phi);
    const auto eq = equilibria(beta, phi, peak);

    RegimeReport r;
    r.beta_star = peak.g_max > 0.0 ? 1.0 / peak.g_max : std::numeric_limits<double>::infinity();
    const double phi0 = phi(0.0);
    r.phi0_inv = phi0 > 0.0 ? 1.0 / phi0 : std::numeric_limits<double>::infinity();
    r.tangency = eq.tangency;
    if (!eq.z_s || eq.tangency) {
        r.regime = 1;
        r.z_u = eq.z_u;
        r.z_s = eq.z_s;
        return r;
    }
    r.z_u = eq.z_u;
    r.z_s = eq.z_s;
    r.regime = eq.z_u ? 2 : 3;
    return r;
}

double OdeSolution::at(double time) const
{
    if (t.empty())
        return 0.0;
    if (time <= t.front())
        return z.front();
    if (time >= t.back())
        return z.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), time) - t.begin());
    const std::size_t lo = hi - 1;
    const double w = (time - t[lo]) / (t[hi] - t[lo]);
    return z[lo] + w * (z[hi] - z[lo]);
}

namespace {

std::vector<double> rk4(double beta, const PersuasionFunction& phi, double z0, double step, std::size_t steps)
{
    auto F = [&](double z) { return F_eval(z, beta, phi); };
    std::vector<double> z(steps + 1);
    z[0] = z0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double y = z[i];
        const double k1 = F(y);
        const double k2 = F(std::clamp(y + 0.5 * step * k1, 0.0, 1.0));
        const double k3 = F(std::clamp(y + 0.5 * step * k2, 0.0, 1.0));
        const double k4 = F(std::clamp(y + step * k3, 0.0, 1.0));
        z[i + 1] = std::clamp(y + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4), 0.0, 1.0);
    }
    return z;
}

} // namespace

OdeSolution integrate_ode(double beta, const PersuasionFunction& phi, double z0, double horizon, double step)
{
    if (!(z0 >= 0.0 && z0 <= 1.0))
        throw invalid_argument("integrate_ode: z0 must lie in [0, 1]");
    if (!(step > 0.0) || !(horizon >= 0.0))
        throw invalid_argument("integrate_ode: need step > 0 and horizon >= 0");

    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    const double h = steps == 0 ? 0.0 : horizon / static_cast<double>(steps);

    OdeSolution sol;
    sol.z = rk4(beta, phi, z0, h, steps);
    sol.t.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        sol.t[i] = i == steps ? horizon : h * static_cast<double>(i);

    const auto fine = rk4(beta, phi, z0, 0.5 * h, 2 * steps);
    for (std::size_t i = 0; i <= steps; ++i)
        sol.step_halving_delta = std::max(sol.step_halving_delta, std::abs(sol.z[i] - fine[2 * i]));
    return sol;
}

double kurtz_gap(const Trajectory& stochastic, const OdeSolution& deterministic)
{
    if (std::abs(stochastic.horizon - deterministic.horizon()) > 1e-9 * std::max(1.0, stochastic.horizon))
        throw invalid_argument(fmt::format("kurtz_gap: horizons differ ({} vs {})", stochastic.horizon, deterministic.horizon()));
    double gap = 0.0;
    for (const auto& s : stochastic.samples)
        gap = std::max(gap, std::abs(s.z - deterministic.at(s.t)));
    for (std::size_t i = 0; i < deterministic.t.size(); ++i)
        gap = std::max(gap, std::abs(stochastic.z_at(deterministic.t[i]) - deterministic.z[i]));
    return gap;
}

} // namespace gossip
