#pragma once

#include <optional>
#include <vector>

#include "gossip/persuasion.hpp"
#include "gossip/trajectory.hpp"

namespace gossip {

/// F(z) = β z (1 - z) φ(z) - z, the drift of the mean-field ODE.
double F_eval(double z, double beta, const PersuasionFunction& phi);

/// Maximizer and maximum of g(z) = (1 - z) φ(z) over [0, 1].
struct PersuasionPeak {
    double z_max = 0.0;
    double g_max = 0.0;
};

/// Dense grid of 10⁴ intervals, then golden-section refinement around the
/// best grid point (g is concave under the standard assumptions).
PersuasionPeak persuasion_peak(const PersuasionFunction& phi);

/// β* = 1 / max (1 - z) φ(z); +∞ when the maximum is 0.
double beta_star(const PersuasionFunction& phi);

struct Equilibria {
    std::optional<double> z_u;
    std::optional<double> z_s;
    /// β = β*: the two roots merge at z_max.
    bool tangency = false;
};

inline constexpr double kRootTolerance = 1e-12;

/// Smallest and second-smallest positive roots of β(1 - z)φ(z) = 1, by
/// bisection on [0, z_max] and [z_max, 1].
Equilibria equilibria(double beta, const PersuasionFunction& phi);

/// z_u and z_s from a precomputed peak (shared by the general-graph
/// thresholds so both paths are the same code).
Equilibria equilibria(double beta, const PersuasionFunction& phi, const PersuasionPeak& peak);

struct RegimeReport {
    /// 1: global extinction, 2: depends on the initial condition,
    /// 3: global persistence.
    int regime = 1;
    double beta_star = 0.0;
    /// 1 / φ(0); +∞ when φ(0) = 0.
    double phi0_inv = 0.0;
    std::optional<double> z_u;
    std::optional<double> z_s;
    bool tangency = false;
};

/// Throws invalid_argument if φ fails the standard (monotone, concave) checks.
RegimeReport classify_regime(double beta, const PersuasionFunction& phi);

/// Solution z(t) of z′ = F(z) on a fixed step grid.
struct OdeSolution {
    std::vector<double> t;
    std::vector<double> z;
    /// max |z_h - z_{h/2}| over the common grid (step-halving self-check).
    double step_halving_delta = 0.0;

    double horizon() const { return t.empty() ? 0.0 : t.back(); }
    /// Linear interpolation.
    double at(double time) const;
};

inline constexpr double kDefaultOdeStep = 1e-3;

/// Classical RK4 with fixed step, clamped to [0, 1].
OdeSolution integrate_ode(double beta, const PersuasionFunction& phi, double z0, double horizon,
                          double step = kDefaultOdeStep);

/// sup |Z(t) - z(t)| over the union of both sample grids; Z is taken
/// piecewise constant, z linearly interpolated.
double kurtz_gap(const Trajectory& stochastic, const OdeSolution& deterministic);

} // namespace gossip
