#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gossip/graph.hpp"
#include "gossip/meanfield.hpp"
#include "gossip/persuasion.hpp"
#include "gossip/trajectory.hpp"

namespace gossip {

/// Linear dominating process Y on ℕ^V: node v gains a unit at rate
/// μ Σ_{w∈N_v} y_w and loses one at rate y_v.
struct LinearProcessParams {
    const Graph* graph = nullptr;
    double mu = 0.0;
    double rho = 0.0;    // ρ_A
    double rho_mu = 0.0; // μ ρ_A

    LinearProcessParams(const Graph& g, double mu);
    LinearProcessParams(const Graph& g, double mu, double spectral_radius);
};

inline constexpr std::uint64_t kLinearEventCap = 10'000'000;

struct LinearSimulationOptions {
    double horizon = 10.0;
    std::uint64_t seed = 0;
    SamplingOptions sampling;
    std::uint64_t event_cap = kLinearEventCap;
};

/// Exact simulation of Y. Samples carry Z_Y = total / N. Sets `truncated`
/// when the event cap is hit before the horizon.
Trajectory simulate_linear(const LinearProcessParams& params, const std::vector<std::uint64_t>& init,
                           const LinearSimulationOptions& options);

struct MomentTrajectory {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> mean;      // M⁽¹⁾(t)
    std::vector<Eigen::MatrixXd> covariance; // Ω(t); empty for first-moment runs

    /// E Z_Y(t_i) = 1ᵀM⁽¹⁾ / N.
    double mean_z(std::size_t i) const;
    /// Var Z_Y(t_i) = 1ᵀΩ1 / N².
    double variance_z(std::size_t i) const;
};

/// RK4 on Ṁ = (μA - I)M. Every `record_stride`-th step is kept (plus the last).
MomentTrajectory integrate_first_moment(const LinearProcessParams& params, const Eigen::VectorXd& m0, double horizon,
                                        double step = 1e-3, std::size_t record_stride = 1);

inline constexpr std::size_t kCovarianceMaxNodes = 200;

/// RK4 on the coupled system Ṁ = (μA - I)M,
/// Ω̇ = μ(AΩ + ΩAᵀ) - 2Ω + μ diag(AM) + diag(M), Ω(0) = 0.
/// Dense; throws size_cap_error above kCovarianceMaxNodes.
MomentTrajectory integrate_covariance(const LinearProcessParams& params, const Eigen::VectorXd& m0, double horizon,
                                      double step = 1e-3, std::size_t record_stride = 1);

/// N^{-1/2} (μρ+1)/(1-μρ) e^{(μρ-1)t} Z0^{1/2}. Throws inapplicable_error
/// when μρ ≥ 1.
double variance_bound(const LinearProcessParams& params, double z0, double t);

/// Which statement of the general-graph extinction/persistence result applies.
enum class GeneralRegime {
    fast_extinction,          // β < d̄ Δ⁻¹ φ(1)⁻¹
    fast_extinction_spectral, // β < d̄ ρ⁻¹ φ(1)⁻¹ (relaxed form)
    initial_condition,        // d̄ γ⁻¹ β* < β < d̄ ρ⁻¹ φ(0)⁻¹
    persistence,              // d̄ γ⁻¹ φ(0)⁻¹ < β
    no_conclusion,
};

std::string to_string(GeneralRegime regime);

struct GeneralThresholds {
    /// φ(√z) = d̄ / (β ρ_A)
    std::optional<double> z_u_prime;
    /// z_u, z_s of the mean-field chain at rate β Δ / d̄
    std::optional<double> z_u_dprime;
    std::optional<double> z_s_general;
    /// z_u, z_s at rate β γ / d̄ (Cheeger lower-bound chain)
    std::optional<double> z_u_gamma;
    std::optional<double> z_s_gamma;
    /// z_s at rate β ρ_A / d̄
    std::optional<double> z_s_rho;

    GeneralRegime regime = GeneralRegime::no_conclusion;
    /// d̄ γ⁻¹ β* ≥ d̄ ρ⁻¹ φ(0)⁻¹: the initial-condition band is empty.
    bool initial_condition_band_empty = false;
    /// "exact", "analytic" or "absent".
    std::string gamma_source = "absent";
    std::optional<double> gamma;

    double beta_star = 0.0;
    double beta_fast_extinction = 0.0;          // d̄ Δ⁻¹ φ(1)⁻¹
    double beta_fast_extinction_spectral = 0.0; // d̄ ρ⁻¹ φ(1)⁻¹
    std::optional<double> beta_initial_condition_low; // d̄ γ⁻¹ β*
    double beta_initial_condition_high = 0.0;         // d̄ ρ⁻¹ φ(0)⁻¹
    std::optional<double> beta_persistence;           // d̄ γ⁻¹ φ(0)⁻¹

    /// z_u′ ≤ z_u″ < z_s whenever all three exist.
    bool ordered() const;
};

GeneralThresholds general_thresholds(const Graph& g, const GraphMetrics& metrics, double beta,
                                     const PersuasionFunction& phi);

/// Family form for φ(z) = z on an (a, e1, e2)-regularly expansive sequence.
struct ExpansiveThresholds {
    std::optional<double> z_u_prime;  // β⁻² e1²
    std::optional<double> z_u_dprime; // ½ - ½√(1 - 4e2/β), needs β ≥ 4e2
    std::optional<double> z_s;        // ½ + ½√(1 - 4e1/β), needs β ≥ 4e1
    /// 1 if β < a (no thresholds reported), 2 if β > 4e2, 0 when no
    /// conclusion can be drawn.
    int regime = 0;
};

ExpansiveThresholds expansive_thresholds(double e1, double e2, double a, double beta);

} // namespace gossip
