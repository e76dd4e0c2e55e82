#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gossip/persuasion.hpp"
#include "gossip/rng.hpp"
#include "gossip/trajectory.hpp"

namespace gossip {

/// Birth–death chain on the lattice {0, 1/N, ..., 1}, stored as rate tables
/// indexed by k = N z. All families use the population-scaled convention
/// (events per unit time for the whole population).
class BirthDeathChain {
public:
    /// Throws invalid_argument on negative/non-finite rates, λ⁺(1) ≠ 0 or
    /// λ⁻(0) ≠ 0.
    BirthDeathChain(std::vector<double> birth, std::vector<double> death, std::string label);

    std::size_t size() const noexcept { return birth_.size() - 1; } // N
    double birth(std::size_t k) const { return birth_[k]; }
    double death(std::size_t k) const { return death_[k]; }
    const std::vector<double>& birth_table() const noexcept { return birth_; }
    const std::vector<double>& death_table() const noexcept { return death_; }
    const std::string& label() const noexcept { return label_; }

    /// max_k λ⁺(k) + λ⁻(k).
    double max_total_rate() const;

private:
    std::vector<double> birth_;
    std::vector<double> death_;
    std::string label_;
};

/// Complete graph with self-loops: λ⁺(z) = Nβ z(1-z) φ(z), λ⁻(z) = N z.
BirthDeathChain rates_meanfield(std::size_t n, double beta, const PersuasionFunction& phi);

/// Cheeger lower bound: the mean-field chain at rate β γ / d̄. Requires γ ≤ d̄.
BirthDeathChain rates_lower(std::size_t n, double beta, const PersuasionFunction& phi, double gamma, double avg_degree);

/// Degree upper bound: λ⁺(z) = N (Δ/d̄) β z φ(z), λ⁻(z) = N z. Requires Δ ≥ d̄.
BirthDeathChain rates_upper(std::size_t n, double beta, const PersuasionFunction& phi, double max_degree,
                            double avg_degree);

struct ChainSimulationOptions {
    double horizon = 100.0;
    std::uint64_t seed = 0;
    SamplingOptions sampling;
};

/// Exact event-driven path from k0 = N z0.
Trajectory simulate_bd(const BirthDeathChain& chain, std::size_t k0, const ChainSimulationOptions& options);

/// Runs the embedded jump chain from k until it first hits lower or upper;
/// returns the state hit.
std::size_t run_until_exit(const BirthDeathChain& chain, std::size_t k, std::size_t lower, std::size_t upper,
                           rng_t& engine);

/// Probability of reaching M before 0 from k, by the product/sum solution of
/// the first-step recursion, accumulated in log space.
/// Throws inapplicable_error if λ⁺ vanishes strictly between 0 and M.
double hitting_prob(const BirthDeathChain& chain, std::size_t k, std::size_t target);

} // namespace gossip
