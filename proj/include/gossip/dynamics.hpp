#pragma once

#include <cstdint>
#include <vector>

#include "gossip/detail/fenwick.hpp"
#include "gossip/graph.hpp"
#include "gossip/persuasion.hpp"
#include "gossip/rng.hpp"
#include "gossip/trajectory.hpp"

namespace gossip {

/// Binary adoption state per node (1 = has the asset).
class NodeStateConfig {
public:
    NodeStateConfig() = default;
    explicit NodeStateConfig(std::size_t n) : states_(n, 0) {}

    std::size_t size() const noexcept { return states_.size(); }
    bool operator[](node_t v) const { return states_[v] != 0; }
    void set(node_t v, bool value)
    {
        if ((states_[v] != 0) == value)
            return;
        states_[v] = value ? 1 : 0;
        ones_ += value ? 1 : -1;
    }
    std::size_t ones_count() const noexcept { return ones_; }
    double fraction() const noexcept { return states_.empty() ? 0.0 : static_cast<double>(ones_) / static_cast<double>(states_.size()); }

private:
    std::vector<std::uint8_t> states_;
    std::size_t ones_ = 0;
};

/// floor(z0 N), forgiving round-off just below an integer (0.29 * 100 is
/// 28.999999999999996 in doubles).
std::size_t initial_ones(std::size_t n, double z0);

/// floor(z0 N) ones at uniformly random positions.
NodeStateConfig init_config(std::size_t n, double z0, std::uint64_t seed);

/// Number of arcs (v, w) with X_v = 0 and X_w = 1, by a full scan.
std::uint64_t active_arc_count(const NodeStateConfig& config, const Graph& g);

/// Incremental bookkeeping of the jump process state.
///
/// For every node v it keeps the number of ones in N_v. A zero node v is the
/// tail of exactly that many active arcs, so selecting a uniform active arc
/// amounts to selecting a zero node with probability proportional to this
/// count; a Fenwick tree over those weights does it in O(log N). A flip of w
/// touches the in-neighbors of w only.
class ActiveArcTracker {
public:
    ActiveArcTracker(const Graph& g, NodeStateConfig config);

    const NodeStateConfig& config() const noexcept { return config_; }
    std::size_t ones_count() const noexcept { return config_.ones_count(); }
    std::uint64_t active_count() const noexcept { return weights_.total(); }

    void flip(node_t v);

    /// Tail of a uniformly random active arc. Requires active_count() > 0.
    node_t sample_birth(rng_t& engine) const;
    /// Uniformly random node in state 1. Requires ones_count() > 0.
    node_t sample_one(rng_t& engine) const;

private:
    const Graph* graph_;
    NodeStateConfig config_;
    std::vector<std::uint32_t> ones_in_neighborhood_;
    detail::FenwickTree weights_;
    std::vector<node_t> ones_;
    std::vector<std::uint32_t> position_; // index into ones_
};

struct SimulationOptions {
    double horizon = 100.0;
    std::uint64_t seed = 0;
    SamplingOptions sampling;
    /// Compare the incremental active-arc count with a full scan after every
    /// event (slow; meant for tests on small graphs).
    bool check_invariants = false;
};

/// Exact event-driven simulation of the jump process on g.
///
/// Total birth rate β d̄⁻¹ φ(Z) · #active arcs, total death rate #ones. A
/// birth converts the tail of a uniform active arc, a death a uniform node in
/// state 1. Stops at absorption (no ones) or at the horizon.
Trajectory simulate(const Graph& g, const PersuasionFunction& phi, double beta, const NodeStateConfig& init,
                    const SimulationOptions& options);

} // namespace gossip
