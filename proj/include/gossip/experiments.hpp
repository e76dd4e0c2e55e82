#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gossip/graph.hpp"
#include "gossip/persuasion.hpp"
#include "gossip/trajectory.hpp"

namespace gossip {

/// Graph family and its parameters.
///
///   meanfield  complete graph with self-loops, simulated through its exact
///              birth–death reduction (cheap for large N)
///   complete   complete graph with self-loops, full jump process
///   er         G(n, p)
///   config     configuration model with `degrees`
///   ba         Barabási–Albert with m links per node
///   torus      dimension k, side `side`
///   file       edge list at `path`
struct GraphFamily {
    std::string kind = "meanfield";
    std::size_t n = 1000;
    double p = 0.05;
    std::size_t m = 3;
    std::size_t k = 2;
    std::size_t side = 32;
    DegreeDistribution degrees;
    std::string path;

    /// Whether instances differ by seed.
    bool is_random() const { return kind == "er" || kind == "config" || kind == "ba"; }
    /// Nodes of every instance.
    std::size_t node_count() const;
    nlohmann::json to_json() const;
};

/// "d:q,d:q,..." -> degree distribution.
DegreeDistribution parse_degree_distribution(const std::string& text);
std::string to_string(const DegreeDistribution& q);

/// Instance of a family (not defined for "meanfield").
Graph make_graph(const GraphFamily& family, std::uint64_t seed);

enum class SweepAxis { beta, z0 };
std::string to_string(SweepAxis axis);

struct SweepSpec {
    GraphFamily family;
    std::string phi = "linear";
    SweepAxis axis = SweepAxis::beta;
    std::vector<double> grid;
    double beta = 10.0; // fixed when sweeping z0
    double z0 = 1.0;    // fixed when sweeping beta
    std::size_t replicas = 500;
    double horizon = 100.0;
    std::uint64_t master_seed = 0;
    bool regenerate_graph_per_replica = true;
    /// Worker threads; 0 = hardware concurrency. Output never depends on it.
    std::size_t threads = 0;

    /// Throws invalid_argument on a bad spec.
    void validate() const;
    nlohmann::json to_json() const;
};

/// Default grids mirroring the published figures.
std::vector<double> default_beta_grid();
std::vector<double> default_z0_grid();

struct SweepRow {
    double value = 0.0;
    std::size_t successes = 0;
    std::size_t replicas = 0;
    std::size_t graph_failures = 0;
    std::optional<double> mean_survivor_z;
    std::optional<double> min_survivor_z;
    std::optional<double> mean_absorb_time;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
    std::string version;
};

/// Not absorbed by T: absorbed_at unset or absorbed_at > T. A path that was
/// neither absorbed nor run up to T throws invalid_argument.
bool is_success(const Trajectory& traj, double horizon);

struct SurvivorStatistic {
    double mean = 0.0;
    double min = 0.0;
    std::size_t count = 0;
};

/// Mean and min of Z(T) over successful paths; absent with no survivors.
std::optional<SurvivorStatistic> survivor_final_z(const std::vector<Trajectory>& trajectories, double horizon);

/// One path of the sweep protocol.
Trajectory run_replica(const SweepSpec& spec, const Graph* graph, double beta, double z0, std::uint64_t seed);

SweepResult run_sweep(const SweepSpec& spec);

/// CSV: "axis,value,successes,replicas,mean_survivor_z,mean_absorb_time".
/// Missing statistics are empty fields.
void write_sweep_csv(std::ostream& os, const SweepResult& result);
/// Sidecar with the full spec, seeds and per-point failure counts.
nlohmann::json sweep_metadata(const SweepResult& result);

inline constexpr const char* kVersionTag = "gossipnet-1.0.0";

} // namespace gossip
