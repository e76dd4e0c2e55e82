#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

namespace gossip {

struct Sample {
    double t = 0.0;
    double z = 0.0;
    /// Fraction of active arcs; NaN where the process does not track it.
    double xi = std::numeric_limits<double>::quiet_NaN();
};

/// Piecewise-constant sample path of Z(t) (and ξ(t) when known).
struct Trajectory {
    std::vector<Sample> samples;
    double horizon = 0.0;
    std::optional<double> absorbed_at;
    std::uint64_t event_count = 0;
    std::uint64_t seed = 0;
    /// An event cap stopped the run before the horizon.
    bool truncated = false;

    /// Value of Z at time t (right-continuous step interpolation).
    double z_at(double t) const;
    /// Z at the horizon, or 0 when absorbed.
    double final_z() const { return samples.empty() ? 0.0 : samples.back().z; }
};

/// How a simulation records its path.
struct SamplingOptions {
    /// Record after every `stride` events; 0 disables event samples.
    std::uint64_t stride = 0;
    /// Number of uniform grid points in [0, T]; 0 disables the grid.
    std::size_t grid_points = 1000;
};

/// Default stride: every max(1, N / 10) events.
inline std::uint64_t default_stride(std::size_t n)
{
    return std::max<std::uint64_t>(1, n / 10);
}

/// Incremental builder shared by the simulators. Keeps times strictly
/// increasing and emits grid samples with the state that held at each grid
/// time.
class TrajectoryRecorder {
public:
    TrajectoryRecorder(double horizon, SamplingOptions options, std::uint64_t seed);

    /// State (z, xi) holds from now until `until` (exclusive); emit any grid
    /// points falling before `until`.
    void advance(double until, double z, double xi);
    /// An event at time t moved the state to (z, xi).
    void event(double t, double z, double xi);
    /// Absorbed at time t.
    void absorb(double t, double xi = 0.0);
    /// Close the path: forward the last state to the horizon.
    Trajectory finish(double z, double xi);

    void start(double z, double xi);

private:
    void push(double t, double z, double xi);

    Trajectory traj_;
    SamplingOptions options_;
    std::size_t next_grid_ = 1;
    double grid_step_ = 0.0;
    std::uint64_t since_sample_ = 0;
};

/// CSV with header "t,Z,xi", one row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

} // namespace gossip
