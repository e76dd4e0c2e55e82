#include "gossip/trajectory.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

namespace gossip {

double Trajectory::z_at(double t) const
{
    if (samples.empty())
        return 0.0;
    auto it = std::upper_bound(samples.begin(), samples.end(), t, [](double x, const Sample& s) { return x < s.t; });
    if (it == samples.begin())
        return samples.front().z;
    return std::prev(it)->z;
}

TrajectoryRecorder::TrajectoryRecorder(double horizon, SamplingOptions options, std::uint64_t seed)
    : options_(options)
{
    traj_.horizon = horizon;
    traj_.seed = seed;
    if (options_.grid_points > 1)
        grid_step_ = horizon / static_cast<double>(options_.grid_points - 1);
}

void TrajectoryRecorder::push(double t, double z, double xi)
{
    if (!traj_.samples.empty() && t <= traj_.samples.back().t) {
        // same instant: keep the latest state
        if (t == traj_.samples.back().t)
            traj_.samples.back() = {t, z, xi};
        return;
    }
    traj_.samples.push_back({t, z, xi});
}

void TrajectoryRecorder::start(double z, double xi)
{
    push(0.0, z, xi);
}

void TrajectoryRecorder::advance(double until, double z, double xi)
{
    if (grid_step_ <= 0.0)
        return;
    while (next_grid_ < options_.grid_points) {
        const double g = next_grid_ == options_.grid_points - 1 ? traj_.horizon : grid_step_ * static_cast<double>(next_grid_);
        if (g >= until)
            break;
        push(g, z, xi);
        ++next_grid_;
    }
}

void TrajectoryRecorder::event(double t, double z, double xi)
{
    ++traj_.event_count;
    if (options_.stride > 0 && ++since_sample_ >= options_.stride) {
        since_sample_ = 0;
        push(t, z, xi);
    }
}

void TrajectoryRecorder::absorb(double t, double xi)
{
    traj_.absorbed_at = t;
    push(t, 0.0, xi);
}

Trajectory TrajectoryRecorder::finish(double z, double xi)
{
    if (!traj_.absorbed_at) {
        advance(std::numeric_limits<double>::infinity(), z, xi);
        push(traj_.horizon, z, xi);
    }
    return std::move(traj_);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    os << "t,Z,xi\n";
    for (const auto& s : traj.samples)
        os << fmt::format("{},{},{}\n", s.t, s.z, s.xi);
}

} // namespace gossip
