#include "gossip/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace gossip {

std::size_t initial_ones(std::size_t n, double z0)
{
    if (!(z0 >= 0.0 && z0 <= 1.0))
        throw invalid_argument("initial fraction z0 must lie in [0, 1]");
    const double x = z0 * static_cast<double>(n);
    const auto k = static_cast<std::size_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
    return std::min(k, n);
}

NodeStateConfig init_config(std::size_t n, double z0, std::uint64_t seed)
{
    const std::size_t k = initial_ones(n, z0);
    // partial Fisher-Yates: the first k entries of a random permutation
    std::vector<node_t> order(n);
    for (node_t v = 0; v < n; ++v)
        order[v] = v;
    rng_t engine(derive_seed(seed, {0x1417}));
    NodeStateConfig config(n);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_index(engine, n - i);
        std::swap(order[i], order[j]);
        config.set(order[i], true);
    }
    return config;
}

std::uint64_t active_arc_count(const NodeStateConfig& config, const Graph& g)
{
    if (config.size() != g.node_count())
        throw invalid_argument(fmt::format("active_arc_count: config has {} nodes, graph has {}", config.size(), g.node_count()));
    std::uint64_t count = 0;
    for (node_t v = 0; v < g.node_count(); ++v) {
        if (config[v])
            continue;
        for (node_t w : g.neighbors(v))
            count += config[w] ? 1 : 0;
    }
    return count;
}

ActiveArcTracker::ActiveArcTracker(const Graph& g, NodeStateConfig config)
    : graph_(&g), config_(std::move(config)), ones_in_neighborhood_(g.node_count(), 0), weights_(g.node_count()),
      position_(g.node_count(), 0)
{
    if (config_.size() != g.node_count())
        throw invalid_argument(fmt::format("state has {} nodes, graph has {}", config_.size(), g.node_count()));
    for (node_t v = 0; v < g.node_count(); ++v) {
        std::uint32_t c = 0;
        for (node_t w : g.neighbors(v))
            c += config_[w] ? 1 : 0;
        ones_in_neighborhood_[v] = c;
        if (config_[v]) {
            position_[v] = static_cast<std::uint32_t>(ones_.size());
            ones_.push_back(v);
        } else {
            weights_.set(v, c);
        }
    }
}

void ActiveArcTracker::flip(node_t w)
{
    const bool now_one = !config_[w];
    config_.set(w, now_one);
    if (now_one) {
        position_[w] = static_cast<std::uint32_t>(ones_.size());
        ones_.push_back(w);
        weights_.set(w, 0);
    } else {
        const node_t last = ones_.back();
        ones_[position_[w]] = last;
        position_[last] = position_[w];
        ones_.pop_back();
    }
    for (node_t v : graph_->in_neighbors(w)) {
        auto& c = ones_in_neighborhood_[v];
        c = now_one ? c + 1 : c - 1;
        if (!config_[v])
            weights_.set(v, c);
    }
    if (!now_one)
        weights_.set(w, ones_in_neighborhood_[w]);
}

node_t ActiveArcTracker::sample_birth(rng_t& engine) const
{
    return static_cast<node_t>(weights_.find(uniform_index(engine, weights_.total())));
}

node_t ActiveArcTracker::sample_one(rng_t& engine) const
{
    return ones_[uniform_index(engine, ones_.size())];
}

Trajectory simulate(const Graph& g, const PersuasionFunction& phi, double beta, const NodeStateConfig& init,
                    const SimulationOptions& options)
{
    if (!(beta >= 0.0))
        throw invalid_argument("simulate: beta must be >= 0");
    if (!(options.horizon > 0.0))
        throw invalid_argument("simulate: horizon must be > 0");
    g.require_strongly_connected();

    const std::size_t n = g.node_count();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double inv_arcs = 1.0 / static_cast<double>(g.arc_count());
    const double edge_rate = beta / g.avg_degree();
    // φ only ever sees points of the lattice {0, 1/N, ..., 1}
    std::vector<double> phi_table(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        phi_table[k] = phi(static_cast<double>(k) * inv_n);

    ActiveArcTracker tracker(g, init);
    rng_t engine(options.seed);
    TrajectoryRecorder recorder(options.horizon, options.sampling, options.seed);

    auto z_now = [&] { return static_cast<double>(tracker.ones_count()) * inv_n; };
    auto xi_now = [&] { return static_cast<double>(tracker.active_count()) * inv_arcs; };

    recorder.start(z_now(), xi_now());
    double t = 0.0;
    while (true) {
        const std::size_t ones = tracker.ones_count();
        if (ones == 0) {
            recorder.absorb(t);
            break;
        }
        const double birth = edge_rate * phi_table[ones] * static_cast<double>(tracker.active_count());
        const double total = birth + static_cast<double>(ones);
        const double next = t + exponential(engine, total);
        recorder.advance(next, z_now(), xi_now());
        if (next > options.horizon)
            break;
        t = next;

        if (uniform01(engine) * total < birth)
            tracker.flip(tracker.sample_birth(engine));
        else
            tracker.flip(tracker.sample_one(engine));

        if (options.check_invariants) {
            const auto scanned = active_arc_count(tracker.config(), g);
            if (scanned != tracker.active_count())
                throw error(fmt::format("active arc count drifted: incremental {} vs scan {}", tracker.active_count(), scanned));
        }
        recorder.event(t, z_now(), xi_now());
    }
    return recorder.finish(z_now(), xi_now());
}

} // namespace gossip
