#include "gossip/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/core.h>

#include "gossip/birthdeath.hpp"
#include "gossip/dynamics.hpp"
#include "gossip/rng.hpp"

namespace gossip {

namespace {

constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kDynamicsStream = 3;
constexpr std::uint64_t kFixedGraphPoint = 0xffffffffULL;

std::string format_optional(const std::optional<double>& x)
{
    return x ? fmt::format("{}", *x) : std::string{};
}

} // namespace

std::size_t GraphFamily::node_count() const
{
    if (kind == "torus") {
        std::size_t total = 1;
        for (std::size_t i = 0; i < k; ++i)
            total *= side;
        return total;
    }
    return n;
}

nlohmann::json GraphFamily::to_json() const
{
    nlohmann::json j{{"kind", kind}};
    if (kind == "torus") {
        j["k"] = k;
        j["side"] = side;
    } else if (kind == "file") {
        j["path"] = path;
    } else {
        j["n"] = n;
    }
    if (kind == "er")
        j["p"] = p;
    if (kind == "ba")
        j["m"] = m;
    if (kind == "config")
        j["degrees"] = to_string(degrees);
    return j;
}

DegreeDistribution parse_degree_distribution(const std::string& text)
{
    DegreeDistribution q;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, end - start);
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw invalid_argument(fmt::format("degree distribution \"{}\": entries are d:q", text));
        try {
            std::size_t used = 0;
            const auto d = std::stoul(item.substr(0, colon), &used);
            if (used != colon)
                throw std::invalid_argument("degree");
            const std::string prob = item.substr(colon + 1);
            const double p = std::stod(prob, &used);
            if (used != prob.size())
                throw std::invalid_argument("probability");
            q[d] += p;
        } catch (const std::exception&) {
            throw invalid_argument(fmt::format("degree distribution \"{}\": bad entry \"{}\"", text, item));
        }
        start = end + 1;
    }
    return q;
}

std::string to_string(const DegreeDistribution& q)
{
    std::string s;
    for (const auto& [d, p] : q)
        s += fmt::format("{}{}:{}", s.empty() ? "" : ",", d, p);
    return s;
}

Graph make_graph(const GraphFamily& family, std::uint64_t seed)
{
    if (family.kind == "complete")
        return gen_complete(family.n, true);
    if (family.kind == "er")
        return gen_er(family.n, family.p, seed);
    if (family.kind == "config")
        return gen_config_model(family.n, family.degrees, seed);
    if (family.kind == "ba")
        return gen_ba(family.n, family.m, seed);
    if (family.kind == "torus")
        return gen_torus(family.k, family.side);
    if (family.kind == "file") {
        std::ifstream in(family.path);
        if (!in)
            throw invalid_argument(fmt::format("cannot open edge list \"{}\"", family.path));
        return read_edge_list(in);
    }
    throw invalid_argument(fmt::format("graph family \"{}\" has no graph instance", family.kind));
}

std::string to_string(SweepAxis axis)
{
    return axis == SweepAxis::beta ? "beta" : "z0";
}

void SweepSpec::validate() const
{
    static const std::vector<std::string> kinds{"meanfield", "complete", "er", "config", "ba", "torus", "file"};
    if (std::find(kinds.begin(), kinds.end(), family.kind) == kinds.end())
        throw invalid_argument(fmt::format("unknown graph family \"{}\"", family.kind));
    if (grid.empty())
        throw invalid_argument("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i - 1] < grid[i]))
            throw invalid_argument("sweep grid must be strictly increasing");
    for (double v : grid) {
        if (axis == SweepAxis::beta && !(v >= 0.0))
            throw invalid_argument("beta grid values must be >= 0");
        if (axis == SweepAxis::z0 && !(v >= 0.0 && v <= 1.0))
            throw invalid_argument("z0 grid values must lie in [0, 1]");
    }
    if (replicas < 1)
        throw invalid_argument("replicas must be >= 1");
    if (!(horizon > 0.0))
        throw invalid_argument("horizon must be > 0");
    if (!(beta >= 0.0) || !(z0 >= 0.0 && z0 <= 1.0))
        throw invalid_argument("fixed beta must be >= 0 and fixed z0 must lie in [0, 1]");
    (void)PersuasionFunction::parse(phi);
}

nlohmann::json SweepSpec::to_json() const
{
    return {
        {"family", family.to_json()},
        {"phi", phi},
        {"axis", to_string(axis)},
        {"grid", grid},
        {"beta", beta},
        {"z0", z0},
        {"replicas", replicas},
        {"horizon", horizon},
        {"master_seed", master_seed},
        {"regenerate_graph_per_replica", regenerate_graph_per_replica},
    };
}

std::vector<double> default_beta_grid()
{
    return {0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4, 4.5, 5, 6, 7, 8, 9, 10, 12, 14, 16, 18, 20};
}

std::vector<double> default_z0_grid()
{
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i)
        grid.push_back(i / 100.0);
    return grid;
}

bool is_success(const Trajectory& traj, double horizon)
{
    if (traj.absorbed_at)
        return *traj.absorbed_at > horizon;
    if (traj.horizon < horizon || traj.truncated)
        throw invalid_argument(fmt::format("is_success: path ends at {} before T = {} without absorption", traj.horizon, horizon));
    return true;
}

std::optional<SurvivorStatistic> survivor_final_z(const std::vector<Trajectory>& trajectories, double horizon)
{
    SurvivorStatistic stat;
    stat.min = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& traj : trajectories) {
        if (!is_success(traj, horizon))
            continue;
        const double z = traj.z_at(horizon);
        sum += z;
        stat.min = std::min(stat.min, z);
        ++stat.count;
    }
    if (stat.count == 0)
        return std::nullopt;
    stat.mean = sum / static_cast<double>(stat.count);
    return stat;
}

Trajectory run_replica(const SweepSpec& spec, const Graph* graph, double beta, double z0, std::uint64_t seed)
{
    const auto phi = PersuasionFunction::parse(spec.phi);
    const SamplingOptions no_samples{0, 0};
    if (spec.family.kind == "meanfield") {
        const std::size_t n = spec.family.n;
        const auto chain = rates_meanfield(n, beta, phi);
        const auto k0 = initial_ones(n, z0);
        return simulate_bd(chain, k0, {spec.horizon, derive_seed(seed, {kDynamicsStream}), no_samples});
    }
    const auto init = init_config(graph->node_count(), z0, derive_seed(seed, {kInitStream}));
    SimulationOptions options;
    options.horizon = spec.horizon;
    options.seed = derive_seed(seed, {kDynamicsStream});
    options.sampling = no_samples;
    return simulate(*graph, phi, beta, init, options);
}

SweepResult run_sweep(const SweepSpec& spec)
{
    spec.validate();
    const bool needs_graph = spec.family.kind != "meanfield";
    const bool per_replica = needs_graph && spec.family.is_random() && spec.regenerate_graph_per_replica;

    std::optional<Graph> fixed;
    if (needs_graph && !per_replica)
        fixed = make_graph(spec.family, derive_seed(spec.master_seed, {kFixedGraphPoint, 0, kGraphStream}));

    struct Outcome {
        bool graph_failed = false;
        bool success = false;
        double final_z = 0.0;
        double absorbed_at = 0.0;
    };
    const std::size_t points = spec.grid.size();
    const std::size_t tasks = points * spec.replicas;
    std::vector<Outcome> outcomes(tasks);

    auto run_task = [&](std::size_t task) {
        const std::size_t point = task / spec.replicas, replica = task % spec.replicas;
        const double beta = spec.axis == SweepAxis::beta ? spec.grid[point] : spec.beta;
        const double z0 = spec.axis == SweepAxis::z0 ? spec.grid[point] : spec.z0;
        const std::uint64_t seed = derive_seed(spec.master_seed, {point, replica});
        Outcome& out = outcomes[task];

        std::optional<Graph> own;
        const Graph* graph = fixed ? &*fixed : nullptr;
        if (per_replica) {
            try {
                own = make_graph(spec.family, derive_seed(seed, {kGraphStream}));
            } catch (const connectivity_error&) {
                out.graph_failed = true;
                return;
            }
            graph = &*own;
        }
        const auto traj = run_replica(spec, graph, beta, z0, seed);
        out.success = is_success(traj, spec.horizon);
        out.final_z = traj.z_at(spec.horizon);
        out.absorbed_at = traj.absorbed_at.value_or(0.0);
    };

    std::size_t threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
    threads = std::min(threads, tasks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t task; (task = next.fetch_add(1)) < tasks;) {
            try {
                run_task(task);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = tasks;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepResult result;
    result.spec = spec;
    result.version = kVersionTag;
    for (std::size_t point = 0; point < points; ++point) {
        SweepRow row;
        row.value = spec.grid[point];
        double survivor_sum = 0.0, absorb_sum = 0.0;
        double survivor_min = std::numeric_limits<double>::infinity();
        std::size_t failures = 0;
        for (std::size_t replica = 0; replica < spec.replicas; ++replica) {
            const Outcome& o = outcomes[point * spec.replicas + replica];
            if (o.graph_failed) {
                ++row.graph_failures;
                continue;
            }
            ++row.replicas;
            if (o.success) {
                ++row.successes;
                survivor_sum += o.final_z;
                survivor_min = std::min(survivor_min, o.final_z);
            } else {
                ++failures;
                absorb_sum += o.absorbed_at;
            }
        }
        if (row.successes > 0) {
            row.mean_survivor_z = survivor_sum / static_cast<double>(row.successes);
            row.min_survivor_z = survivor_min;
        }
        if (failures > 0)
            row.mean_absorb_time = absorb_sum / static_cast<double>(failures);
        result.rows.push_back(row);
    }
    return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result)
{
    os << "axis,value,successes,replicas,mean_survivor_z,mean_absorb_time\n";
    const std::string axis = to_string(result.spec.axis);
    for (const auto& row : result.rows)
        os << fmt::format("{},{},{},{},{},{}\n", axis, row.value, row.successes, row.replicas,
                          format_optional(row.mean_survivor_z), format_optional(row.mean_absorb_time));
}

nlohmann::json sweep_metadata(const SweepResult& result)
{
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& row = result.rows[i];
        nlohmann::json p{{"index", i},
                         {"value", row.value},
                         {"successes", row.successes},
                         {"replicas", row.replicas},
                         {"graph_failures", row.graph_failures}};
        if (row.min_survivor_z)
            p["min_survivor_z"] = *row.min_survivor_z;
        points.push_back(p);
    }
    return {
        {"version", result.version},
        {"spec", result.spec.to_json()},
        {"seed_derivation", "replica seed = mix(master_seed, point_index, replica_index)"},
        {"points", points},
    };
}

} // namespace gossip
