#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "gossip/birthdeath.hpp"
#include "gossip/bounds.hpp"
#include "gossip/dynamics.hpp"
#include "gossip/experiments.hpp"
#include "gossip/graph.hpp"
#include "gossip/meanfield.hpp"
#include "gossip/persuasion.hpp"
#include "gossip/rng.hpp"

namespace gossip::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Writes through a temporary file in the target directory, then renames.
void write_atomically(const std::string& path, const std::function<void(std::ostream&)>& body)
{
    const fs::path target(path);
    fs::path tmp = target;
    tmp += fmt::format(".tmp{}", ::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw error(fmt::format("cannot write \"{}\"", tmp.string()));
        body(os);
        os.flush();
        if (!os)
            throw error(fmt::format("write to \"{}\" failed", tmp.string()));
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw error(fmt::format("cannot move output into \"{}\": {}", path, ec.message()));
    }
}

void write_json_atomically(const std::string& path, const json& j)
{
    write_atomically(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

std::string sidecar_path(const std::string& path)
{
    return path + ".meta.json";
}

std::string show(double x)
{
    return fmt::format("{}", x);
}

std::string show(const std::optional<double>& x)
{
    return x ? show(*x) : std::string("none");
}

json optional_json(const std::optional<double>& x)
{
    return x ? json(*x) : json(nullptr);
}

// Fully resolved flags of a subcommand: given values, else defaults.
json resolved_config(const CLI::App& sub)
{
    json j = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string& name = opt->get_single_name();
        if (name == "help" || name == "config")
            continue;
        if (opt->count() > 0) {
            const auto& results = opt->results();
            if (opt->get_expected_min() == 0)
                j[name] = true;
            else if (results.size() == 1)
                j[name] = results.front();
            else
                j[name] = results;
        } else if (opt->get_expected_min() == 0) {
            j[name] = false;
        } else if (!opt->get_default_str().empty()) {
            j[name] = opt->get_default_str();
        }
    }
    return j;
}

struct GraphArgs {
    GraphFamily family;
    std::string degrees;
    std::string graph_path;
};

GraphArgs graph_args(const std::string& kind)
{
    GraphArgs g;
    g.family.kind = kind;
    return g;
}

void add_graph_options(CLI::App* sub, GraphArgs& g, bool allow_meanfield)
{
    std::vector<std::string> kinds{"complete", "er", "config", "ba", "torus"};
    if (allow_meanfield)
        kinds.insert(kinds.begin(), "meanfield");
    sub->add_option("--family", g.family.kind, "Graph family")->check(CLI::IsMember(kinds));
    sub->add_option("--n", g.family.n, "Number of nodes")->check(CLI::PositiveNumber);
    sub->add_option("--p", g.family.p, "Erdos-Renyi edge probability")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--m", g.family.m, "Barabasi-Albert links per new node")->check(CLI::PositiveNumber);
    sub->add_option("--k", g.family.k, "Torus dimension")->check(CLI::PositiveNumber);
    sub->add_option("--side", g.family.side, "Torus side length");
    sub->add_option("--degrees", g.degrees, "Configuration-model degree distribution d:q,d:q,...");
    sub->add_option("--graph", g.graph_path, "Edge-list file (overrides --family)")->check(CLI::ExistingFile);
}

void resolve_graph_args(GraphArgs& g)
{
    if (!g.graph_path.empty()) {
        g.family.kind = "file";
        g.family.path = g.graph_path;
    }
    if (g.family.kind == "config") {
        if (g.degrees.empty())
            throw CLI::ValidationError("--degrees", "required for the config family");
        g.family.degrees = parse_degree_distribution(g.degrees);
    }
}

std::optional<ExpansiveParams> parse_expansive(const std::string& text)
{
    if (text.empty())
        return std::nullopt;
    std::vector<double> v;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--expansive", "expects a,e1,e2");
        }
    }
    if (v.size() != 3)
        throw CLI::ValidationError("--expansive", "expects a,e1,e2");
    return ExpansiveParams{v[0], v[1], v[2]};
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> grid;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--grid", fmt::format("bad value \"{}\"", item));
        }
    }
    return grid;
}

void print_metrics(std::ostream& out, const Graph& g, const GraphMetrics& m)
{
    out << "nodes=" << g.node_count() << '\n';
    out << "arcs=" << g.arc_count() << '\n';
    out << "self_loops=" << (g.has_self_loops() ? 1 : 0) << '\n';
    out << "strongly_connected=" << (g.strongly_connected() ? 1 : 0) << '\n';
    out << "avg_degree=" << show(m.avg_degree) << '\n';
    out << "max_degree=" << m.max_degree << '\n';
    out << "spectral_radius=" << show(m.spectral.value) << '\n';
    out << "spectral_residual=" << show(m.spectral.residual) << '\n';
    out << "spectral_converged=" << (m.spectral.converged ? 1 : 0) << '\n';
    if (m.cheeger)
        out << "cheeger=" << m.cheeger->num << '/' << m.cheeger->den << '\n'
            << "cheeger_value=" << show(m.cheeger->value()) << '\n';
    else
        out << "cheeger=none\n";
    out << "inequalities_hold=" << (m.inequalities_hold() ? 1 : 0) << '\n';
}

// ---- subcommands ------------------------------------------------------------

struct GenGraphCmd {
    GraphArgs graph = graph_args("er");
    bool self_loops = true;
    std::uint64_t seed = 0;
    std::string out;

    void add(CLI::App* sub)
    {
        add_graph_options(sub, graph, false);
        sub->add_flag("--self-loops,!--no-self-loops", self_loops, "Self-loops on the complete graph");
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--out", out, "Edge-list output file")->required();
    }

    void run(const CLI::App& sub, std::ostream& os)
    {
        resolve_graph_args(graph);
        const Graph g = graph.family.kind == "complete" ? gen_complete(graph.family.n, self_loops)
                                                        : make_graph(graph.family, seed);
        write_atomically(out, [&](std::ostream& f) { write_edge_list(f, g); });
        write_json_atomically(sidecar_path(out), {{"version", kVersionTag},
                                                  {"config", resolved_config(sub)},
                                                  {"nodes", g.node_count()},
                                                  {"arcs", g.arc_count()}});
        os << "nodes=" << g.node_count() << '\n' << "arcs=" << g.arc_count() << '\n';
    }
};

struct MetricsCmd {
    GraphArgs graph = graph_args("er");
    std::uint64_t seed = 0;
    std::string expansive;

    void add(CLI::App* sub)
    {
        add_graph_options(sub, graph, false);
        sub->add_option("--seed", seed, "Random seed for generated graphs");
        sub->add_option("--expansive", expansive, "Analytic family parameters a,e1,e2");
    }

    void run(const CLI::App&, std::ostream& os)
    {
        resolve_graph_args(graph);
        const auto family = parse_expansive(expansive);
        const Graph g = make_graph(graph.family, seed);
        print_metrics(os, g, compute_metrics(g, family));
    }
};

struct SimulateCmd {
    GraphArgs graph = graph_args("meanfield");
    std::string phi = "linear";
    double beta = 10.0;
    double z0 = 0.5;
    double horizon = 100.0;
    std::uint64_t seed = 0;
    std::uint64_t stride = 0;
    std::size_t grid_points = 1000;
    std::string out;

    void add(CLI::App* sub)
    {
        add_graph_options(sub, graph, true);
        sub->add_option("--phi", phi, "Persuasion function");
        sub->add_option("--beta", beta, "Rate parameter")->check(CLI::NonNegativeNumber);
        sub->add_option("--z0", z0, "Initial fraction of ones")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--T", horizon, "Time horizon")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--stride", stride, "Record every stride events (0: max(1, N/10))");
        sub->add_option("--grid-points", grid_points, "Uniform sample grid size");
        sub->add_option("--out", out, "Trajectory CSV output file")->required();
    }

    void run(const CLI::App& sub, std::ostream& os)
    {
        resolve_graph_args(graph);
        const auto f = PersuasionFunction::parse(phi);
        const std::size_t n = graph.family.kind == "meanfield" ? graph.family.n : 0;
        Trajectory traj;
        std::size_t nodes = n;
        if (graph.family.kind == "meanfield") {
            const auto chain = rates_meanfield(n, beta, f);
            const auto k0 = initial_ones(n, z0);
            traj = simulate_bd(chain, k0,
                               {horizon, derive_seed(seed, {3}), {stride ? stride : default_stride(n), grid_points}});
        } else {
            const Graph g = make_graph(graph.family, derive_seed(seed, {1}));
            nodes = g.node_count();
            SimulationOptions options;
            options.horizon = horizon;
            options.seed = derive_seed(seed, {3});
            options.sampling = {stride ? stride : default_stride(nodes), grid_points};
            traj = simulate(g, f, beta, init_config(nodes, z0, derive_seed(seed, {2})), options);
        }
        write_atomically(out, [&](std::ostream& csv) { write_trajectory_csv(csv, traj); });
        write_json_atomically(sidecar_path(out), {{"version", kVersionTag},
                                                  {"config", resolved_config(sub)},
                                                  {"graph", graph.family.to_json()},
                                                  {"nodes", nodes},
                                                  {"phi", f.to_string()},
                                                  {"beta", beta},
                                                  {"seed", seed},
                                                  {"absorbed_at", optional_json(traj.absorbed_at)},
                                                  {"event_count", traj.event_count}});
        os << "absorbed_at=" << show(traj.absorbed_at) << '\n'
           << "events=" << traj.event_count << '\n'
           << "final_z=" << show(traj.final_z()) << '\n';
    }
};

struct MeanfieldCmd {
    std::string phi = "linear";
    double beta = 10.0;
    std::optional<double> z0;
    double horizon = 100.0;
    double step = kDefaultOdeStep;
    std::string out;

    void add(CLI::App* sub)
    {
        sub->add_option("--phi", phi, "Persuasion function");
        sub->add_option("--beta", beta, "Rate parameter")->check(CLI::PositiveNumber);
        sub->add_option("--z0", z0, "Integrate the ODE from this initial fraction")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--T", horizon, "ODE horizon")->check(CLI::PositiveNumber);
        sub->add_option("--step", step, "ODE step")->check(CLI::PositiveNumber);
        sub->add_option("--out", out, "ODE trajectory CSV (with --z0)");
    }

    void run(const CLI::App&, std::ostream& os, std::ostream& err)
    {
        const auto f = PersuasionFunction::parse(phi);
        if (const auto report = validate_assumptions(f); report.standard() && !report.strong())
            err << "warning: phi'(0) < phi(0) does not hold; results use the standard assumptions only\n";
        const auto r = classify_regime(beta, f);
        os << "beta_star=" << show(r.beta_star) << '\n'
           << "phi0_inv=" << show(r.phi0_inv) << '\n'
           << "z_u=" << show(r.z_u) << '\n'
           << "z_s=" << show(r.z_s) << '\n'
           << "regime=" << r.regime << '\n'
           << "tangency=" << (r.tangency ? 1 : 0) << '\n';
        if (!z0) {
            if (!out.empty())
                throw CLI::ValidationError("--out", "requires --z0");
            return;
        }
        const auto sol = integrate_ode(beta, f, *z0, horizon, step);
        os << "z_T=" << show(sol.z.back()) << '\n' << "step_halving_delta=" << show(sol.step_halving_delta) << '\n';
        if (!out.empty())
            write_atomically(out, [&](std::ostream& csv) {
                csv << "t,z\n";
                for (std::size_t i = 0; i < sol.t.size(); ++i)
                    csv << fmt::format("{},{}\n", sol.t[i], sol.z[i]);
            });
    }
};

struct ThresholdsCmd {
    GraphArgs graph = graph_args("er");
    std::string phi = "linear";
    double beta = 10.0;
    std::uint64_t seed = 0;
    std::string expansive;

    void add(CLI::App* sub)
    {
        add_graph_options(sub, graph, false);
        sub->add_option("--phi", phi, "Persuasion function");
        sub->add_option("--beta", beta, "Rate parameter")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Random seed for generated graphs");
        sub->add_option("--expansive", expansive,
                        "Analytic family parameters a,e1,e2; without a graph flag the family form is used");
    }

    void run(const CLI::App& sub, std::ostream& os)
    {
        resolve_graph_args(graph);
        const auto family = parse_expansive(expansive);
        const bool graph_given = sub.count("--family") > 0 || sub.count("--graph") > 0;
        if (family && !graph_given) {
            const auto t = expansive_thresholds(family->e1, family->e2, family->a, beta);
            os << "form=expansive\n"
               << "z_u_prime=" << show(t.z_u_prime) << '\n'
               << "z_u_dprime=" << show(t.z_u_dprime) << '\n'
               << "z_s=" << show(t.z_s) << '\n'
               << "regime=" << (t.regime == 0 ? std::string("no-conclusion") : std::to_string(t.regime)) << '\n'
               << "source=analytic\n";
            return;
        }
        const auto f = PersuasionFunction::parse(phi);
        const Graph g = make_graph(graph.family, seed);
        const auto m = compute_metrics(g, family);
        const auto t = general_thresholds(g, m, beta, f);
        os << "form=graph\n"
           << "avg_degree=" << show(m.avg_degree) << '\n'
           << "max_degree=" << m.max_degree << '\n'
           << "spectral_radius=" << show(m.spectral.value) << '\n'
           << "gamma=" << show(t.gamma) << '\n'
           << "gamma_source=" << t.gamma_source << '\n'
           << "beta_star=" << show(t.beta_star) << '\n'
           << "z_u_prime=" << show(t.z_u_prime) << '\n'
           << "z_u_dprime=" << show(t.z_u_dprime) << '\n'
           << "z_s_general=" << show(t.z_s_general) << '\n'
           << "z_u_gamma=" << show(t.z_u_gamma) << '\n'
           << "z_s_gamma=" << show(t.z_s_gamma) << '\n'
           << "z_s_rho=" << show(t.z_s_rho) << '\n'
           << "beta_fast_extinction=" << show(t.beta_fast_extinction) << '\n'
           << "beta_fast_extinction_spectral=" << show(t.beta_fast_extinction_spectral) << '\n'
           << "beta_initial_condition_low=" << show(t.beta_initial_condition_low) << '\n'
           << "beta_initial_condition_high=" << show(t.beta_initial_condition_high) << '\n'
           << "beta_persistence=" << show(t.beta_persistence) << '\n'
           << "initial_condition_band_empty=" << (t.initial_condition_band_empty ? 1 : 0) << '\n'
           << "ordered=" << (t.ordered() ? 1 : 0) << '\n'
           << "regime=" << to_string(t.regime) << '\n';
    }
};

struct SweepCmd {
    GraphArgs graph = graph_args("meanfield");
    std::string phi = "linear";
    std::string axis = "beta";
    std::string grid;
    double beta = 10.0;
    double z0 = 1.0;
    std::size_t replicas = 500;
    double horizon = 100.0;
    std::uint64_t seed = 0;
    bool fixed_graph = false;
    std::size_t threads = 0;
    std::string out;

    void add(CLI::App* sub)
    {
        add_graph_options(sub, graph, true);
        sub->add_option("--phi", phi, "Persuasion function");
        sub->add_option("--axis", axis, "Swept parameter")->check(CLI::IsMember({"beta", "z0"}));
        sub->add_option("--grid", grid, "Comma-separated axis values (default: the figure grid)");
        sub->add_option("--beta", beta, "Fixed beta when sweeping z0")->check(CLI::NonNegativeNumber);
        sub->add_option("--z0", z0, "Fixed z0 when sweeping beta")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--replicas", replicas, "Replicas per grid point")->check(CLI::PositiveNumber);
        sub->add_option("--T", horizon, "Success horizon")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Master seed")->required();
        sub->add_flag("--fixed-graph", fixed_graph, "Use one graph instance for all replicas");
        sub->add_option("--threads", threads, "Worker threads (0: all cores)");
        sub->add_option("--out", out, "Sweep CSV output file")->required();
    }

    void run(const CLI::App& sub, std::ostream& os)
    {
        resolve_graph_args(graph);
        SweepSpec spec;
        spec.family = graph.family;
        spec.phi = phi;
        spec.axis = axis == "beta" ? SweepAxis::beta : SweepAxis::z0;
        spec.grid = grid.empty() ? (spec.axis == SweepAxis::beta ? default_beta_grid() : default_z0_grid())
                                 : parse_grid(grid);
        spec.beta = beta;
        spec.z0 = z0;
        spec.replicas = replicas;
        spec.horizon = horizon;
        spec.master_seed = seed;
        spec.regenerate_graph_per_replica = !fixed_graph;
        spec.threads = threads;
        spec.validate();

        const auto result = run_sweep(spec);
        write_atomically(out, [&](std::ostream& csv) { write_sweep_csv(csv, result); });
        auto meta = sweep_metadata(result);
        meta["config"] = resolved_config(sub);
        write_json_atomically(sidecar_path(out), meta);
        for (const auto& row : result.rows)
            os << fmt::format("{}={} successes={}/{}\n", to_string(spec.axis), row.value, row.successes, row.replicas);
    }
};

// CLI11 only reads config files on the root app, so the subcommand's
// --config file is expanded into "--key=value" arguments here. Keys already
// given on the command line are skipped.
std::vector<std::string> expand_config(const CLI::App& app, const std::vector<std::string>& args)
{
    const auto sub_pos = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.starts_with("-"); });
    if (sub_pos == args.end())
        return args;
    const CLI::App* sub = app.get_subcommand_no_throw(*sub_pos);
    if (sub == nullptr)
        return args;

    std::optional<std::string> path;
    for (auto it = sub_pos + 1; it != args.end(); ++it) {
        if (*it == "--config" && it + 1 != args.end())
            path = *(it + 1);
        else if (it->starts_with("--config="))
            path = it->substr(9);
    }
    if (!path)
        return args;
    std::ifstream in(*path);
    if (!in)
        throw CLI::FileError::Missing(*path);

    auto given = [&](const CLI::Option* opt) {
        std::vector<std::string> names = opt->get_lnames();
        for (const auto& f : opt->get_fnames())
            names.push_back(f);
        return std::any_of(sub_pos + 1, args.end(), [&](const std::string& a) {
            return std::any_of(names.begin(), names.end(),
                               [&](const std::string& n) { return a == "--" + n || a.starts_with("--" + n + "="); });
        });
    };

    std::vector<std::string> expanded = args;
    for (const auto& item : CLI::ConfigINI().from_config(in)) {
        if (item.name == "++" || item.name == "--")
            continue;
        const CLI::Option* opt = item.parents.empty() ? sub->get_option_no_throw("--" + item.name) : nullptr;
        if (opt == nullptr || item.name == "config")
            throw CLI::ConfigError::Extras(item.fullname());
        if (given(opt))
            continue;
        std::string value;
        for (const auto& part : item.inputs)
            value += (value.empty() ? "" : ",") + part;
        expanded.push_back("--" + item.name + "=" + value);
    }
    return expanded;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Gossip diffusion on networks: simulation, mean-field analysis and threshold sweeps", "gossipnet"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersionTag);
    app.option_defaults()->always_capture_default();

    GenGraphCmd gen_graph;
    MetricsCmd metrics;
    SimulateCmd simulate_cmd;
    MeanfieldCmd meanfield;
    ThresholdsCmd thresholds;
    SweepCmd sweep;

    auto make = [&](const char* name, const char* description) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->set_config("--config", "", "Config file of key=value lines (explicit flags win)");
        return sub;
    };
    CLI::App* gen_graph_app = make("gen-graph", "Generate a graph and write it as an edge list");
    CLI::App* metrics_app = make("metrics", "Degree statistics, spectral radius and Cheeger constant");
    CLI::App* simulate_app = make("simulate", "Simulate one path of the jump process");
    CLI::App* meanfield_app = make("meanfield", "Mean-field critical rate, equilibria and regime");
    CLI::App* thresholds_app = make("thresholds", "General-graph thresholds and regime");
    thresholds_app->alias("general-thresholds");
    CLI::App* sweep_app = make("sweep", "Monte Carlo success-probability sweep");

    gen_graph.add(gen_graph_app);
    metrics.add(metrics_app);
    simulate_cmd.add(simulate_app);
    meanfield.add(meanfield_app);
    thresholds.add(thresholds_app);
    sweep.add(sweep_app);

    try {
        const auto expanded = expand_config(app, args);
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen_graph_app->parsed())
            gen_graph.run(*gen_graph_app, out);
        else if (metrics_app->parsed())
            metrics.run(*metrics_app, out);
        else if (simulate_app->parsed())
            simulate_cmd.run(*simulate_app, out);
        else if (meanfield_app->parsed())
            meanfield.run(*meanfield_app, out, err);
        else if (thresholds_app->parsed())
            thresholds.run(*thresholds_app, out);
        else if (sweep_app->parsed())
            sweep.run(*sweep_app, out);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const gossip::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace gossip::cli
