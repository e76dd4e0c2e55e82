#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gossip/error.hpp"

namespace gossip {

using node_t = std::uint32_t;
using arc_t = std::pair<node_t, node_t>;

/// Immutable directed graph in compressed (CSR) adjacency form.
///
/// An arc (v, w) means that v is influenced by w, so the out-neighborhood of v
/// is the set of nodes able to persuade v. Arcs are stored sorted per node.
/// The reverse adjacency (in-neighborhoods) is kept as well since state
/// updates of w touch every v with w in N_v.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an arc list. Throws graph_error on an out-of-range
    /// endpoint or a duplicate arc.
    static Graph from_arcs(std::size_t node_count, std::vector<arc_t> arcs);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t arc_count() const noexcept { return targets_.size(); }

    /// N_v, sorted.
    std::span<const node_t> neighbors(node_t v) const
    {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    /// {u : v in N_u}, sorted.
    std::span<const node_t> in_neighbors(node_t v) const
    {
        return {in_targets_.data() + in_offsets_[v], in_targets_.data() + in_offsets_[v + 1]};
    }

    std::size_t degree(node_t v) const { return offsets_[v + 1] - offsets_[v]; }
    std::size_t in_degree(node_t v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

    /// d̄ = |E| / N.
    double avg_degree() const noexcept
    {
        return node_count() == 0 ? 0.0 : static_cast<double>(arc_count()) / static_cast<double>(node_count());
    }
    /// Δ: max out-degree.
    std::size_t max_degree() const noexcept { return max_degree_; }
    std::size_t max_in_degree() const noexcept { return max_in_degree_; }
    bool has_self_loops() const noexcept { return has_self_loops_; }
    bool strongly_connected() const noexcept { return strongly_connected_; }
    /// Every arc has its reverse.
    bool symmetric() const noexcept { return symmetric_; }

    bool has_arc(node_t v, node_t w) const;

    /// Arc list in (source, target) lexicographic order.
    std::vector<arc_t> arcs() const;

    /// Throws connectivity_error unless strongly connected.
    void require_strongly_connected() const;

    bool operator==(const Graph& other) const
    {
        return offsets_ == other.offsets_ && targets_ == other.targets_;
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<node_t> targets_;
    std::vector<std::size_t> in_offsets_;
    std::vector<node_t> in_targets_;
    std::size_t max_degree_ = 0;
    std::size_t max_in_degree_ = 0;
    bool has_self_loops_ = false;
    bool strongly_connected_ = false;
    bool symmetric_ = false;
};

/// Builds a symmetric graph from undirected edges {u, v}, u != v: each edge
/// becomes the two arcs (u, v) and (v, u).
Graph symmetric_graph(std::size_t node_count, const std::vector<arc_t>& edges);

// Plain-text edge list: first line "N M self_loops", then M lines "u v"
// (0-based, sorted).
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

// ---- generators -----------------------------------------------------------

/// Attempt cap for generators that retry until strongly connected.
inline constexpr int kConnectivityAttempts = 100;
/// Largest node count accepted by gen_torus.
inline constexpr std::size_t kMaxTorusNodes = std::size_t{1} << 26;

Graph gen_complete(std::size_t n, bool with_self_loops);

/// Erdős–Rényi G(N, p) realized as a symmetric digraph.
Graph gen_er(std::size_t n, double p, std::uint64_t seed);

/// Degree distribution d -> q_d for the configuration model.
using DegreeDistribution = std::map<std::size_t, double>;

/// Configuration model with i.i.d. degrees drawn from q.
Graph gen_config_model(std::size_t n, const DegreeDistribution& q, std::uint64_t seed);

/// Barabási–Albert preferential attachment, m links per new node, seeded by
/// the complete graph on m + 1 nodes.
Graph gen_ba(std::size_t n, std::size_t m, std::uint64_t seed);

/// k-dimensional torus with side n. Node index is the base-n encoding of the
/// coordinates: v = c_0 + c_1 n + ... + c_{k-1} n^{k-1}.
Graph gen_torus(std::size_t k, std::size_t n);

// ---- metrics --------------------------------------------------------------

struct SpectralRadius {
    double value = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

inline constexpr double kSpectralTolerance = 1e-10;
inline constexpr std::size_t kSpectralMaxIterations = 100000;

/// Perron root of the adjacency matrix by power iteration on A + I from the
/// all-ones vector. The shift makes the Perron root strictly dominant on
/// bipartite graphs too.
SpectralRadius spectral_radius(const Graph& g, double tolerance = kSpectralTolerance,
                               std::size_t max_iterations = kSpectralMaxIterations);

/// Exact nonnegative rational, kept reduced.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b)
    {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
};

Rational make_rational(std::int64_t num, std::int64_t den);

struct CheegerResult {
    Rational gamma;
    std::vector<node_t> subset; // a minimizing U
};

inline constexpr std::size_t kCheegerMaxNodes = 20;

/// Bottleneck ratio min_U |∂U| / min(|U|, |V \ U|) by enumeration of all
/// nonempty proper subsets (Gray-code order, O(1) update per subset).
/// Throws size_cap_error for N > kCheegerMaxNodes.
CheegerResult cheeger_exact(const Graph& g);

/// Analytic parameters (a, e1, e2) of a regularly expansive family.
struct ExpansiveParams {
    double a = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
};

struct GraphMetrics {
    double avg_degree = 0.0;
    std::size_t max_degree = 0;
    SpectralRadius spectral;
    std::optional<Rational> cheeger;
    std::optional<ExpansiveParams> family;

    /// gamma value, from the exact Cheeger constant or else from the family
    /// parameters (gamma = d̄ / e2).
    std::optional<double> gamma() const;

    /// γ ≤ ρ_A ≤ Δ and γ ≤ d̄ ≤ Δ, for whichever quantities are present.
    bool inequalities_hold(double tolerance = 1e-9) const;
};

/// Computes all metrics; the Cheeger constant only when N ≤ kCheegerMaxNodes.
GraphMetrics compute_metrics(const Graph& g, std::optional<ExpansiveParams> family = std::nullopt);

} // namespace gossip
