#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/core.h>

#include "gossip/graph.hpp"
#include "gossip/rng.hpp"

namespace gossip {

namespace {

std::uint64_t edge_key(node_t u, node_t v)
{
    if (u > v)
        std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

template <class T>
void shuffle(std::vector<T>& items, rng_t& engine)
{
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[uniform_index(engine, i)]);
}

// Undirected simple edge set with O(1) membership and random access.
class EdgeSet {
public:
    bool contains(node_t u, node_t v) const { return keys_.count(edge_key(u, v)) != 0; }
    bool insert(node_t u, node_t v)
    {
        if (u == v || !keys_.insert(edge_key(u, v)).second)
            return false;
        edges_.emplace_back(u, v);
        return true;
    }
    void erase_at(std::size_t i)
    {
        keys_.erase(edge_key(edges_[i].first, edges_[i].second));
        edges_[i] = edges_.back();
        edges_.pop_back();
    }
    const std::vector<arc_t>& edges() const { return edges_; }

private:
    std::unordered_set<std::uint64_t> keys_;
    std::vector<arc_t> edges_;
};

// Degrees i.i.d. from q, total made even.
std::vector<std::size_t> sample_degrees(std::size_t n, const DegreeDistribution& q, rng_t& engine)
{
    std::vector<std::size_t> support;
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& [d, p] : q) {
        if (p <= 0.0)
            continue;
        acc += p;
        support.push_back(d);
        cumulative.push_back(acc);
    }
    auto draw = [&] {
        const double u = uniform01(engine) * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return support[std::min<std::size_t>(it - cumulative.begin(), support.size() - 1)];
    };

    std::vector<std::size_t> degrees(n);
    std::size_t total = 0;
    for (auto& d : degrees) {
        d = draw();
        total += d;
    }
    // Parity fix: resample one node; if the support has a single parity this
    // never succeeds and one node is given one extra stub instead.
    for (int attempt = 0; attempt < 100 && total % 2 == 1; ++attempt) {
        const std::size_t v = uniform_index(engine, n);
        total -= degrees[v];
        degrees[v] = draw();
        total += degrees[v];
    }
    if (total % 2 == 1) {
        const std::size_t v = uniform_index(engine, n);
        if (degrees[v] + 1 < n)
            ++degrees[v];
        else
            --degrees[v];
    }
    return degrees;
}

// Stub matching. Self-loops and repeated pairs are re-matched among
// themselves, then resolved by degree-preserving switches against random
// existing edges; pairs that still fail are erased.
std::vector<arc_t> match_stubs(const std::vector<std::size_t>& degrees, rng_t& engine)
{
    std::vector<node_t> stubs;
    for (node_t v = 0; v < degrees.size(); ++v)
        stubs.insert(stubs.end(), degrees[v], v);

    EdgeSet edges;
    std::vector<node_t> pending = std::move(stubs);
    for (int round = 0; round < 50 && pending.size() >= 2; ++round) {
        shuffle(pending, engine);
        std::vector<node_t> rejected;
        for (std::size_t i = 0; i + 1 < pending.size(); i += 2) {
            if (!edges.insert(pending[i], pending[i + 1])) {
                rejected.push_back(pending[i]);
                rejected.push_back(pending[i + 1]);
            }
        }
        if (rejected.size() == pending.size())
            break;
        pending = std::move(rejected);
    }

    for (std::size_t i = 0; i + 1 < pending.size(); i += 2) {
        const node_t a = pending[i], b = pending[i + 1];
        for (int attempt = 0; attempt < 1000 && !edges.edges().empty(); ++attempt) {
            const std::size_t idx = uniform_index(engine, edges.edges().size());
            auto [c, d] = edges.edges()[idx];
            if (bernoulli(engine, 0.5))
                std::swap(c, d);
            // (a,b) + (c,d) -> (a,c) + (b,d)
            if (a == c || b == d || edges.contains(a, c) || edges.contains(b, d))
                continue;
            if (edge_key(a, c) == edge_key(b, d))
                continue;
            edges.erase_at(idx);
            edges.insert(a, c);
            edges.insert(b, d);
            break;
        }
    }
    return edges.edges();
}

} // namespace

Graph gen_complete(std::size_t n, bool with_self_loops)
{
    if (n == 0)
        throw invalid_argument("gen_complete: n must be >= 1");
    std::vector<arc_t> arcs;
    arcs.reserve(n * (with_self_loops ? n : n - 1));
    for (node_t v = 0; v < n; ++v)
        for (node_t w = 0; w < n; ++w)
            if (with_self_loops || v != w)
                arcs.emplace_back(v, w);
    return Graph::from_arcs(n, std::move(arcs));
}

Graph gen_er(std::size_t n, double p, std::uint64_t seed)
{
    if (n < 2)
        throw invalid_argument("gen_er: n must be >= 2");
    if (!(p > 0.0 && p <= 1.0))
        throw invalid_argument("gen_er: p must lie in (0, 1]");

    for (int attempt = 0; attempt < kConnectivityAttempts; ++attempt) {
        rng_t engine(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
        std::vector<arc_t> edges;
        for (node_t u = 0; u < n; ++u)
            for (node_t v = u + 1; v < n; ++v)
                if (p >= 1.0 || bernoulli(engine, p))
                    edges.emplace_back(u, v);
        Graph g = symmetric_graph(n, edges);
        if (g.strongly_connected())
            return g;
    }
    throw connectivity_error(fmt::format(
        "gen_er: no connected instance in {} attempts (p = {} is too small for n = {})",
        kConnectivityAttempts, p, n));
}

Graph gen_config_model(std::size_t n, const DegreeDistribution& q, std::uint64_t seed)
{
    if (n < 2)
        throw invalid_argument("gen_config_model: n must be >= 2");
    double total = 0.0;
    for (const auto& [d, p] : q) {
        if (p < 0.0)
            throw invalid_argument("gen_config_model: negative probability");
        if (p > 0.0 && d < 3)
            throw invalid_argument(fmt::format("gen_config_model: q_{} > 0 but degrees must be >= 3", d));
        if (p > 0.0 && d >= n)
            throw invalid_argument(fmt::format("gen_config_model: degree {} infeasible for n = {}", d, n));
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw invalid_argument(fmt::format("gen_config_model: probabilities sum to {}, not 1", total));

    for (int attempt = 0; attempt < kConnectivityAttempts; ++attempt) {
        rng_t engine(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
        const auto degrees = sample_degrees(n, q, engine);
        Graph g = symmetric_graph(n, match_stubs(degrees, engine));
        if (g.strongly_connected())
            return g;
    }
    throw connectivity_error(
        fmt::format("gen_config_model: no connected instance in {} attempts", kConnectivityAttempts));
}

Graph gen_ba(std::size_t n, std::size_t m, std::uint64_t seed)
{
    if (m < 1)
        throw invalid_argument("gen_ba: m must be >= 1");
    if (n < m + 2)
        throw invalid_argument("gen_ba: n must be >= m + 2");

    rng_t engine(derive_seed(seed, {0}));
    std::vector<arc_t> edges;
    // Each node appears once per incident edge: uniform picks from this list
    // are degree-proportional.
    std::vector<node_t> endpoints;
    for (node_t u = 0; u <= m; ++u)
        for (node_t v = u + 1; v <= m; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    std::vector<node_t> chosen;
    for (node_t t = static_cast<node_t>(m + 1); t < n; ++t) {
        chosen.clear();
        while (chosen.size() < m) {
            const node_t target = endpoints[uniform_index(engine, endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), target) == chosen.end())
                chosen.push_back(target);
        }
        for (node_t target : chosen) {
            edges.emplace_back(target, t);
            endpoints.push_back(target);
            endpoints.push_back(t);
        }
    }
    Graph g = symmetric_graph(n, edges);
    g.require_strongly_connected();
    return g;
}

Graph gen_torus(std::size_t k, std::size_t n)
{
    if (k < 1)
        throw invalid_argument("gen_torus: dimension must be >= 1");
    if (n < 3)
        throw invalid_argument("gen_torus: side length must be >= 3");
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (total > kMaxTorusNodes / n)
            throw size_cap_error(fmt::format("gen_torus: n^k exceeds the cap of {} nodes", kMaxTorusNodes));
        total *= n;
    }

    std::vector<arc_t> arcs;
    arcs.reserve(total * 2 * k);
    for (std::size_t v = 0; v < total; ++v) {
        std::size_t stride = 1;
        for (std::size_t dim = 0; dim < k; ++dim, stride *= n) {
            const std::size_t coord = (v / stride) % n;
            const std::size_t up = v - coord * stride + ((coord + 1) % n) * stride;
            const std::size_t down = v - coord * stride + ((coord + n - 1) % n) * stride;
            arcs.emplace_back(static_cast<node_t>(v), static_cast<node_t>(up));
            arcs.emplace_back(static_cast<node_t>(v), static_cast<node_t>(down));
        }
    }
    return Graph::from_arcs(total, std::move(arcs));
}

} // namespace gossip
