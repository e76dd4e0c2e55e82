#include "gossip/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/core.h>

namespace gossip {

namespace {

// Nodes reachable from 0 following the CSR given by (offsets, targets).
std::size_t reachable_from_zero(const std::vector<std::size_t>& offsets, const std::vector<node_t>& targets)
{
    const std::size_t n = offsets.size() - 1;
    std::vector<char> seen(n, 0);
    std::vector<node_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const node_t v = stack.back();
        stack.pop_back();
        for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i) {
            const node_t w = targets[i];
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count;
}

} // namespace

Graph Graph::from_arcs(std::size_t node_count, std::vector<arc_t> arcs)
{
    if (node_count == 0)
        throw graph_error("graph needs at least one node");
    if (node_count > std::size_t{0xffffffffu})
        throw graph_error("node count exceeds 32-bit index range");
    for (const auto& [v, w] : arcs) {
        if (v >= node_count || w >= node_count)
            throw graph_error(fmt::format("arc ({}, {}) has an endpoint outside [0, {})", v, w, node_count));
    }
    std::sort(arcs.begin(), arcs.end());
    if (auto dup = std::adjacent_find(arcs.begin(), arcs.end()); dup != arcs.end())
        throw graph_error(fmt::format("duplicate arc ({}, {})", dup->first, dup->second));

    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    g.in_offsets_.assign(node_count + 1, 0);
    g.targets_.reserve(arcs.size());
    for (const auto& [v, w] : arcs) {
        ++g.offsets_[v + 1];
        ++g.in_offsets_[w + 1];
        g.targets_.push_back(w);
        g.has_self_loops_ = g.has_self_loops_ || v == w;
    }
    for (std::size_t v = 0; v < node_count; ++v) {
        g.max_degree_ = std::max(g.max_degree_, g.offsets_[v + 1]);
        g.max_in_degree_ = std::max(g.max_in_degree_, g.in_offsets_[v + 1]);
        g.offsets_[v + 1] += g.offsets_[v];
        g.in_offsets_[v + 1] += g.in_offsets_[v];
    }

    // Arcs are sorted by source, so filling in-lists in this order leaves
    // every in-neighborhood sorted too.
    g.in_targets_.resize(arcs.size());
    std::vector<std::size_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (const auto& [v, w] : arcs)
        g.in_targets_[cursor[w]++] = v;

    g.strongly_connected_ = reachable_from_zero(g.offsets_, g.targets_) == node_count
        && reachable_from_zero(g.in_offsets_, g.in_targets_) == node_count;
    g.symmetric_ = g.offsets_ == g.in_offsets_ && g.targets_ == g.in_targets_;
    return g;
}

bool Graph::has_arc(node_t v, node_t w) const
{
    auto nb = neighbors(v);
    return std::binary_search(nb.begin(), nb.end(), w);
}

std::vector<arc_t> Graph::arcs() const
{
    std::vector<arc_t> out;
    out.reserve(arc_count());
    for (node_t v = 0; v < node_count(); ++v)
        for (node_t w : neighbors(v))
            out.emplace_back(v, w);
    return out;
}

void Graph::require_strongly_connected() const
{
    if (!strongly_connected_)
        throw connectivity_error("graph is not strongly connected");
}

Graph symmetric_graph(std::size_t node_count, const std::vector<arc_t>& edges)
{
    std::vector<arc_t> arcs;
    arcs.reserve(2 * edges.size());
    for (const auto& [u, v] : edges) {
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    return Graph::from_arcs(node_count, std::move(arcs));
}

void write_edge_list(std::ostream& os, const Graph& g)
{
    os << g.node_count() << ' ' << g.arc_count() << ' ' << (g.has_self_loops() ? 1 : 0) << '\n';
    for (node_t v = 0; v < g.node_count(); ++v)
        for (node_t w : g.neighbors(v))
            os << v << ' ' << w << '\n';
}

Graph read_edge_list(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header))
        throw graph_error("edge list: missing header line");
    std::istringstream hs(header);
    std::size_t n = 0, m = 0;
    int loops = -1;
    if (!(hs >> n >> m >> loops) || (loops != 0 && loops != 1))
        throw graph_error("edge list: header must be \"N M self_loops\" with self_loops in {0,1}");

    std::vector<arc_t> arcs;
    arcs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        long long v = -1, w = -1;
        if (!(is >> v >> w))
            throw graph_error(fmt::format("edge list: expected {} arcs, got {}", m, i));
        if (v < 0 || w < 0 || static_cast<std::size_t>(v) >= n || static_cast<std::size_t>(w) >= n)
            throw graph_error(fmt::format("edge list: arc ({}, {}) out of range", v, w));
        arcs.emplace_back(static_cast<node_t>(v), static_cast<node_t>(w));
    }
    Graph g = Graph::from_arcs(n, std::move(arcs));
    if (g.has_self_loops() != (loops == 1))
        throw graph_error("edge list: self_loops flag does not match the arcs");
    return g;
}

} // namespace gossip
