#include "dmapper/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "dmapper/errors.hpp"

namespace dmapper {

std::optional<std::size_t> MapperGraph::find(const NodeKey& key) const {
    const auto it = std::lower_bound(
        nodes_.begin(), nodes_.end(), key,
        [](const MapperNode& node, const NodeKey& k) { return node.key < k; });
    if (it == nodes_.end() || !(it->key == key)) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t MapperGraphBuilder::add_node(NodeKey key, Interval interval) {
    nodes_.push_back({std::move(key), interval});
    return nodes_.size() - 1;
}

void MapperGraphBuilder::add_edge(std::size_t u, std::size_t v, std::int64_t weight) {
    edges_.push_back({u, v, weight});
}

MapperGraph MapperGraphBuilder::build() {
    const std::size_t n = nodes_.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
        return nodes_[a].key < nodes_[b].key;
    });

    MapperGraph g;
    g.nodes_.reserve(n);
    std::vector<std::size_t> position(n);  // provisional handle -> canonical index
    for (std::size_t i = 0; i < n; ++i) {
        position[order[i]] = i;
        g.nodes_.push_back(std::move(nodes_[order[i]]));
    }
    for (std::size_t i = 1; i < g.nodes_.size(); ++i)
        if (g.nodes_[i - 1].key == g.nodes_[i].key)
            throw Error("duplicate node key (cover id " +
                        std::to_string(g.nodes_[i].key.cover_id) + ")");

    g.edges_.reserve(edges_.size());
    for (const auto& e : edges_) {
        if (e.a >= n || e.b >= n) throw Error("edge references a node that was never added");
        if (e.weight <= 0) throw Error("edge weight must be positive");
        std::size_t a = position[e.a];
        std::size_t b = position[e.b];
        if (a == b) throw Error("self-loops are not allowed");
        if (a > b) std::swap(a, b);
        g.edges_.push_back({a, b, e.weight});
    }
    std::sort(g.edges_.begin(), g.edges_.end(), [](const MapperEdge& x, const MapperEdge& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    for (std::size_t i = 1; i < g.edges_.size(); ++i)
        if (g.edges_[i - 1].a == g.edges_[i].a && g.edges_[i - 1].b == g.edges_[i].b)
            throw Error("parallel edges are not allowed");

    nodes_.clear();
    edges_.clear();
    return g;
}

MapperGraph disjoint_union(const MapperGraph& g1, const MapperGraph& g2) {
    int shift = 0;
    for (const auto& node : g1.nodes()) shift = std::max(shift, node.key.side + 1);

    MapperGraphBuilder builder;
    for (const auto& node : g1.nodes()) builder.add_node(node.key, node.interval);
    const std::size_t base = g1.num_nodes();
    for (const auto& node : g2.nodes()) {
        NodeKey key = node.key;
        key.side += shift;
        builder.add_node(std::move(key), node.interval);
    }
    for (const auto& e : g1.edges()) builder.add_edge(e.a, e.b, e.weight);
    for (const auto& e : g2.edges()) builder.add_edge(base + e.a, base + e.b, e.weight);
    return builder.build();
}

MapperGraph quotient(const MapperGraph& g, const NodePartition& partition) {
    const std::size_t n = g.num_nodes();
    constexpr std::size_t unassigned = static_cast<std::size_t>(-1);

    std::vector<std::size_t> block_of(n, unassigned);
    for (std::size_t b = 0; b < partition.size(); ++b) {
        if (partition[b].empty()) throw InvalidPartition("partition block is empty");
        for (std::size_t idx : partition[b]) {
            if (idx >= n)
                throw InvalidPartition("partition names node " + std::to_string(idx) +
                                       " but the graph has " + std::to_string(n));
            if (block_of[idx] != unassigned)
                throw InvalidPartition("node " + std::to_string(idx) +
                                       " appears in more than one block");
            block_of[idx] = b;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (block_of[i] == unassigned)
            throw InvalidPartition("node " + std::to_string(i) + " is missing from the partition");

    MapperGraphBuilder builder;
    std::vector<std::size_t> handle(partition.size());
    for (std::size_t b = 0; b < partition.size(); ++b) {
        // Block identity: the minimal member key's (side, cover_id) with the
        // union of all member point sets; the minimal member also donates the
        // display interval.
        const MapperNode* rep = &g.nodes()[partition[b].front()];
        std::vector<point_index> points;
        for (std::size_t idx : partition[b]) {
            const MapperNode& node = g.nodes()[idx];
            if (node.key < rep->key) rep = &node;
            points.insert(points.end(), node.key.points.begin(), node.key.points.end());
        }
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
        handle[b] =
            builder.add_node({rep->key.side, rep->key.cover_id, std::move(points)}, rep->interval);
    }

    // Parallel edges collapse with summed weights; edges inside one block
    // describe the internal overlap of a now-single node and are dropped.
    std::map<std::pair<std::size_t, std::size_t>, std::int64_t> collapsed;
    for (const auto& e : g.edges()) {
        std::size_t a = block_of[e.a];
        std::size_t b = block_of[e.b];
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        collapsed[{a, b}] += e.weight;
    }
    for (const auto& [pair, weight] : collapsed)
        builder.add_edge(handle[pair.first], handle[pair.second], weight);
    return builder.build();
}

bool graph_equal(const MapperGraph& g1, const MapperGraph& g2) {
    if (g1.num_nodes() != g2.num_nodes() || g1.num_edges() != g2.num_edges()) return false;
    for (std::size_t i = 0; i < g1.num_nodes(); ++i)
        if (!(g1.nodes()[i].key == g2.nodes()[i].key)) return false;
    return g1.edges() == g2.edges();
}

MapperGraph clear_side_tags(const MapperGraph& g) {
    MapperGraphBuilder builder;
    for (const auto& node : g.nodes())
        builder.add_node({0, node.key.cover_id, node.key.points}, node.interval);
    for (const auto& e : g.edges()) builder.add_edge(e.a, e.b, e.weight);
    return builder.build();  // throws if two keys collide once sides are gone
}

namespace {

std::vector<std::size_t> component_roots(const MapperGraph& g) {
    std::vector<std::size_t> parent(g.num_nodes());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto find = [&parent](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (const auto& e : g.edges()) parent[find(e.a)] = find(e.b);
    std::vector<std::size_t> roots(g.num_nodes());
    for (std::size_t i = 0; i < g.num_nodes(); ++i) roots[i] = find(i);
    return roots;
}

}  // namespace

std::size_t component_count(const MapperGraph& g) {
    const auto roots = component_roots(g);
    std::size_t count = 0;
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (roots[i] == i) ++count;
    return count;
}

std::int64_t cycle_rank(const MapperGraph& g) {
    return static_cast<std::int64_t>(g.num_edges()) - static_cast<std::int64_t>(g.num_nodes()) +
           static_cast<std::int64_t>(component_count(g));
}

}  // namespace dmapper
