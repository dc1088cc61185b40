#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "dmapper/cover.hpp"
#include "dmapper/point_cloud.hpp"

namespace dmapper {

// Identity of a Mapper node: the cover element it came from plus the sorted
// global indices of its cluster.  `side` disambiguates nodes contributed by
// different operands of a disjoint union; graphs built directly from data
// always use side 0.
struct NodeKey {
    int side = 0;
    int cover_id = 0;
    std::vector<point_index> points;  // sorted ascending, non-empty

    friend bool operator==(const NodeKey& a, const NodeKey& b) {
        return a.cover_id == b.cover_id && a.points == b.points && a.side == b.side;
    }
    // Side is the least significant component so that the canonical node
    // order of a merged graph lines up with the order of the inputs.
    friend bool operator<(const NodeKey& a, const NodeKey& b) {
        return std::tie(a.cover_id, a.points, a.side) < std::tie(b.cover_id, b.points, b.side);
    }
};

struct MapperNode {
    NodeKey key;
    Interval interval;  // the cover element's interval, carried for export

    std::int64_t size() const { return static_cast<std::int64_t>(key.points.size()); }
};

// Undirected edge between canonical node positions, a < b.  Weight counts
// the points shared by the two clusters (summed when edges are collapsed).
struct MapperEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::int64_t weight = 0;

    friend bool operator==(const MapperEdge&, const MapperEdge&) = default;
};

// Immutable Mapper graph in canonical form: nodes sorted by key, edges
// sorted by (a, b) with a < b, no self-loops, no parallel edges.  Build one
// through MapperGraphBuilder, which enforces all of that.
class MapperGraph {
public:
    MapperGraph() = default;

    const std::vector<MapperNode>& nodes() const { return nodes_; }
    const std::vector<MapperEdge>& edges() const { return edges_; }
    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    bool empty() const { return nodes_.empty(); }

    // Canonical position of the node with this key, if present.
    std::optional<std::size_t> find(const NodeKey& key) const;

private:
    friend class MapperGraphBuilder;
    std::vector<MapperNode> nodes_;
    std::vector<MapperEdge> edges_;
};

// Accumulates nodes and edges in any order, then canonicalizes.  Node
// handles returned by add_node are provisional; build() remaps them.
class MapperGraphBuilder {
public:
    std::size_t add_node(NodeKey key, Interval interval);
    void add_edge(std::size_t u, std::size_t v, std::int64_t weight);

    // Sorts nodes by key, remaps and sorts edges, and verifies canonical-form
    // invariants.  Throws Error on duplicate keys, duplicate or dangling
    // edges, self-loops, or non-positive weights.
    MapperGraph build();

private:
    std::vector<MapperNode> nodes_;
    std::vector<MapperEdge> edges_;
};

// Disjoint union: keeps every node of both graphs, shifting the side tags of
// g2 above those of g1 so keys never collide.  |V| and |E| always add.
MapperGraph disjoint_union(const MapperGraph& g1, const MapperGraph& g2);

// Blocks of canonical node positions; must partition 0..num_nodes-1 exactly.
using NodePartition = std::vector<std::vector<std::size_t>>;

// Quotient by a node partition.  Each block becomes one node keyed by its
// minimal member's (side, cover_id) with the union of the members' point
// sets; edges map to block pairs, parallel edges collapse with weights
// summed, and edges that land inside a single block are dropped (a merged
// cluster needs no record of its internal overlap).
//
// Throws InvalidPartition if the blocks miss or repeat a node.
MapperGraph quotient(const MapperGraph& g, const NodePartition& partition);

// Structural equality on canonical forms: same node keys in the same order,
// same edges with the same weights.  Intervals are presentation data and are
// not compared.
bool graph_equal(const MapperGraph& g1, const MapperGraph& g2);

// Resets every node's side tag to 0.  Throws Error if that would make two
// keys collide, i.e. the graph still contains genuine duplicates.
MapperGraph clear_side_tags(const MapperGraph& g);

std::size_t component_count(const MapperGraph& g);

// Cycle rank |E| - |V| + #components: the number of independent loops.
std::int64_t cycle_rank(const MapperGraph& g);

}  // namespace dmapper
