#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "dmapper/errors.hpp"
#include "dmapper/graph.hpp"
#include "dmapper/rng.hpp"
#include "support.hpp"

using namespace dmapper;
using dmapper::testing::cycle_graph;
using dmapper::testing::random_graph;

namespace {

MapperGraph two_node_edge_graph(int cover_a, int cover_b) {
    MapperGraphBuilder builder;
    const auto a = builder.add_node({0, cover_a, {1, 2}}, {});
    const auto b = builder.add_node({0, cover_b, {2, 3}}, {});
    builder.add_edge(a, b, 1);
    return builder.build();
}

}  // namespace

TEST_CASE("the builder canonicalizes insertion order away") {
    MapperGraphBuilder forward;
    const auto f1 = forward.add_node({0, 1, {0}}, {});
    const auto f2 = forward.add_node({0, 2, {1}}, {});
    const auto f3 = forward.add_node({0, 3, {2}}, {});
    forward.add_edge(f1, f2, 2);
    forward.add_edge(f2, f3, 1);
    const MapperGraph a = forward.build();

    MapperGraphBuilder backward;
    const auto b3 = backward.add_node({0, 3, {2}}, {});
    const auto b2 = backward.add_node({0, 2, {1}}, {});
    const auto b1 = backward.add_node({0, 1, {0}}, {});
    backward.add_edge(b2, b3, 1);
    backward.add_edge(b2, b1, 2);
    const MapperGraph b = backward.build();

    CHECK(graph_equal(a, b));
    REQUIRE(a.num_nodes() == 3);
    CHECK(a.nodes()[0].key.cover_id == 1);
    CHECK(a.nodes()[2].key.cover_id == 3);
    CHECK(a.edges() == b.edges());
    CHECK(a.find(NodeKey{0, 2, {1}}).value() == 1);
    CHECK_FALSE(a.find(NodeKey{0, 2, {7}}).has_value());
}

TEST_CASE("the builder rejects malformed graphs") {
    SUBCASE("duplicate node keys") {
        MapperGraphBuilder builder;
        builder.add_node({0, 1, {0, 1}}, {});
        builder.add_node({0, 1, {0, 1}}, {});
        CHECK_THROWS_AS(builder.build(), Error);
    }
    SUBCASE("self-loops") {
        MapperGraphBuilder builder;
        const auto a = builder.add_node({0, 1, {0}}, {});
        builder.add_edge(a, a, 1);
        CHECK_THROWS_AS(builder.build(), Error);
    }
    SUBCASE("dangling edge endpoints") {
        MapperGraphBuilder builder;
        const auto a = builder.add_node({0, 1, {0}}, {});
        builder.add_edge(a, a + 5, 1);
        CHECK_THROWS_AS(builder.build(), Error);
    }
    SUBCASE("parallel edges") {
        MapperGraphBuilder builder;
        const auto a = builder.add_node({0, 1, {0}}, {});
        const auto b = builder.add_node({0, 2, {1}}, {});
        builder.add_edge(a, b, 1);
        builder.add_edge(b, a, 2);
        CHECK_THROWS_AS(builder.build(), Error);
    }
    SUBCASE("non-positive weights") {
        MapperGraphBuilder builder;
        const auto a = builder.add_node({0, 1, {0}}, {});
        const auto b = builder.add_node({0, 2, {1}}, {});
        builder.add_edge(a, b, 0);
        CHECK_THROWS_AS(builder.build(), Error);
    }
}

TEST_CASE("disjoint union keeps both operands apart") {
    const MapperGraph g = two_node_edge_graph(1, 2);

    SUBCASE("two copies of a 2-node graph make a 4-node graph") {
        const MapperGraph u = disjoint_union(g, g);
        CHECK(u.num_nodes() == 4);
        CHECK(u.num_edges() == 2);
        // One copy keeps side 0, the other moves to side 1.
        int side0 = 0, side1 = 0;
        for (const auto& node : u.nodes()) {
            if (node.key.side == 0) ++side0;
            if (node.key.side == 1) ++side1;
        }
        CHECK(side0 == 2);
        CHECK(side1 == 2);
    }
    SUBCASE("union with the empty graph is the identity") {
        const MapperGraph empty;
        CHECK(graph_equal(disjoint_union(g, empty), g));
        CHECK(graph_equal(disjoint_union(empty, g), g));
        CHECK(disjoint_union(empty, empty).empty());
    }
    SUBCASE("node and edge counts always add (random graphs)") {
        SplitMix64 rng(0x0131);
        for (int i = 0; i < 20; ++i) {
            const MapperGraph g1 = random_graph(rng);
            const MapperGraph g2 = random_graph(rng);
            const MapperGraph u = disjoint_union(g1, g2);
            CHECK(u.num_nodes() == g1.num_nodes() + g2.num_nodes());
            CHECK(u.num_edges() == g1.num_edges() + g2.num_edges());
        }
    }
}

TEST_CASE("quotient of the 6-cycle by opposite-pair-free blocks is the 3-cycle") {
    // Vertices 1..6 in a ring; gluing {1,2}, {3,4}, {5,6} must give exactly
    // the triangle on the merged vertices: the within-block ring edges
    // disappear into the merged nodes, the rest survive with weight 1.
    const MapperGraph c6 = cycle_graph(6);
    const MapperGraph got = quotient(c6, {{0, 1}, {2, 3}, {4, 5}});

    MapperGraphBuilder expected;
    const auto a = expected.add_node({0, 1, {1, 2}}, {});
    const auto b = expected.add_node({0, 3, {3, 4}}, {});
    const auto c = expected.add_node({0, 5, {5, 6}}, {});
    expected.add_edge(a, b, 1);
    expected.add_edge(b, c, 1);
    expected.add_edge(a, c, 1);
    CHECK(graph_equal(got, expected.build()));
    CHECK(component_count(got) == 1);
    CHECK(cycle_rank(got) == 1);
}

TEST_CASE("quotient of the 6-cycle by antipodal pairs doubles the weights") {
    const MapperGraph c6 = cycle_graph(6);
    const MapperGraph got = quotient(c6, {{0, 3}, {1, 4}, {2, 5}});

    MapperGraphBuilder expected;
    const auto a = expected.add_node({0, 1, {1, 4}}, {});
    const auto b = expected.add_node({0, 2, {2, 5}}, {});
    const auto c = expected.add_node({0, 3, {3, 6}}, {});
    expected.add_edge(a, b, 2);
    expected.add_edge(b, c, 2);
    expected.add_edge(a, c, 2);
    CHECK(graph_equal(got, expected.build()));
}

TEST_CASE("quotient by singletons is the identity") {
    SplitMix64 rng(0xfeed);
    for (int i = 0; i < 20; ++i) {
        const MapperGraph g = random_graph(rng);
        NodePartition singletons;
        for (std::size_t n = 0; n < g.num_nodes(); ++n) singletons.push_back({n});
        const MapperGraph q = quotient(g, singletons);
        CHECK(graph_equal(q, g));
        CHECK(q.nodes().size() == g.nodes().size());
        CHECK(q.edges() == g.edges());
    }
}

TEST_CASE("collapsing a connected edge swallows it") {
    // Two nodes joined by an edge, merged into one block: a single node and
    // no edges — the overlap is now internal to the merged cluster.
    const MapperGraph g = two_node_edge_graph(1, 2);
    const MapperGraph q = quotient(g, {{0, 1}});
    REQUIRE(q.num_nodes() == 1);
    CHECK(q.num_edges() == 0);
    CHECK(q.nodes()[0].key.cover_id == 1);
    CHECK(q.nodes()[0].key.points == std::vector<point_index>{1, 2, 3});
}

TEST_CASE("quotient validates the partition") {
    const MapperGraph g = two_node_edge_graph(1, 2);
    CHECK_THROWS_AS(quotient(g, {{0}}), InvalidPartition);            // node 1 missing
    CHECK_THROWS_AS(quotient(g, {{0, 1}, {1}}), InvalidPartition);    // node 1 repeated
    CHECK_THROWS_AS(quotient(g, {{0, 1, 2}}), InvalidPartition);      // node 2 absent
    CHECK_THROWS_AS(quotient(g, {{0, 1}, {}}), InvalidPartition);     // empty block
}

TEST_CASE("graph_equal distinguishes structure and weights") {
    const MapperGraph g = two_node_edge_graph(1, 2);
    CHECK(graph_equal(g, g));
    CHECK(graph_equal(g, two_node_edge_graph(1, 2)));
    CHECK_FALSE(graph_equal(g, two_node_edge_graph(1, 3)));

    MapperGraphBuilder heavier;
    const auto a = heavier.add_node({0, 1, {1, 2}}, {});
    const auto b = heavier.add_node({0, 2, {2, 3}}, {});
    heavier.add_edge(a, b, 2);
    CHECK_FALSE(graph_equal(g, heavier.build()));

    MapperGraphBuilder no_edge;
    no_edge.add_node({0, 1, {1, 2}}, {});
    no_edge.add_node({0, 2, {2, 3}}, {});
    CHECK_FALSE(graph_equal(g, no_edge.build()));
}

TEST_CASE("side tags clear only when no duplicates remain") {
    const MapperGraph g = two_node_edge_graph(1, 2);
    const MapperGraph u = disjoint_union(g, two_node_edge_graph(3, 4));
    const MapperGraph cleared = clear_side_tags(u);
    for (const auto& node : cleared.nodes()) CHECK(node.key.side == 0);
    CHECK(cleared.num_nodes() == 4);

    // A union of identical graphs still holds genuine duplicates.
    CHECK_THROWS_AS(clear_side_tags(disjoint_union(g, g)), Error);
}

TEST_CASE("component count and cycle rank") {
    CHECK(component_count(MapperGraph{}) == 0);
    CHECK(cycle_rank(MapperGraph{}) == 0);

    const MapperGraph c6 = cycle_graph(6);
    CHECK(component_count(c6) == 1);
    CHECK(cycle_rank(c6) == 1);

    const MapperGraph path = two_node_edge_graph(1, 2);
    CHECK(component_count(path) == 1);
    CHECK(cycle_rank(path) == 0);

    const MapperGraph two_rings = disjoint_union(cycle_graph(3), cycle_graph(4));
    CHECK(component_count(two_rings) == 2);
    CHECK(cycle_rank(two_rings) == 2);
}
