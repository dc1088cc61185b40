#pragma once

// Helpers shared by the test binaries: deterministic random graphs, cycle
// graphs for quotient checks, and random Mapper instances for the
// sequential/distributed equivalence sweeps.

#include <set>
#include <utility>
#include <vector>

#include "dmapper/clustering.hpp"
#include "dmapper/cover.hpp"
#include "dmapper/graph.hpp"
#include "dmapper/io.hpp"
#include "dmapper/point_cloud.hpp"
#include "dmapper/rng.hpp"

namespace dmapper::testing {

// Cycle graph C_k: vertices named 1..k (cover_id i, point set {i}), edges
// between consecutive vertices and back around, all weights 1.  Canonical
// node order equals vertex order, so index i-1 is vertex i.
inline MapperGraph cycle_graph(int k) {
    MapperGraphBuilder builder;
    std::vector<std::size_t> handle;
    for (int i = 1; i <= k; ++i)
        handle.push_back(builder.add_node({0, i, {static_cast<point_index>(i)}}, {}));
    for (int i = 0; i < k; ++i)
        builder.add_edge(handle[static_cast<std::size_t>(i)],
                         handle[static_cast<std::size_t>((i + 1) % k)], 1);
    return builder.build();
}

// Random canonical graph: unique keys, random edges, no self-loops.
inline MapperGraph random_graph(SplitMix64& rng, int max_nodes = 10) {
    const auto n = rng.below(static_cast<std::uint64_t>(max_nodes) + 1);
    std::vector<NodeKey> keys;
    while (keys.size() < n) {
        NodeKey key{0, static_cast<int>(rng.below(6)), {}};
        const auto size = 1 + rng.below(4);
        std::set<point_index> points;
        while (points.size() < size) points.insert(static_cast<point_index>(rng.below(40)));
        key.points.assign(points.begin(), points.end());
        bool fresh = true;
        for (const auto& existing : keys)
            if (existing == key) fresh = false;
        if (fresh) keys.push_back(std::move(key));
    }

    MapperGraphBuilder builder;
    std::vector<std::size_t> handle;
    for (auto& key : keys) {
        const double lo = rng.uniform01();
        handle.push_back(builder.add_node(std::move(key), {lo, lo + 1.0}));
    }
    for (std::size_t i = 0; i < handle.size(); ++i)
        for (std::size_t j = i + 1; j < handle.size(); ++j)
            if (rng.uniform01() < 0.25)
                builder.add_edge(handle[i], handle[j],
                                 1 + static_cast<std::int64_t>(rng.below(5)));
    return builder.build();
}

// A complete random Mapper problem: point cloud (blobby or uniform, with a
// few exact duplicate rows), scalar filter, preprocessed cover, clustering
// parameters.  Instances whose filter collapses to a near-constant are
// regenerated, since a cover needs a nondegenerate range.
struct RandomInstance {
    PointCloud cloud;
    FilterValues fv;
    PreprocessedCover pc;
    std::vector<CoverElement> flat;
    ClusterParams params;
    int workers = 1;
};

inline RandomInstance make_random_instance(SplitMix64& rng) {
    for (;;) {
        const int dim = 1 + static_cast<int>(rng.below(3));
        const int n = 50 + static_cast<int>(rng.below(451));

        std::vector<double> coords;
        coords.reserve(static_cast<std::size_t>(n * dim));
        const bool blobby = rng.uniform01() < 0.6;
        const int blobs = 1 + static_cast<int>(rng.below(4));
        std::vector<double> centers;
        for (int b = 0; b < blobs * dim; ++b) centers.push_back(rng.uniform01());
        for (int i = 0; i < n; ++i) {
            if (blobby && rng.uniform01() < 0.85) {
                const auto b = static_cast<std::size_t>(
                    rng.below(static_cast<std::uint64_t>(blobs)));
                for (int c = 0; c < dim; ++c)
                    coords.push_back(centers[b * static_cast<std::size_t>(dim) +
                                             static_cast<std::size_t>(c)] +
                                     0.08 * rng.gaussian());
            } else {
                for (int c = 0; c < dim; ++c) coords.push_back(rng.uniform01());
            }
        }
        // Exact duplicates stress the determinism rules (distance ties).
        const int dups = static_cast<int>(rng.below(6));
        for (int d = 0; d < dups; ++d) {
            const auto src = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
            for (int c = 0; c < dim; ++c)
                coords.push_back(coords[src * static_cast<std::size_t>(dim) +
                                        static_cast<std::size_t>(c)]);
        }

        RandomInstance inst;
        inst.cloud = PointCloud(dim, std::move(coords));

        FilterSpec spec;
        if (dim > 1 && rng.uniform01() < 0.25) {
            spec.kind = FilterSpec::Kind::l2norm;
        } else {
            spec.kind = FilterSpec::Kind::coordinate;
            spec.axis = static_cast<int>(rng.below(static_cast<std::uint64_t>(dim)));
        }
        inst.fv = evaluate_filter(inst.cloud, spec);
        if (!(inst.fv.hi - inst.fv.lo > 1e-6)) continue;  // degenerate filter

        constexpr int chunk_choices[] = {1, 2, 3, 4, 8};
        const int n_chunks = chunk_choices[rng.below(5)];
        const double gain = 0.1 + 0.4 * rng.uniform01();
        const double chunk_len = (inst.fv.hi - inst.fv.lo) / n_chunks;
        const double width = (rng.uniform01() < 0.5)
                                 ? default_overlap_width(inst.fv.lo, inst.fv.hi, n_chunks, gain)
                                 : (0.15 + 0.75 * rng.uniform01()) * chunk_len;
        const int resolution = 1 + static_cast<int>(rng.below(5));

        inst.pc = build_sub_covers(build_chain_cover(inst.fv.lo, inst.fv.hi, n_chunks, width),
                                   resolution, gain);
        inst.flat = flatten_cover(inst.pc);
        inst.params = {0.02 + 0.38 * rng.uniform01(), 1 + static_cast<int>(rng.below(5))};
        inst.workers = 1 + static_cast<int>(rng.below(4));
        return inst;
    }
}

}  // namespace dmapper::testing
