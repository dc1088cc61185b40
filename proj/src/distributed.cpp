#include "dmapper/distributed.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "dmapper/errors.hpp"

namespace dmapper {

std::vector<ChunkTask> plan_chunks(const PointCloud& cloud, const FilterValues& fv,
                                   const PreprocessedCover& pc) {
    if (fv.values.size() != static_cast<std::size_t>(cloud.size()))
        throw DimensionMismatch("filter has " + std::to_string(fv.values.size()) +
                                " values for " + std::to_string(cloud.size()) + " points");
    require_valid_cover(pc);

    const auto n = pc.num_chunks();
    std::vector<ChunkTask> tasks(n);
    for (std::size_t i = 0; i < n; ++i) {
        tasks[i].chunk_index = static_cast<int>(i);
        tasks[i].sub_cover.reserve(pc.sub_covers[i].size());
        for (std::size_t j = 0; j < pc.sub_covers[i].size(); ++j)
            tasks[i].sub_cover.push_back({pc.sub_cover_ids[i][j], pc.sub_covers[i][j]});
    }

    // Scanning points in ascending index order hands every chunk an already
    // sorted point list; a point inside a chunk overlap lands in both tasks.
    for (point_index idx = 0; idx < cloud.size(); ++idx) {
        const double v = fv.values[static_cast<std::size_t>(idx)];
        bool assigned = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (pc.chain.chunks[i].contains(v)) {
                tasks[i].chunk_points.push_back(idx);
                assigned = true;
            }
        }
        if (!assigned) {
            std::ostringstream os;
            os.precision(17);
            os << "point " << idx << " with filter value " << v << " lies in no chunk";
            throw CoverDoesNotCoverRange(os.str());
        }
    }
    return tasks;
}

MapperGraph run_chunk(const ChunkTask& task, const PointCloud& cloud, const FilterValues& fv,
                      const ClusterParams& params) {
    return mapper_on_subset(cloud, fv, task.chunk_points, task.sub_cover, params);
}

MergePlan build_merge_plan(std::span<const MapperGraph> graphs, const PreprocessedCover& pc) {
    if (graphs.size() != pc.num_chunks())
        throw MergeMismatch("got " + std::to_string(graphs.size()) + " chunk graphs for " +
                            std::to_string(pc.num_chunks()) + " chunks");

    const auto shared_keys_of = [](const MapperGraph& g, int shared_id) {
        std::vector<NodeKey> keys;
        for (const auto& node : g.nodes()) {
            if (node.key.cover_id != shared_id) continue;
            if (node.key.side != 0)
                throw MergeMismatch("merge planning expects raw chunk graphs with side tag 0");
            keys.push_back(node.key);
        }
        return keys;  // ascending: canonical node order sorts by key
    };

    MergePlan plan;
    for (std::size_t b = 0; b + 1 < pc.num_chunks(); ++b) {
        const int sid = pc.shared_ids[b];
        auto left = shared_keys_of(graphs[b], sid);
        const auto right = shared_keys_of(graphs[b + 1], sid);
        if (left != right) {
            // On a valid cover this is unreachable: both chunks cluster the
            // exact same point set under the exact same interval.
            throw MergeMismatch("chunks " + std::to_string(b) + " and " + std::to_string(b + 1) +
                                " disagree on the clusters of shared interval " +
                                std::to_string(sid) + " (" + std::to_string(left.size()) +
                                " vs " + std::to_string(right.size()) + " clusters)");
        }
        plan.boundaries.push_back({static_cast<int>(b), sid, std::move(left)});
    }
    return plan;
}

MapperGraph merge_chunk_graphs(std::span<const MapperGraph> graphs, const PreprocessedCover& pc) {
    const MergePlan plan = build_merge_plan(graphs, pc);

    // Disjoint union with the side tag pinned to the chunk index — explicit,
    // rather than folding disjoint_union(), so the merge plan can name nodes
    // as (chunk, shared id, points) even when some chunk graph is empty.
    MapperGraph unioned;
    {
        MapperGraphBuilder b;
        std::size_t base = 0;
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            for (const auto& node : graphs[i].nodes())
                b.add_node({static_cast<int>(i), node.key.cover_id, node.key.points},
                           node.interval);
            for (const auto& e : graphs[i].edges())
                b.add_edge(base + e.a, base + e.b, e.weight);
            base += graphs[i].num_nodes();
        }
        unioned = b.build();
    }

    // Each duplicated shared cluster contributes one two-node block; every
    // other node stays a singleton.
    NodePartition partition;
    std::vector<char> in_pair(unioned.num_nodes(), 0);
    for (const auto& boundary : plan.boundaries) {
        for (const auto& key : boundary.duplicated) {
            const auto left =
                unioned.find({boundary.boundary, key.cover_id, key.points});
            const auto right =
                unioned.find({boundary.boundary + 1, key.cover_id, key.points});
            if (!left || !right)
                throw MergeMismatch("planned shared cluster missing from the disjoint union");
            partition.push_back({*left, *right});
            in_pair[*left] = 1;
            in_pair[*right] = 1;
        }
    }
    for (std::size_t i = 0; i < unioned.num_nodes(); ++i)
        if (!in_pair[i]) partition.push_back({i});

    return clear_side_tags(quotient(unioned, partition));
}

namespace {

std::vector<MapperGraph> run_all_chunks(const std::vector<ChunkTask>& tasks,
                                        const PointCloud& cloud, const FilterValues& fv,
                                        const ClusterParams& params, int workers) {
    std::vector<MapperGraph> results(tasks.size());
    const std::size_t n = tasks.size();
    const std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(workers), n);

    if (pool <= 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = run_chunk(tasks[i], cloud, fv, params);
        return results;
    }

    // Work-stealing by atomic counter: completion order varies, but each
    // slot i only ever holds chunk i's graph, so the outcome cannot.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t) {
        threads.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    results[i] = run_chunk(tasks[i], cloud, fv, params);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& thread : threads) thread.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace

DistributedResult distributed_mapper(const PointCloud& cloud, const FilterValues& fv,
                                     const PreprocessedCover& pc, const ClusterParams& params,
                                     int workers) {
    if (workers < 1) throw DomainError("worker count must be at least 1");
    using clock = std::chrono::steady_clock;
    const auto seconds = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double>(b - a).count();
    };

    DistributedResult result;
    const auto t0 = clock::now();
    const auto tasks = plan_chunks(cloud, fv, pc);
    const auto t1 = clock::now();
    const auto graphs = run_all_chunks(tasks, cloud, fv, params, workers);
    const auto t2 = clock::now();
    result.graph = merge_chunk_graphs(graphs, pc);
    const auto t3 = clock::now();

    result.timing.plan_s = seconds(t0, t1);
    result.timing.parallel_s = seconds(t1, t2);
    result.timing.merge_s = seconds(t2, t3);
    return result;
}

}  // namespace dmapper
