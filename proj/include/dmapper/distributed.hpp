#pragma once

#include <span>
#include <vector>

#include "dmapper/mapper.hpp"

namespace dmapper {

// Everything one worker needs: which chunk, which points (ascending global
// indices into the shared cloud), and the chunk's sub-cover.
struct ChunkTask {
    int chunk_index = 0;
    std::vector<point_index> chunk_points;
    std::vector<CoverElement> sub_cover;
};

// For one internal boundary: the shared interval's id and the node keys that
// are duplicated across the two adjacent chunk graphs (each key appears once
// per side; sides are the raw per-chunk graphs, so tags are all 0).
struct BoundaryMerge {
    int boundary = 0;   // between chunks `boundary` and `boundary + 1`
    int shared_id = 0;  // global id of the shared interval
    std::vector<NodeKey> duplicated;
};

struct MergePlan {
    std::vector<BoundaryMerge> boundaries;

    std::size_t duplicate_count() const {
        std::size_t n = 0;
        for (const auto& b : boundaries) n += b.duplicated.size();
        return n;
    }
};

// Wall-clock seconds spent in each phase of a distributed run.  Planning and
// merging are inherently sequential; the chunk runs are the parallel part.
struct TimingBreakdown {
    double plan_s = 0.0;
    double parallel_s = 0.0;
    double merge_s = 0.0;

    double total_s() const { return plan_s + parallel_s + merge_s; }
    double parallel_fraction() const {
        const double t = total_s();
        return t > 0.0 ? parallel_s / t : 0.0;
    }
};

struct DistributedResult {
    MapperGraph graph;
    TimingBreakdown timing;
};

// Splits the cloud into per-chunk tasks: chunk i gets the points whose
// filter value lies in chain chunk i (points in an overlap appear in both
// neighbouring tasks).  Validates the cover first (DomainError on violation)
// and requires fv to match the cloud size (DimensionMismatch).
std::vector<ChunkTask> plan_chunks(const PointCloud& cloud, const FilterValues& fv,
                                   const PreprocessedCover& pc);

// Sequential Mapper on one chunk: exactly mapper_on_subset over the task's
// points and sub-cover.
MapperGraph run_chunk(const ChunkTask& task, const PointCloud& cloud, const FilterValues& fv,
                      const ClusterParams& params);

// Finds, for every internal boundary, the clusters of the shared interval in
// both adjacent chunk graphs.  Throws MergeMismatch if the two sides do not
// agree exactly — on a valid cover they always do, because both chunks
// cluster the identical point set under the identical interval.
MergePlan build_merge_plan(std::span<const MapperGraph> graphs, const PreprocessedCover& pc);

// Disjoint union of the chunk graphs followed by the quotient that glues
// each duplicated shared-interval cluster pair back into one node.  The
// result equals sequential_mapper over the flattened cover, bit for bit.
MapperGraph merge_chunk_graphs(std::span<const MapperGraph> graphs, const PreprocessedCover& pc);

// Full pipeline: plan, run chunks on `workers` threads (workers == 1 runs
// inline on the calling thread), merge.  Output is independent of the
// worker count and of chunk completion order.
//
// Throws DomainError if workers < 1, plus anything the phases throw.
DistributedResult distributed_mapper(const PointCloud& cloud, const FilterValues& fv,
                                     const PreprocessedCover& pc, const ClusterParams& params,
                                     int workers);

}  // namespace dmapper
