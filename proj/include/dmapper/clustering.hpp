#pragma once

#include <span>
#include <vector>

#include "dmapper/point_cloud.hpp"

namespace dmapper {

struct ClusterParams {
    double eps = 0.0;  // neighbourhood radius, must be > 0
    int min_pts = 1;   // core threshold counting the point itself, must be >= 1
};

// Canonical clustering of a subset of a point cloud: every cluster is sorted
// ascending by global point index, clusters are sorted by their smallest
// member, and together they partition the input subset.  Noise points appear
// as singleton clusters so no point is ever dropped.
struct Clustering {
    std::vector<std::vector<point_index>> clusters;

    std::size_t size() const { return clusters.size(); }
};

// Deterministic DBSCAN over the given subset (global indices into `cloud`,
// assumed distinct).  Distances are Euclidean; a point is core when its
// closed eps-ball contains at least min_pts subset points including itself.
// Clusters are the connected components of the core-core adjacency; each
// border point joins its nearest core neighbour's cluster, ties broken by
// the lowest global index among the tied cores.  The result depends only on
// the subset as a set, never on its order.
//
// Throws DomainError if eps <= 0 or min_pts < 1.
Clustering dbscan(const PointCloud& cloud, std::span<const point_index> subset,
                  const ClusterParams& params);

// Independent oracle implementing the same contract by materializing the full
// distance matrix and running union-find over core pairs.  O(k^2) memory, so
// only sensible for small subsets; shares no code with dbscan().
Clustering brute_force_clusters(const PointCloud& cloud, std::span<const point_index> subset,
                                const ClusterParams& params);

}  // namespace dmapper
