#pragma once

#include <span>

#include "dmapper/clustering.hpp"
#include "dmapper/cover.hpp"
#include "dmapper/graph.hpp"
#include "dmapper/point_cloud.hpp"

namespace dmapper {

// Indices (ascending) of all points whose filter value lies in the open
// interval.
std::vector<point_index> pullback(const FilterValues& fv, const Interval& interval);

// Same, restricted to the given candidate indices (order preserved).
std::vector<point_index> pullback(const FilterValues& fv, const Interval& interval,
                                  std::span<const point_index> candidates);

// Reference Mapper: clusters the pullback of every cover element and
// connects two clusters from different elements when they share points,
// weighting the edge by the overlap size.  Node identity is
// (cover element id, sorted member indices); the result is canonical, so two
// runs over the same inputs are bit-identical.
//
// Throws DimensionMismatch if fv.values.size() != cloud.size(), and
// CoverDoesNotCoverRange if some point's filter value lies in no element.
MapperGraph sequential_mapper(const PointCloud& cloud, const FilterValues& fv,
                              std::span<const CoverElement> cover, const ClusterParams& params);

// Mapper over a subset of the cloud (ascending global indices): the engine
// shared by sequential_mapper (full index set) and per-chunk runs.  Every
// subset point must be covered.
MapperGraph mapper_on_subset(const PointCloud& cloud, const FilterValues& fv,
                             std::span<const point_index> subset,
                             std::span<const CoverElement> cover, const ClusterParams& params);

}  // namespace dmapper
