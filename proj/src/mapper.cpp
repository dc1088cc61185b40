#include "dmapper/mapper.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

#include "dmapper/errors.hpp"

namespace dmapper {

std::vector<point_index> pullback(const FilterValues& fv, const Interval& interval) {
    std::vector<point_index> out;
    for (std::size_t i = 0; i < fv.values.size(); ++i)
        if (interval.contains(fv.values[i])) out.push_back(static_cast<point_index>(i));
    return out;
}

std::vector<point_index> pullback(const FilterValues& fv, const Interval& interval,
                                  std::span<const point_index> candidates) {
    std::vector<point_index> out;
    for (point_index idx : candidates)
        if (interval.contains(fv.values[static_cast<std::size_t>(idx)])) out.push_back(idx);
    return out;
}

MapperGraph mapper_on_subset(const PointCloud& cloud, const FilterValues& fv,
                             std::span<const point_index> subset,
                             std::span<const CoverElement> cover, const ClusterParams& params) {
    // Pull every cover element back through the filter, tracking which
    // subset points were claimed so a coverage hole is reported against the
    // first orphaned point rather than as a mysteriously missing node.
    std::vector<std::vector<point_index>> pullbacks(cover.size());
    std::vector<char> covered(subset.size(), 0);
    for (std::size_t e = 0; e < cover.size(); ++e) {
        for (std::size_t pos = 0; pos < subset.size(); ++pos) {
            const point_index idx = subset[pos];
            if (cover[e].interval.contains(fv.values[static_cast<std::size_t>(idx)])) {
                pullbacks[e].push_back(idx);
                covered[pos] = 1;
            }
        }
    }
    for (std::size_t pos = 0; pos < subset.size(); ++pos) {
        if (covered[pos]) continue;
        std::ostringstream os;
        os.precision(17);
        os << "point " << subset[pos] << " with filter value "
           << fv.values[static_cast<std::size_t>(subset[pos])] << " lies in no cover element";
        throw CoverDoesNotCoverRange(os.str());
    }

    MapperGraphBuilder builder;
    std::vector<Clustering> clusterings(cover.size());
    std::vector<std::vector<std::size_t>> handles(cover.size());
    for (std::size_t e = 0; e < cover.size(); ++e) {
        clusterings[e] = dbscan(cloud, pullbacks[e], params);
        handles[e].reserve(clusterings[e].size());
        for (const auto& cluster : clusterings[e].clusters)
            handles[e].push_back(
                builder.add_node({0, cover[e].id, cluster}, cover[e].interval));
    }

    // Only elements whose intervals intersect can share points, so restrict
    // the cluster-pair sweep to those; the weight is the overlap size.
    for (std::size_t e1 = 0; e1 < cover.size(); ++e1) {
        for (std::size_t e2 = e1 + 1; e2 < cover.size(); ++e2) {
            if (!cover[e1].interval.intersects(cover[e2].interval)) continue;
            for (std::size_t c1 = 0; c1 < clusterings[e1].size(); ++c1) {
                const auto& members1 = clusterings[e1].clusters[c1];
                for (std::size_t c2 = 0; c2 < clusterings[e2].size(); ++c2) {
                    const auto& members2 = clusterings[e2].clusters[c2];
                    // Two-pointer intersection count over the sorted members.
                    std::int64_t shared = 0;
                    std::size_t i = 0, j = 0;
                    while (i < members1.size() && j < members2.size()) {
                        if (members1[i] < members2[j])
                            ++i;
                        else if (members2[j] < members1[i])
                            ++j;
                        else {
                            ++shared;
                            ++i;
                            ++j;
                        }
                    }
                    if (shared > 0) builder.add_edge(handles[e1][c1], handles[e2][c2], shared);
                }
            }
        }
    }
    return builder.build();
}

MapperGraph sequential_mapper(const PointCloud& cloud, const FilterValues& fv,
                              std::span<const CoverElement> cover, const ClusterParams& params) {
    if (fv.values.size() != static_cast<std::size_t>(cloud.size()))
        throw DimensionMismatch("filter has " + std::to_string(fv.values.size()) +
                                " values for " + std::to_string(cloud.size()) + " points");
    std::vector<point_index> all(static_cast<std::size_t>(cloud.size()));
    std::iota(all.begin(), all.end(), point_index{0});
    return mapper_on_subset(cloud, fv, all, cover, params);
}

}  // namespace dmapper
