#include "dmapper/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "dmapper/errors.hpp"

namespace dmapper {

namespace {

void check_params(const ClusterParams& params) {
    if (!(params.eps > 0.0)) throw DomainError("eps must be positive");
    if (params.min_pts < 1) throw DomainError("min_pts must be at least 1");
}

// Subset coordinates copied into one contiguous row-major buffer: cheaper to
// scan than chasing global indices, and it makes plain that distances depend
// only on coordinate values, never on subset order.
std::vector<double> gather(const PointCloud& cloud, std::span<const point_index> subset) {
    const auto d = static_cast<std::size_t>(cloud.dim());
    std::vector<double> x(subset.size() * d);
    for (std::size_t i = 0; i < subset.size(); ++i) {
        const auto p = cloud.point(subset[i]);
        std::copy(p.begin(), p.end(), x.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    return x;
}

// Sort members, then order clusters by smallest member: the canonical form
// shared by both clusterers.
Clustering canonicalize(std::vector<std::vector<point_index>> groups) {
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return Clustering{std::move(groups)};
}

}  // namespace

Clustering dbscan(const PointCloud& cloud, std::span<const point_index> subset,
                  const ClusterParams& params) {
    check_params(params);
    const std::size_t k = subset.size();
    if (k == 0) return {};

    const auto d = static_cast<std::size_t>(cloud.dim());
    const std::vector<double> x = gather(cloud, subset);
    const double eps2 = params.eps * params.eps;

    const auto dist2 = [&x, d](std::size_t i, std::size_t j) {
        const double* a = x.data() + i * d;
        const double* b = x.data() + j * d;
        double s = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
            const double diff = a[t] - b[t];
            s += diff * diff;
        }
        return s;
    };

    // Pass 1: neighbour counts (self included) -> core flags.  Counts are
    // accumulated over unordered pairs, so no adjacency is ever stored and
    // memory stays O(k) no matter how dense the eps-graph is.
    std::vector<std::int32_t> count(k, 1);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (dist2(i, j) <= eps2) {
                ++count[i];
                ++count[j];
            }
    std::vector<char> core(k, 0);
    for (std::size_t i = 0; i < k; ++i) core[i] = count[i] >= params.min_pts;

    // Pass 2: connected components of the core-core adjacency, recomputing
    // distances during the sweep.  Component labels depend on scan order but
    // the partition itself does not; canonicalize() erases the labels.
    constexpr std::int32_t unassigned = -1;
    std::vector<std::int32_t> label(k, unassigned);
    std::int32_t next_label = 0;
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < k; ++seed) {
        if (!core[seed] || label[seed] != unassigned) continue;
        const std::int32_t cid = next_label++;
        label[seed] = cid;
        stack.assign(1, seed);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < k; ++v) {
                if (!core[v] || label[v] != unassigned) continue;
                if (dist2(u, v) <= eps2) {
                    label[v] = cid;
                    stack.push_back(v);
                }
            }
        }
    }

    // Pass 3: border points join the cluster of their nearest core neighbour;
    // exact distance ties go to the core with the lowest global index, so the
    // assignment is a function of the subset as a set.
    for (std::size_t i = 0; i < k; ++i) {
        if (core[i]) continue;
        double best_d2 = std::numeric_limits<double>::infinity();
        point_index best_global = std::numeric_limits<point_index>::max();
        std::int32_t best_label = unassigned;
        for (std::size_t j = 0; j < k; ++j) {
            if (!core[j]) continue;
            const double d2 = dist2(i, j);
            if (d2 > eps2) continue;
            if (d2 < best_d2 || (d2 == best_d2 && subset[j] < best_global)) {
                best_d2 = d2;
                best_global = subset[j];
                best_label = label[j];
            }
        }
        label[i] = best_label;  // stays unassigned for noise
    }

    std::vector<std::vector<point_index>> groups(static_cast<std::size_t>(next_label));
    for (std::size_t i = 0; i < k; ++i) {
        if (label[i] == unassigned)
            groups.push_back({subset[i]});  // noise: singleton cluster
        else
            groups[static_cast<std::size_t>(label[i])].push_back(subset[i]);
    }
    return canonicalize(std::move(groups));
}

namespace {

// Minimal union-find for the oracle clusterer.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t i) {
        while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
        return i;
    }
    void merge(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

Clustering brute_force_clusters(const PointCloud& cloud, std::span<const point_index> subset,
                                const ClusterParams& params) {
    check_params(params);
    const std::size_t k = subset.size();
    if (k == 0) return {};

    const auto d = static_cast<std::size_t>(cloud.dim());
    const std::vector<double> x = gather(cloud, subset);

    // Full distance matrix up front — the whole point of the oracle is to be
    // obviously correct, not frugal.
    std::vector<double> dist2(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < d; ++t) {
                const double diff = x[i * d + t] - x[j * d + t];
                s += diff * diff;
            }
            dist2[i * k + j] = s;
        }

    const double eps2 = params.eps * params.eps;
    std::vector<char> core(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        int neighbours = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (dist2[i * k + j] <= eps2) ++neighbours;
        core[i] = neighbours >= params.min_pts;
    }

    DisjointSets sets(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (core[i] && core[j] && dist2[i * k + j] <= eps2) sets.merge(i, j);

    // Border points attach to the root of their nearest core (lowest global
    // index on ties); noise keeps its own root and comes out as a singleton.
    std::vector<std::size_t> attach(k);
    for (std::size_t i = 0; i < k; ++i) {
        attach[i] = i;
        if (core[i]) continue;
        double best_d2 = std::numeric_limits<double>::infinity();
        point_index best_global = std::numeric_limits<point_index>::max();
        std::size_t best_core = i;
        for (std::size_t j = 0; j < k; ++j) {
            if (!core[j] || dist2[i * k + j] > eps2) continue;
            if (dist2[i * k + j] < best_d2 ||
                (dist2[i * k + j] == best_d2 && subset[j] < best_global)) {
                best_d2 = dist2[i * k + j];
                best_global = subset[j];
                best_core = j;
            }
        }
        attach[i] = best_core;
    }

    std::vector<std::vector<point_index>> by_root(k);
    for (std::size_t i = 0; i < k; ++i) by_root[sets.find(attach[i])].push_back(subset[i]);
    std::vector<std::vector<point_index>> groups;
    for (auto& g : by_root)
        if (!g.empty()) groups.push_back(std::move(g));
    return canonicalize(std::move(groups));
}

}  // namespace dmapper
