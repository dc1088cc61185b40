#include "dmapper/perf.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "dmapper/errors.hpp"
#include "dmapper/graph.hpp"

namespace dmapper {

double amdahl_speedup(double part, int n) {
    if (!(part >= 0.0 && part <= 1.0))
        throw DomainError("parallel fraction must lie in [0, 1]");
    if (n < 1) throw DomainError("processor count must be at least 1");
    return 1.0 / ((1.0 - part) + part / static_cast<double>(n));
}

AmdahlTable amdahl_table() {
    AmdahlTable table;
    for (std::size_t p = 0; p < table.processors.size(); ++p)
        for (std::size_t f = 0; f < table.fractions.size(); ++f)
            table.speedup[p][f] = amdahl_speedup(table.fractions[f], table.processors[p]);
    return table;
}

SpeedupReport assemble_report(const std::vector<int>& worker_counts,
                              const std::vector<std::vector<double>>& samples,
                              const TimingBreakdown& phases_at_one) {
    if (worker_counts.size() != samples.size())
        throw DomainError("one sample list per worker count required");

    const auto mean = [](const std::vector<double>& xs) {
        return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    };

    double mean_at_one = 0.0;
    bool has_one = false;
    for (std::size_t i = 0; i < worker_counts.size(); ++i) {
        if (worker_counts[i] != 1) continue;
        if (samples[i].empty()) throw DomainError("empty sample list");
        mean_at_one = mean(samples[i]);
        has_one = true;
    }
    if (!has_one) throw DomainError("worker counts must include 1 as the baseline");

    SpeedupReport report;
    report.phases_at_one = phases_at_one;
    report.parallel_fraction = phases_at_one.parallel_fraction();
    report.repeats = static_cast<int>(samples.front().size());
    for (std::size_t i = 0; i < worker_counts.size(); ++i) {
        if (samples[i].empty()) throw DomainError("empty sample list");
        std::vector<double> sorted = samples[i];
        std::sort(sorted.begin(), sorted.end());
        WorkerTiming row;
        row.workers = worker_counts[i];
        row.mean_s = mean(samples[i]);
        row.min_s = sorted.front();
        row.max_s = sorted.back();
        const std::size_t h = sorted.size() / 2;
        row.median_s =
            sorted.size() % 2 == 1 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
        row.speedup = mean_at_one / row.mean_s;
        row.efficiency = row.speedup / static_cast<double>(row.workers);
        report.rows.push_back(row);
    }
    return report;
}

SpeedupReport run_benchmark(const PointCloud& cloud, const FilterValues& fv,
                            const PreprocessedCover& pc, const ClusterParams& params,
                            const BenchmarkConfig& config) {
    if (config.repeats < 1) throw DomainError("repeats must be at least 1");
    if (config.worker_counts.empty()) throw DomainError("no worker counts given");
    bool has_one = false;
    for (int w : config.worker_counts) {
        if (w < 1) throw DomainError("worker counts must be at least 1");
        if (w == 1) has_one = true;
    }
    if (!has_one) throw DomainError("worker counts must include 1 as the baseline");

    using clock = std::chrono::steady_clock;
    MapperGraph reference;
    bool have_reference = false;
    const auto note_graph = [&](const MapperGraph& g, int workers) {
        if (!have_reference) {
            reference = g;
            have_reference = true;
        } else if (!graph_equal(reference, g)) {
            // A benchmark that changes the answer is measuring the wrong thing.
            throw EquivalenceViolation("workers=" + std::to_string(workers) +
                                       " produced a different graph than the baseline");
        }
    };

    std::vector<std::vector<double>> samples(config.worker_counts.size());
    TimingBreakdown phases_at_one;
    for (std::size_t i = 0; i < config.worker_counts.size(); ++i) {
        const int workers = config.worker_counts[i];
        if (config.warmup) note_graph(distributed_mapper(cloud, fv, pc, params, workers).graph,
                                      workers);
        for (int rep = 0; rep < config.repeats; ++rep) {
            const auto start = clock::now();
            const DistributedResult result = distributed_mapper(cloud, fv, pc, params, workers);
            const auto stop = clock::now();
            samples[i].push_back(std::chrono::duration<double>(stop - start).count());
            note_graph(result.graph, workers);
            if (workers == 1) {
                // The measured parallel fraction comes from the single-worker
                // phase split, aggregated over all its repeats.
                phases_at_one.plan_s += result.timing.plan_s;
                phases_at_one.parallel_s += result.timing.parallel_s;
                phases_at_one.merge_s += result.timing.merge_s;
            }
        }
    }
    return assemble_report(config.worker_counts, samples, phases_at_one);
}

}  // namespace dmapper
