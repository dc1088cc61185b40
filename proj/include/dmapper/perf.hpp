#pragma once

#include <array>
#include <vector>

#include "dmapper/clustering.hpp"
#include "dmapper/cover.hpp"
#include "dmapper/distributed.hpp"
#include "dmapper/point_cloud.hpp"

namespace dmapper {

// Ideal speedup of a workload whose fraction `part` parallelizes perfectly
// across n processors: 1 / ((1 - part) + part / n).
//
// Throws DomainError if part is outside [0, 1] or n < 1.
double amdahl_speedup(double part, int n);

// The reference grid: processor counts {10, 100, 1000} crossed with parallel
// fractions {0.25, 0.50, 0.94, 0.99}.  Values are exact; rounding is left to
// presentation.
struct AmdahlTable {
    static constexpr std::array<int, 3> processors{10, 100, 1000};
    static constexpr std::array<double, 4> fractions{0.25, 0.50, 0.94, 0.99};
    std::array<std::array<double, 4>, 3> speedup{};  // [processor][fraction]
};

AmdahlTable amdahl_table();

// Aggregated timings for one worker count.  Speedup and efficiency are
// relative to the workers == 1 row of the same report: speedup uses the mean
// times, efficiency is speedup / workers.
struct WorkerTiming {
    int workers = 0;
    double mean_s = 0.0;
    double min_s = 0.0;
    double max_s = 0.0;
    double median_s = 0.0;
    double speedup = 0.0;
    double efficiency = 0.0;
};

struct SpeedupReport {
    std::vector<WorkerTiming> rows;
    // Fraction of the workers == 1 wall time spent in the chunk-run phase,
    // aggregated over that row's repeats: the measured Amdahl `part`.
    double parallel_fraction = 0.0;
    TimingBreakdown phases_at_one;  // summed over the workers == 1 repeats
    int repeats = 0;
};

struct BenchmarkConfig {
    std::vector<int> worker_counts{1, 2, 4};  // must include 1
    int repeats = 3;
    bool warmup = true;  // one discarded run per worker count
};

// Pure aggregation used by run_benchmark and directly testable: samples[i]
// holds the repeat wall times for worker_counts[i].
SpeedupReport assemble_report(const std::vector<int>& worker_counts,
                              const std::vector<std::vector<double>>& samples,
                              const TimingBreakdown& phases_at_one);

// Times distributed_mapper over the given instance for each worker count.
// Each timed repeat is a full pipeline run; warm-up runs are discarded.
// Every run's graph must equal the first one (EquivalenceViolation
// otherwise), so a benchmark can never trade correctness for speed.
//
// Throws DomainError if worker_counts misses 1, any count < 1, or repeats < 1.
SpeedupReport run_benchmark(const PointCloud& cloud, const FilterValues& fv,
                            const PreprocessedCover& pc, const ClusterParams& params,
                            const BenchmarkConfig& config);

}  // namespace dmapper
