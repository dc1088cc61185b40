#include "dmapper/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmapper/distributed.hpp"
#include "dmapper/errors.hpp"
#include "dmapper/io.hpp"
#include "dmapper/mapper.hpp"
#include "dmapper/perf.hpp"

namespace dmapper {

namespace {

struct Instance {
    PointCloud cloud;
    FilterValues fv;
    PreprocessedCover pc;
    std::vector<CoverElement> flat;
    ClusterParams params;
};

Instance load_instance(const RunConfig& cfg) {
    Instance inst;
    if (!cfg.input.empty()) {
        const bool off = cfg.input.size() >= 4 &&
                         cfg.input.compare(cfg.input.size() - 4, 4, ".off") == 0;
        inst.cloud = off ? read_points_off(cfg.input) : read_points_csv(cfg.input);
    } else {
        inst.cloud = generate_shape(parse_shape(cfg.shape), cfg.gen_n, cfg.gen_noise, cfg.seed);
    }
    if (inst.cloud.size() == 0) throw DomainError("input contains no points");

    inst.fv = evaluate_filter(inst.cloud, FilterSpec::parse(cfg.filter));
    const double width = cfg.overlap_width > 0.0
                             ? cfg.overlap_width
                             : default_overlap_width(inst.fv.lo, inst.fv.hi, cfg.chunks, cfg.gain);
    const ChainCover chain = build_chain_cover(inst.fv.lo, inst.fv.hi, cfg.chunks, width);
    inst.pc = build_sub_covers(chain, cfg.resolution, cfg.gain);
    inst.flat = flatten_cover(inst.pc);
    inst.params = {cfg.eps, cfg.min_pts};
    return inst;
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

int do_run(const RunConfig& cfg, const std::string& out_path, const std::string& dot_path,
           std::ostream& out) {
    const Instance inst = load_instance(cfg);

    nlohmann::json meta = cfg.to_json();
    MapperGraph graph;
    const auto start = std::chrono::steady_clock::now();
    if (cfg.mode == "seq") {
        graph = sequential_mapper(inst.cloud, inst.fv, inst.flat, inst.params);
    } else {
        const DistributedResult result =
            distributed_mapper(inst.cloud, inst.fv, inst.pc, inst.params, cfg.workers);
        graph = result.graph;
        meta["timing_ms"] = {{"plan", result.timing.plan_s * 1e3},
                             {"parallel", result.timing.parallel_s * 1e3},
                             {"merge", result.timing.merge_s * 1e3}};
    }
    const double wall_ms = ms_since(start);
    meta["points"] = inst.cloud.size();

    if (!out_path.empty()) export_json(graph, inst.flat, meta, out_path);
    if (!dot_path.empty()) export_dot(graph, dot_path);

    out << "nodes=" << graph.num_nodes() << " edges=" << graph.num_edges()
        << " components=" << component_count(graph) << " cycles=" << cycle_rank(graph)
        << " time_ms=" << std::fixed << std::setprecision(1) << wall_ms << "\n";
    if (!out_path.empty()) out << "graph JSON written to " << out_path << "\n";
    if (!dot_path.empty()) out << "DOT written to " << dot_path << "\n";
    return 0;
}

nlohmann::json report_to_json(const SpeedupReport& report, const RunConfig& cfg) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"workers", row.workers},
                        {"mean_s", row.mean_s},
                        {"min_s", row.min_s},
                        {"max_s", row.max_s},
                        {"median_s", row.median_s},
                        {"speedup", row.speedup},
                        {"efficiency", row.efficiency}});
    return {{"meta", cfg.to_json()},
            {"repeats", report.repeats},
            {"parallel_fraction", report.parallel_fraction},
            {"phases_at_one_s",
             {{"plan", report.phases_at_one.plan_s},
              {"parallel", report.phases_at_one.parallel_s},
              {"merge", report.phases_at_one.merge_s}}},
            {"rows", rows}};
}

int do_bench(const RunConfig& cfg, const BenchmarkConfig& bc, const std::string& out_path,
             std::ostream& out) {
    const Instance inst = load_instance(cfg);
    const SpeedupReport report = run_benchmark(inst.cloud, inst.fv, inst.pc, inst.params, bc);
    const nlohmann::json doc = report_to_json(report, cfg);

    if (out_path.empty()) {
        out << doc.dump(2) << "\n";
        return 0;
    }
    std::ofstream file(out_path);
    if (!file) throw IoError("cannot open " + out_path + " for writing");
    file << doc.dump(2) << "\n";
    if (!file) throw IoError("failed while writing " + out_path);

    out << std::fixed << std::setprecision(3);
    for (const auto& row : report.rows)
        out << "workers=" << row.workers << " mean=" << row.mean_s << "s min=" << row.min_s
            << "s max=" << row.max_s << "s median=" << row.median_s << "s speedup=" << row.speedup
            << " efficiency=" << row.efficiency << "\n";
    out << "parallel fraction (measured at workers=1): " << report.parallel_fraction << "\n";
    out << "report written to " << out_path << "\n";
    return 0;
}

int do_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Instance inst = load_instance(cfg);

    const auto violations = validate_preprocessed_cover(inst.pc);
    for (const auto& v : violations)
        err << "violation: " << to_string(v.kind) << ": " << v.detail << "\n";
    out << "cover: "
        << (violations.empty() ? std::string("OK")
                               : std::to_string(violations.size()) + " violation(s)")
        << "\n";

    bool equal = false;
    if (violations.empty()) {
        const MapperGraph seq = sequential_mapper(inst.cloud, inst.fv, inst.flat, inst.params);
        const DistributedResult dist =
            distributed_mapper(inst.cloud, inst.fv, inst.pc, inst.params, cfg.workers);
        equal = graph_equal(seq, dist.graph);
        out << "seq/dist equivalence: " << (equal ? "OK" : "MISMATCH") << "\n";
    } else {
        out << "seq/dist equivalence: SKIPPED (cover invalid)\n";
    }
    return violations.empty() && equal ? 0 : 1;
}

int do_gen(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
    const PointCloud cloud =
        generate_shape(parse_shape(cfg.shape), cfg.gen_n, cfg.gen_noise, cfg.seed);
    write_points_csv(cloud, out_path);
    out << "wrote " << cloud.size() << " points to " << out_path << "\n";
    return 0;
}

int do_amdahl(double part, int n, std::ostream& out) {
    out << std::fixed << std::setprecision(2) << amdahl_speedup(part, n) << "\n";
    return 0;
}

int do_amdahl_table(std::ostream& out) {
    const AmdahlTable table = amdahl_table();
    out << std::fixed << std::setprecision(2);
    out << std::setw(12) << "processors";
    for (const double f : table.fractions) out << std::setw(10) << f;
    out << "\n";
    for (std::size_t p = 0; p < table.processors.size(); ++p) {
        out << std::setw(12) << table.processors[p];
        for (std::size_t f = 0; f < table.fractions.size(); ++f)
            out << std::setw(10) << table.speedup[p][f];
        out << "\n";
    }
    return 0;
}

// Shared by run/bench/validate: where the points come from and how the cover
// and clustering are parameterized.
void add_instance_options(CLI::App* cmd, RunConfig& cfg) {
    const auto filter_ok = CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                FilterSpec::parse(s);
                return {};
            } catch (const Error& e) {
                return std::string(e.what());
            }
        },
        "FILTER");

    auto* input = cmd->add_option("-i,--input", cfg.input, "CSV or OFF point file");
    auto* gen = cmd->add_option("--gen", cfg.shape,
                                "generate a shape instead of reading a file")
                    ->check(CLI::IsMember({"circle", "sphere", "torus"}));
    input->excludes(gen);
    gen->excludes(input);
    cmd->add_option("-n,--points", cfg.gen_n, "generated point count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--noise", cfg.gen_noise, "generator noise stddev")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", cfg.seed, "generator seed");
    cmd->add_option("--filter", cfg.filter, "coord:K | l2norm | col:NAME")->check(filter_ok);
    cmd->add_option("--chunks", cfg.chunks, "number of chain-cover chunks")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--resolution", cfg.resolution, "intervals per chunk")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--gain", cfg.gain, "fractional overlap between intervals")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    cmd->add_option("--overlap-width", cfg.overlap_width,
                    "chunk overlap width (default: gain * chunk length)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--eps", cfg.eps, "DBSCAN neighbourhood radius")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--min-pts", cfg.min_pts, "DBSCAN core threshold (self included)")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mapper graphs from point clouds, sequential or chunk-parallel"};
    app.name("dmapper");
    app.require_subcommand(1);

    RunConfig cfg;
    std::string out_path;
    std::string dot_path;

    auto* run = app.add_subcommand("run", "build a Mapper graph");
    add_instance_options(run, cfg);
    run->add_option("--mode", cfg.mode, "seq | dist")->check(CLI::IsMember({"seq", "dist"}));
    run->add_option("--workers", cfg.workers, "threads for dist mode")
        ->check(CLI::PositiveNumber);
    run->add_option("-o,--out", out_path, "write graph JSON here");
    run->add_option("--dot", dot_path, "write Graphviz DOT here");

    BenchmarkConfig bench_cfg;
    bool no_warmup = false;
    auto* bench = app.add_subcommand("bench", "time distributed runs per worker count");
    add_instance_options(bench, cfg);
    bench->add_option("--workers", bench_cfg.worker_counts,
                      "worker counts to time (must include 1)")
        ->delimiter(',');
    bench->add_option("--repeats", bench_cfg.repeats, "timed repeats per worker count")
        ->check(CLI::PositiveNumber);
    bench->add_flag("--no-warmup", no_warmup, "skip the discarded warm-up run");
    bench->add_option("-o,--out", out_path, "write the report JSON here");

    auto* validate = app.add_subcommand("validate", "check cover invariants and seq/dist equality");
    add_instance_options(validate, cfg);
    validate->add_option("--workers", cfg.workers, "threads for the distributed side")
        ->check(CLI::PositiveNumber);

    auto* gen = app.add_subcommand("gen", "sample a shape and write it as CSV");
    gen->add_option("--shape", cfg.shape, "circle | sphere | torus")
        ->required()
        ->check(CLI::IsMember({"circle", "sphere", "torus"}));
    gen->add_option("-n,--points", cfg.gen_n, "point count")->check(CLI::PositiveNumber);
    gen->add_option("--noise", cfg.gen_noise, "noise stddev")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", cfg.seed, "generator seed");
    gen->add_option("-o,--out", out_path, "output CSV path")->required();

    double amdahl_part = 0.0;
    int amdahl_n = 1;
    auto* amdahl = app.add_subcommand("amdahl", "ideal speedup for one configuration");
    amdahl->add_option("--part", amdahl_part, "parallelizable fraction in [0,1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    amdahl->add_option("--processors", amdahl_n, "processor count")
        ->required()
        ->check(CLI::PositiveNumber);

    auto* amdahl_tab = app.add_subcommand("amdahl-table", "speedup grid for the reference configurations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed() || bench->parsed() || validate->parsed()) {
            if (cfg.input.empty() && cfg.shape.empty()) {
                err << "error: provide --input FILE or --gen SHAPE\n";
                return 2;
            }
        }
        if (run->parsed()) return do_run(cfg, out_path, dot_path, out);
        if (bench->parsed()) {
            bench_cfg.warmup = !no_warmup;
            return do_bench(cfg, bench_cfg, out_path, out);
        }
        if (validate->parsed()) return do_validate(cfg, out, err);
        if (gen->parsed()) return do_gen(cfg, out_path, out);
        if (amdahl->parsed()) return do_amdahl(amdahl_part, amdahl_n, out);
        if (amdahl_tab->parsed()) return do_amdahl_table(out);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace dmapper
