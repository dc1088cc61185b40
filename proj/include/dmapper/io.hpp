#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmapper/graph.hpp"
#include "dmapper/point_cloud.hpp"

namespace dmapper {

// How to turn a point into a scalar: one coordinate, the Euclidean norm, or
// a named CSV column.  Parsed from "coord:K", "l2norm", or "col:NAME".
struct FilterSpec {
    enum class Kind { coordinate, l2norm, column };

    Kind kind = Kind::coordinate;
    int axis = 0;        // for coordinate
    std::string column;  // for column

    // Throws DomainError on an unrecognized spec string.
    static FilterSpec parse(const std::string& text);
    std::string to_string() const;
};

// Everything a run/bench/validate invocation needs; echoed into output meta
// so results stay reproducible from the artifact alone.
struct RunConfig {
    std::string input;  // CSV/OFF path; empty when generating
    std::string shape;  // circle|sphere|torus when generating
    int gen_n = 2000;
    double gen_noise = 0.05;
    std::uint64_t seed = 7;

    std::string filter = "coord:0";
    int chunks = 4;
    int resolution = 10;
    double gain = 0.3;
    double overlap_width = 0.0;  // 0 = auto (gain * chunk length)

    double eps = 0.1;
    int min_pts = 5;

    std::string mode = "dist";  // "seq" | "dist"
    int workers = 4;

    nlohmann::json to_json() const;
};

// CSV reader: one point per row, comma-separated numeric fields, optional
// header row of column names (detected by non-numeric first row), blank
// lines and lines starting with '#' skipped.  All rows must share one width.
//
// Throws ParseError (with line number) on malformed rows, DimensionMismatch
// on inconsistent widths, IoError if the file cannot be opened.
PointCloud read_points_csv(const std::string& path);
PointCloud read_points_csv(std::istream& in);

// OFF reader: header "OFF", counts line "V F E", then V vertex lines of 3
// coordinates.  Faces are ignored — only the vertex cloud matters here.
//
// Throws FormatError on a bad magic/counts line, CountMismatch if the file
// ends before V vertices, ParseError on malformed vertex lines, IoError if
// the file cannot be opened.
PointCloud read_points_off(const std::string& path);
PointCloud read_points_off(std::istream& in);

void write_points_csv(const PointCloud& cloud, const std::string& path);

enum class Shape { circle, sphere, torus };

// Throws DomainError on an unknown name.
Shape parse_shape(const std::string& name);

// Samples n points from the unit circle (in R^2), the unit sphere (R^3), or
// the torus with major radius 2 and minor radius 0.5 (R^3), then perturbs
// every coordinate with centred Gaussian noise of the given standard
// deviation.  Fully determined by (shape, n, noise, seed).
PointCloud generate_shape(Shape shape, int n, double noise, std::uint64_t seed);

// Throws AxisOutOfBounds for a bad coordinate index, DomainError for an
// unknown column name (or a column filter on a header-less cloud).
FilterValues evaluate_filter(const PointCloud& cloud, const FilterSpec& spec);

// Graphviz rendering: node ids "c<cover_id>_<min point index>" (plus a
// "_s<side>" suffix for non-zero side tags), labels "<cover_id> | n=<size>",
// node width growing with cluster size, edges labelled by weight.
std::string to_dot(const MapperGraph& g);
void export_dot(const MapperGraph& g, const std::string& path);

// JSON document with keys meta (verbatim), cover (id/lo/hi records), nodes
// (canonical order, cover_id + sorted points), edges (positions into the
// node array, a < b, plus weight).
nlohmann::json graph_to_json(const MapperGraph& g, std::span<const CoverElement> cover,
                             const nlohmann::json& meta);
void export_json(const MapperGraph& g, std::span<const CoverElement> cover,
                 const nlohmann::json& meta, const std::string& path);

// Rebuilds a graph from graph_to_json output; round-tripping is the identity
// on canonical graphs.  Throws FormatError on missing/invalid structure.
MapperGraph graph_from_json(const nlohmann::json& doc);

}  // namespace dmapper
