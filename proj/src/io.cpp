#include "dmapper/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string_view>

#include "dmapper/errors.hpp"
#include "dmapper/rng.hpp"

namespace dmapper {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool skippable(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

}  // namespace

PointCloud read_points_csv(std::istream& in) {
    PointCloud cloud;
    std::vector<std::string> names;
    std::vector<double> row;
    std::string line;
    long lineno = 0;
    bool saw_data = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        const auto fields = split_csv(trim(line));

        row.clear();
        bool numeric = true;
        for (const auto& field : fields) {
            double v = 0.0;
            if (!parse_double(field, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }

        if (!numeric) {
            // A single non-numeric row is tolerated as a header, but only as
            // the very first content row.
            if (saw_data || !names.empty())
                throw ParseError("non-numeric field in row", lineno);
            for (const auto& field : fields) names.emplace_back(trim(field));
            continue;
        }

        if (saw_data && row.size() != static_cast<std::size_t>(cloud.dim()))
            throw DimensionMismatch("row at line " + std::to_string(lineno) + " has " +
                                    std::to_string(row.size()) + " fields, expected " +
                                    std::to_string(cloud.dim()));
        cloud.append(row);
        saw_data = true;
    }

    if (!saw_data) return PointCloud{};
    if (!names.empty()) cloud.set_column_names(std::move(names));
    return cloud;
}

PointCloud read_points_csv(const std::string& path) {
    auto in = open_or_throw(path);
    return read_points_csv(in);
}

PointCloud read_points_off(std::istream& in) {
    std::string line;
    long lineno = 0;

    const auto next_content_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!skippable(line)) return true;
        }
        return false;
    };

    if (!next_content_line()) throw FormatError("empty file where OFF header expected");
    auto header = split_ws(trim(line));
    if (header.empty() || header.front() != "OFF")
        throw FormatError("missing OFF magic on the first content line");
    header.erase(header.begin());

    // The counts either follow the magic on the same line or sit on the next.
    if (header.empty()) {
        if (!next_content_line()) throw FormatError("missing OFF counts line");
        header = split_ws(trim(line));
    }
    if (header.size() != 3) throw FormatError("OFF counts line must hold exactly three numbers");
    long counts[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        const auto f = header[static_cast<std::size_t>(i)];
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), counts[i]);
        if (ec != std::errc{} || ptr != f.data() + f.size() || counts[i] < 0)
            throw FormatError("bad OFF counts line");
    }

    const long vertices = counts[0];
    PointCloud cloud;
    std::vector<double> coords(3);
    for (long v = 0; v < vertices; ++v) {
        if (!next_content_line())
            throw CountMismatch("OFF header promises " + std::to_string(vertices) +
                                " vertices but the file ends after " + std::to_string(v));
        const auto fields = split_ws(trim(line));
        if (fields.size() < 3) throw ParseError("vertex line has fewer than 3 fields", lineno);
        for (int t = 0; t < 3; ++t)
            if (!parse_double(fields[static_cast<std::size_t>(t)], coords[static_cast<std::size_t>(t)]))
                throw ParseError("unparsable vertex coordinate", lineno);
        // Extra per-vertex fields (colours, normals) are ignored; so are the
        // face lines after the vertex block.
        cloud.append(coords);
    }
    return cloud;
}

PointCloud read_points_off(const std::string& path) {
    auto in = open_or_throw(path);
    return read_points_off(in);
}

void write_points_csv(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    if (!cloud.column_names().empty()) {
        for (std::size_t c = 0; c < cloud.column_names().size(); ++c)
            out << (c ? "," : "") << cloud.column_names()[c];
        out << '\n';
    }
    char buf[64];
    for (point_index i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        for (std::size_t c = 0; c < p.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", p[c]);
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("failed while writing " + path);
}

Shape parse_shape(const std::string& name) {
    if (name == "circle") return Shape::circle;
    if (name == "sphere") return Shape::sphere;
    if (name == "torus") return Shape::torus;
    throw DomainError("unknown shape '" + name + "' (expected circle, sphere, or torus)");
}

PointCloud generate_shape(Shape shape, int n, double noise, std::uint64_t seed) {
    if (n < 1) throw DomainError("point count must be positive");
    if (noise < 0.0) throw DomainError("noise level must be non-negative");

    constexpr double tau = 2.0 * std::numbers::pi;
    SplitMix64 rng(seed);
    const int dim = shape == Shape::circle ? 2 : 3;
    std::vector<double> coords;
    coords.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(dim));

    for (int i = 0; i < n; ++i) {
        switch (shape) {
            case Shape::circle: {
                const double angle = tau * rng.uniform01();
                coords.push_back(std::cos(angle));
                coords.push_back(std::sin(angle));
                break;
            }
            case Shape::sphere: {
                // Uniform on the sphere: z uniform in [-1, 1], angle uniform.
                const double z = 2.0 * rng.uniform01() - 1.0;
                const double angle = tau * rng.uniform01();
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                coords.push_back(r * std::cos(angle));
                coords.push_back(r * std::sin(angle));
                coords.push_back(z);
                break;
            }
            case Shape::torus: {
                // Major radius 2, minor radius 0.5.  The minor angle is
                // rejection-sampled so the surface density is uniform rather
                // than bunched on the inner rim.
                constexpr double major = 2.0;
                constexpr double minor = 0.5;
                const double theta = tau * rng.uniform01();
                double phi = 0.0;
                for (;;) {
                    phi = tau * rng.uniform01();
                    const double accept = (major + minor * std::cos(phi)) / (major + minor);
                    if (rng.uniform01() <= accept) break;
                }
                const double ring = major + minor * std::cos(phi);
                coords.push_back(ring * std::cos(theta));
                coords.push_back(ring * std::sin(theta));
                coords.push_back(minor * std::sin(phi));
                break;
            }
        }
    }

    if (noise > 0.0)
        for (auto& c : coords) c += noise * rng.gaussian();
    return PointCloud(dim, std::move(coords));
}

FilterSpec FilterSpec::parse(const std::string& text) {
    FilterSpec spec;
    if (text == "l2norm") {
        spec.kind = Kind::l2norm;
        return spec;
    }
    if (text.rfind("coord:", 0) == 0) {
        const std::string_view rest = std::string_view(text).substr(6);
        int axis = 0;
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), axis);
        if (ec != std::errc{} || ptr != rest.data() + rest.size() || axis < 0)
            throw DomainError("bad coordinate filter '" + text + "' (expected coord:K)");
        spec.kind = Kind::coordinate;
        spec.axis = axis;
        return spec;
    }
    if (text.rfind("col:", 0) == 0) {
        spec.kind = Kind::column;
        spec.column = text.substr(4);
        if (spec.column.empty()) throw DomainError("column filter needs a name (col:NAME)");
        return spec;
    }
    throw DomainError("unknown filter '" + text + "' (expected coord:K, l2norm, or col:NAME)");
}

std::string FilterSpec::to_string() const {
    switch (kind) {
        case Kind::coordinate: return "coord:" + std::to_string(axis);
        case Kind::l2norm: return "l2norm";
        case Kind::column: return "col:" + column;
    }
    return {};
}

FilterValues evaluate_filter(const PointCloud& cloud, const FilterSpec& spec) {
    int axis = spec.axis;
    if (spec.kind == FilterSpec::Kind::column) {
        const auto& names = cloud.column_names();
        if (names.empty())
            throw DomainError("column filter '" + spec.column +
                              "' needs named columns; this input has none (use coord:K)");
        const auto it = std::find(names.begin(), names.end(), spec.column);
        if (it == names.end()) throw DomainError("unknown column '" + spec.column + "'");
        axis = static_cast<int>(it - names.begin());
    }

    std::vector<double> values(static_cast<std::size_t>(cloud.size()));
    if (spec.kind == FilterSpec::Kind::l2norm) {
        for (point_index i = 0; i < cloud.size(); ++i) {
            double s = 0.0;
            for (const double c : cloud.point(i)) s += c * c;
            values[static_cast<std::size_t>(i)] = std::sqrt(s);
        }
    } else {
        if (axis < 0 || axis >= cloud.dim())
            throw AxisOutOfBounds("coordinate " + std::to_string(axis) +
                                  " out of bounds for dimension " + std::to_string(cloud.dim()));
        for (point_index i = 0; i < cloud.size(); ++i)
            values[static_cast<std::size_t>(i)] = cloud.point(i)[static_cast<std::size_t>(axis)];
    }
    return FilterValues::from(std::move(values));
}

namespace {

std::string dot_node_id(const NodeKey& key) {
    std::string id = "c" + std::to_string(key.cover_id) + "_" + std::to_string(key.points.front());
    if (key.side != 0) id += "_s" + std::to_string(key.side);
    return id;
}

}  // namespace

std::string to_dot(const MapperGraph& g) {
    std::ostringstream os;
    os << "graph G {\n";
    if (!g.nodes().empty()) os << "  node [shape=circle, fixedsize=true];\n";
    char width[32];
    for (const auto& node : g.nodes()) {
        // Area roughly proportional to cluster size, so width grows with the
        // square root.
        std::snprintf(width, sizeof width, "%.3f",
                      0.3 * std::sqrt(static_cast<double>(node.size())));
        os << "  \"" << dot_node_id(node.key) << "\" [label=\"" << node.key.cover_id
           << " | n=" << node.size() << "\", width=" << width << "];\n";
    }
    for (const auto& e : g.edges()) {
        os << "  \"" << dot_node_id(g.nodes()[e.a].key) << "\" -- \""
           << dot_node_id(g.nodes()[e.b].key) << "\" [label=\"" << e.weight << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

void export_dot(const MapperGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << to_dot(g);
    if (!out) throw IoError("failed while writing " + path);
}

nlohmann::json graph_to_json(const MapperGraph& g, std::span<const CoverElement> cover,
                             const nlohmann::json& meta) {
    nlohmann::json doc;
    doc["meta"] = meta;

    auto cover_json = nlohmann::json::array();
    for (const auto& element : cover)
        cover_json.push_back(
            {{"id", element.id}, {"lo", element.interval.lo}, {"hi", element.interval.hi}});
    doc["cover"] = std::move(cover_json);

    auto nodes = nlohmann::json::array();
    for (const auto& node : g.nodes()) {
        nlohmann::json n{{"cover_id", node.key.cover_id},
                         {"points", node.key.points},
                         {"size", node.size()}};
        if (node.key.side != 0) n["side"] = node.key.side;
        nodes.push_back(std::move(n));
    }
    doc["nodes"] = std::move(nodes);

    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges())
        edges.push_back({{"a", e.a}, {"b", e.b}, {"weight", e.weight}});
    doc["edges"] = std::move(edges);
    return doc;
}

void export_json(const MapperGraph& g, std::span<const CoverElement> cover,
                 const nlohmann::json& meta, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << graph_to_json(g, cover, meta).dump(2) << '\n';
    if (!out) throw IoError("failed while writing " + path);
}

MapperGraph graph_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
        throw FormatError("graph document needs 'nodes' and 'edges' arrays");
    const auto& nodes = doc.at("nodes");
    const auto& edges = doc.at("edges");
    if (!nodes.is_array() || !edges.is_array())
        throw FormatError("'nodes' and 'edges' must be arrays");

    // Node intervals are rebuilt from the cover section when present; they
    // are presentation data, so a missing entry is not an error.
    std::map<int, Interval> interval_of;
    if (doc.contains("cover") && doc.at("cover").is_array())
        for (const auto& element : doc.at("cover"))
            interval_of[element.at("id").get<int>()] = {element.at("lo").get<double>(),
                                                        element.at("hi").get<double>()};

    MapperGraphBuilder builder;
    try {
        for (const auto& n : nodes) {
            NodeKey key;
            key.cover_id = n.at("cover_id").get<int>();
            key.points = n.at("points").get<std::vector<point_index>>();
            key.side = n.value("side", 0);
            if (key.points.empty()) throw FormatError("node with empty point list");
            Interval itv;
            if (const auto it = interval_of.find(key.cover_id); it != interval_of.end())
                itv = it->second;
            builder.add_node(std::move(key), itv);
        }
        for (const auto& e : edges)
            builder.add_edge(e.at("a").get<std::size_t>(), e.at("b").get<std::size_t>(),
                             e.at("weight").get<std::int64_t>());
        return builder.build();
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("malformed graph document: ") + ex.what());
    } catch (const FormatError&) {
        throw;
    } catch (const Error& ex) {
        throw FormatError(std::string("invalid graph document: ") + ex.what());
    }
}

nlohmann::json RunConfig::to_json() const {
    return {
        {"input", input},
        {"shape", shape},
        {"gen_n", gen_n},
        {"gen_noise", gen_noise},
        {"seed", seed},
        {"filter", filter},
        {"chunks", chunks},
        {"resolution", resolution},
        {"gain", gain},
        {"overlap_width", overlap_width},
        {"eps", eps},
        {"min_pts", min_pts},
        {"mode", mode},
        {"workers", workers},
    };
}

}  // namespace dmapper
