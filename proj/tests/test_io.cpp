#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "dmapper/errors.hpp"
#include "dmapper/io.hpp"
#include "dmapper/rng.hpp"
#include "support.hpp"

using namespace dmapper;
using dmapper::testing::random_graph;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

int count_occurrences(const std::string& haystack, const std::string& needle) {
    int n = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("csv reading handles headers, comments and blank lines") {
    std::istringstream in(
        "x,y,label_z\n"
        "# a comment\n"
        "0.5,1.5,2.5\n"
        "\n"
        "  -1, 2e-1 ,3\n");
    const PointCloud cloud = read_points_csv(in);
    REQUIRE(cloud.size() == 2);
    REQUIRE(cloud.dim() == 3);
    CHECK(cloud.point(0)[0] == 0.5);
    CHECK(cloud.point(1)[1] == doctest::Approx(0.2));
    REQUIRE(cloud.column_names().size() == 3);
    CHECK(cloud.column_names()[2] == "label_z");
}

TEST_CASE("headerless csv keeps the first row as data") {
    std::istringstream in("1,2\n3,4\n");
    const PointCloud cloud = read_points_csv(in);
    CHECK(cloud.size() == 2);
    CHECK(cloud.column_names().empty());
    CHECK(cloud.point(0)[0] == 1.0);
}

TEST_CASE("csv errors carry the offending line number") {
    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(read_points_csv(ragged), DimensionMismatch);

    std::istringstream junk("x,y\n1,2\n3,oops\n");
    try {
        read_points_csv(junk);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    std::istringstream empty("");
    CHECK(read_points_csv(empty).size() == 0);

    CHECK_THROWS_AS(read_points_csv(std::string("/nonexistent/points.csv")), IoError);
}

TEST_CASE("off reading accepts both counts-line placements and skips faces") {
    std::istringstream split(
        "OFF\n"
        "# triangle\n"
        "3 1 3\n"
        "0 0 0\n"
        "1 0 0\n"
        "0 1 0\n"
        "3 0 1 2\n");
    const PointCloud a = read_points_off(split);
    REQUIRE(a.size() == 3);
    REQUIRE(a.dim() == 3);
    CHECK(a.point(2)[1] == 1.0);

    std::istringstream joined("OFF 2 0 0\n0 0 1\n0 0 -1\n");
    const PointCloud b = read_points_off(joined);
    REQUIRE(b.size() == 2);
    CHECK(b.point(1)[2] == -1.0);
}

TEST_CASE("off reading rejects malformed files") {
    std::istringstream magic("PLY\n3 0 0\n");
    CHECK_THROWS_AS(read_points_off(magic), FormatError);

    std::istringstream counts("OFF\nnot counts\n");
    CHECK_THROWS_AS(read_points_off(counts), FormatError);

    std::istringstream truncated("OFF\n3 0 0\n0 0 0\n1 1 1\n");
    CHECK_THROWS_AS(read_points_off(truncated), CountMismatch);

    std::istringstream short_vertex("OFF\n1 0 0\n0 0\n");
    CHECK_THROWS_AS(read_points_off(short_vertex), ParseError);

    CHECK_THROWS_AS(read_points_off(std::string("/nonexistent/mesh.off")), IoError);
}

TEST_CASE("csv writing round-trips a cloud exactly") {
    const PointCloud cloud = generate_shape(Shape::sphere, 50, 0.01, 42);
    const auto path = temp_file("dmapper_roundtrip.csv");
    write_points_csv(cloud, path.string());
    const PointCloud back = read_points_csv(path.string());
    std::filesystem::remove(path);

    REQUIRE(back.size() == cloud.size());
    REQUIRE(back.dim() == cloud.dim());
    for (point_index i = 0; i < cloud.size(); ++i)
        for (int d = 0; d < cloud.dim(); ++d)
            CHECK(back.point(i)[d] == cloud.point(i)[d]);  // %.17g is lossless
}

TEST_CASE("random byte blobs never crash the readers") {
    SplitMix64 rng(0xf422);
    for (int iteration = 0; iteration < 300; ++iteration) {
        CAPTURE(iteration);
        std::string blob;
        const int len = static_cast<int>(rng.below(200));
        const bool printable = rng.below(2) == 0;
        for (int i = 0; i < len; ++i) {
            const char c = printable ? static_cast<char>(32 + rng.below(95))
                                     : static_cast<char>(rng.below(256));
            blob.push_back(c);
        }
        std::istringstream csv(blob);
        try {
            (void)read_points_csv(csv);
        } catch (const Error&) {
        }
        std::istringstream off(blob);
        try {
            (void)read_points_off(off);
        } catch (const Error&) {
        }
    }
    CHECK(true);  // reaching here without an escape or crash is the property
}

TEST_CASE("shape generation is deterministic and respects the geometry") {
    const PointCloud a = generate_shape(Shape::torus, 500, 0.05, 7);
    const PointCloud b = generate_shape(Shape::torus, 500, 0.05, 7);
    REQUIRE(a.size() == 500);
    REQUIRE(a.dim() == 3);
    for (point_index i = 0; i < a.size(); ++i)
        for (int d = 0; d < 3; ++d) CHECK(a.point(i)[d] == b.point(i)[d]);

    const PointCloud other_seed = generate_shape(Shape::torus, 500, 0.05, 8);
    bool any_differs = false;
    for (point_index i = 0; i < 500 && !any_differs; ++i)
        any_differs = other_seed.point(i)[0] != a.point(i)[0];
    CHECK(any_differs);

    // Noise-free samples sit exactly on the shapes.
    const PointCloud circle = generate_shape(Shape::circle, 200, 0.0, 3);
    REQUIRE(circle.dim() == 2);
    for (point_index i = 0; i < circle.size(); ++i) {
        const auto p = circle.point(i);
        CHECK(std::abs(std::hypot(p[0], p[1]) - 1.0) < 1e-12);
    }
    const PointCloud sphere = generate_shape(Shape::sphere, 200, 0.0, 3);
    REQUIRE(sphere.dim() == 3);
    for (point_index i = 0; i < sphere.size(); ++i) {
        const auto p = sphere.point(i);
        CHECK(std::abs(std::hypot(std::hypot(p[0], p[1]), p[2]) - 1.0) < 1e-12);
    }
    const PointCloud torus = generate_shape(Shape::torus, 200, 0.0, 3);
    for (point_index i = 0; i < torus.size(); ++i) {
        const auto p = torus.point(i);
        const double ring = std::hypot(p[0], p[1]) - 2.0;
        CHECK(std::abs(std::hypot(ring, p[2]) - 0.5) < 1e-12);
    }

    CHECK(parse_shape("circle") == Shape::circle);
    CHECK(parse_shape("sphere") == Shape::sphere);
    CHECK(parse_shape("torus") == Shape::torus);
    CHECK_THROWS_AS(parse_shape("klein"), DomainError);
    CHECK_THROWS_AS(generate_shape(Shape::circle, 0, 0.0, 1), DomainError);
    CHECK_THROWS_AS(generate_shape(Shape::circle, 10, -0.1, 1), DomainError);
}

TEST_CASE("filter specs parse, print and evaluate") {
    const FilterSpec coord = FilterSpec::parse("coord:2");
    CHECK(coord.kind == FilterSpec::Kind::coordinate);
    CHECK(coord.axis == 2);
    CHECK(coord.to_string() == "coord:2");

    const FilterSpec norm = FilterSpec::parse("l2norm");
    CHECK(norm.kind == FilterSpec::Kind::l2norm);
    CHECK(norm.to_string() == "l2norm");

    const FilterSpec col = FilterSpec::parse("col:height");
    CHECK(col.kind == FilterSpec::Kind::column);
    CHECK(col.column == "height");
    CHECK(col.to_string() == "col:height");

    CHECK_THROWS_AS(FilterSpec::parse("coord:x"), DomainError);
    CHECK_THROWS_AS(FilterSpec::parse("coord:"), DomainError);
    CHECK_THROWS_AS(FilterSpec::parse("norm"), DomainError);
    CHECK_THROWS_AS(FilterSpec::parse(""), DomainError);

    PointCloud cloud(2, {3.0, 4.0, 0.0, 1.0});
    const FilterValues by_axis = evaluate_filter(cloud, FilterSpec::parse("coord:1"));
    CHECK(by_axis.values == std::vector<double>{4.0, 1.0});
    CHECK(by_axis.lo == 1.0);
    CHECK(by_axis.hi == 4.0);

    const FilterValues by_norm = evaluate_filter(cloud, norm);
    CHECK(by_norm.values[0] == doctest::Approx(5.0));
    CHECK(by_norm.values[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(evaluate_filter(cloud, FilterSpec::parse("coord:2")), AxisOutOfBounds);
    CHECK_THROWS_AS(evaluate_filter(cloud, col), DomainError);  // no header names

    cloud.set_column_names({"width", "height"});
    const FilterValues by_col = evaluate_filter(cloud, col);
    CHECK(by_col.values == std::vector<double>{4.0, 1.0});
    CHECK_THROWS_AS(evaluate_filter(cloud, FilterSpec::parse("col:depth")), DomainError);
}

TEST_CASE("dot output lists every node and edge with the documented shapes") {
    MapperGraphBuilder builder;
    const auto n0 = builder.add_node({0, 0, {0, 1, 2}}, {0.0, 1.0});
    const auto n1 = builder.add_node({0, 1, {2, 3}}, {0.5, 1.5});
    const auto n2 = builder.add_node({1, 1, {7}}, {0.5, 1.5});
    builder.add_edge(n0, n1, 1);
    builder.add_edge(n1, n2, 4);
    const MapperGraph g = builder.build();

    const std::string dot = to_dot(g);
    CHECK(dot.rfind("graph", 0) == 0);  // undirected graphviz document
    CHECK(count_occurrences(dot, "label=") == 5);
    CHECK(dot.find("\"c0_0\"") != std::string::npos);
    CHECK(dot.find("\"c1_2\"") != std::string::npos);
    CHECK(dot.find("\"c1_7_s1\"") != std::string::npos);  // side tag suffix
    CHECK(dot.find("0 | n=3") != std::string::npos);
    CHECK(dot.find("--") != std::string::npos);
    CHECK(dot.find("label=\"4\"") != std::string::npos);
    CHECK(dot.back() == '\n');

    const auto path = temp_file("dmapper_graph.dot");
    export_dot(g, path.string());
    std::ifstream in(path);
    const std::string from_file((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
    std::filesystem::remove(path);
    CHECK(from_file == dot);
}

TEST_CASE("json export carries meta, cover, nodes and edges") {
    MapperGraphBuilder builder;
    const auto n0 = builder.add_node({0, 0, {0, 1}}, {0.0, 1.0});
    const auto n1 = builder.add_node({0, 1, {1, 2}}, {0.5, 1.5});
    builder.add_edge(n0, n1, 1);
    const MapperGraph g = builder.build();

    const std::vector<CoverElement> cover{{0, {0.0, 1.0}}, {1, {0.5, 1.5}}};
    const nlohmann::json meta{{"filter", "coord:0"}};
    const nlohmann::json doc = graph_to_json(g, cover, meta);

    CHECK(doc.at("meta").at("filter") == "coord:0");
    REQUIRE(doc.at("cover").size() == 2);
    CHECK(doc.at("cover")[1].at("lo") == 0.5);
    REQUIRE(doc.at("nodes").size() == 2);
    CHECK(doc.at("nodes")[0].at("cover_id") == 0);
    CHECK(doc.at("nodes")[0].at("points") == nlohmann::json({0, 1}));
    CHECK(doc.at("nodes")[0].at("size") == 2);
    REQUIRE(doc.at("edges").size() == 1);
    CHECK(doc.at("edges")[0].at("a") == 0);
    CHECK(doc.at("edges")[0].at("b") == 1);
    CHECK(doc.at("edges")[0].at("weight") == 1);
}

TEST_CASE("json round-trips are the identity on canonical graphs") {
    SplitMix64 rng(0x10ad);
    for (int iteration = 0; iteration < 20; ++iteration) {
        CAPTURE(iteration);
        const MapperGraph g = random_graph(rng);
        std::vector<CoverElement> cover;
        for (const auto& node : g.nodes()) {
            const bool seen = std::any_of(cover.begin(), cover.end(), [&](const CoverElement& c) {
                return c.id == node.key.cover_id;
            });
            if (!seen) cover.push_back({node.key.cover_id, node.interval});
        }
        const nlohmann::json doc = graph_to_json(g, cover, nlohmann::json::object());
        const MapperGraph back = graph_from_json(doc);
        REQUIRE(graph_equal(back, g));
        // Serialize again: documents must match field for field.
        CHECK(graph_to_json(back, cover, nlohmann::json::object()) == doc);
    }
}

TEST_CASE("malformed json documents are rejected as format errors") {
    CHECK_THROWS_AS(graph_from_json(nlohmann::json::array()), FormatError);
    CHECK_THROWS_AS(graph_from_json(nlohmann::json{{"nodes", 3}}), FormatError);

    nlohmann::json doc{{"meta", nlohmann::json::object()},
                       {"cover", nlohmann::json::array()},
                       {"nodes", nlohmann::json::array()},
                       {"edges", nlohmann::json::array()}};
    CHECK(graph_from_json(doc).empty());

    doc["nodes"].push_back({{"cover_id", 0}, {"points", {0, 1}}, {"size", 2}});
    doc["edges"].push_back({{"a", 0}, {"b", 5}, {"weight", 1}});  // dangling edge
    CHECK_THROWS_AS(graph_from_json(doc), FormatError);
}

TEST_CASE("run configs serialize every reproducibility field") {
    RunConfig config;
    config.shape = "torus";
    config.seed = 123;
    config.workers = 2;
    const nlohmann::json j = config.to_json();
    CHECK(j.at("shape") == "torus");
    CHECK(j.at("seed") == 123);
    CHECK(j.at("workers") == 2);
    CHECK(j.at("filter") == "coord:0");
    CHECK(j.contains("chunks"));
    CHECK(j.contains("resolution"));
    CHECK(j.contains("gain"));
    CHECK(j.contains("overlap_width"));
    CHECK(j.contains("eps"));
    CHECK(j.contains("min_pts"));
    CHECK(j.contains("mode"));
}
