#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <partfilt/graph.hpp>

using namespace pf;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "partfilt_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("make_graph normalizes orientation and deduplicates") {
    const Graph g =
        make_graph(4, {{2, 1}, {1, 2}, {0, 3}, {3, 3}});  // self-loop dropped
    CHECK(g.num_edges() == 2);
    CHECK(g.edges[0] == std::pair<int, int>{0, 3});
    CHECK(g.edges[1] == std::pair<int, int>{1, 2});
}

TEST_CASE("self-loops kept on request") {
    LoadOptions opts;
    opts.keep_self_loops = true;
    const Graph g = make_graph(2, {{1, 1}}, opts);
    CHECK(g.num_edges() == 1);
    CHECK(g.degrees()[1] == 1);
}

TEST_CASE("out-of-range endpoints are rejected") {
    CHECK_THROWS_AS(make_graph(2, {{0, 5}}), IndexError);
    CHECK_THROWS_AS(make_graph(3, {{-1, 1}}), IndexError);
}

TEST_CASE("degrees, adjacency and components on a hand example") {
    // path 0-1-2 plus isolated node 3
    const Graph g = make_graph(4, {{0, 1}, {1, 2}});
    CHECK(g.degrees() == std::vector<int>{1, 2, 1, 0});
    CHECK(g.adjacency()[1] == std::vector<int>{0, 2});
    int count = 0;
    const auto comp = g.components(&count);
    CHECK(count == 2);
    CHECK(comp == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("edge-list roundtrip preserves the graph") {
    const Graph g = make_graph(5, {{0, 1}, {2, 4}, {1, 3}});
    const auto path = temp_file("roundtrip.edges");
    save_edge_list(g, path.string());
    const Graph h = load_edge_list(path.string());
    CHECK(h.n == g.n);
    CHECK(h.edges == g.edges);
}

TEST_CASE("edge-list parser reports line numbers") {
    const auto path = temp_file("bad.edges");
    write_text(path, "#n 4\n0 1\n0 x\n");
    try {
        load_edge_list(path.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }

    write_text(path, "0 1 7\n");
    CHECK_THROWS_AS(load_edge_list(path.string()), ParseError);

    write_text(path, "#n 2\n0 5\n");
    CHECK_THROWS_AS(load_edge_list(path.string()), IndexError);
}

TEST_CASE("declared #n can exceed the max id") {
    const auto path = temp_file("declared.edges");
    write_text(path, "#n 10\n0 1\n");
    const Graph g = load_edge_list(path.string());
    CHECK(g.n == 10);
    CHECK(g.num_edges() == 1);
}

TEST_CASE("feature text and binary formats roundtrip identically") {
    Graph g = make_graph(3, {{0, 1}, {1, 2}});
    Eigen::MatrixXd x(3, 2);
    x << 1.5, -2.25, 0.0, 1e-17, 3.0, 4.0;
    g.features = x;

    const auto text = temp_file("feat.txt");
    const auto bin = temp_file("feat.pflt");
    save_features_text(g, text.string());
    save_features_binary(g, bin.string());

    Graph gt = make_graph(3, {{0, 1}, {1, 2}});
    load_features(gt, text.string());
    CHECK((*gt.features - x).cwiseAbs().maxCoeff() == 0.0);

    Graph gb = make_graph(3, {{0, 1}, {1, 2}});
    load_features(gb, bin.string());
    CHECK((*gb.features - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("feature loader rejects ragged and mismatched input") {
    const auto path = temp_file("ragged.txt");
    write_text(path, "1 2\n3\n");
    Graph g = make_graph(2, {{0, 1}});
    CHECK_THROWS_AS(load_features(g, path.string()), ShapeError);

    write_text(path, "1 2\n3 4\n5 6\n");
    CHECK_THROWS_AS(load_features(g, path.string()), ShapeError);  // 3 != n
}

TEST_CASE("labels load with inferred class count") {
    const auto path = temp_file("labels.txt");
    write_text(path, "0\n2\n1\n");
    Graph g = make_graph(3, {{0, 1}});
    load_labels(g, path.string());
    CHECK(g.num_classes == 3);
    CHECK(*g.labels == std::vector<int>{0, 2, 1});

    write_text(path, "0\n-1\n0\n");
    CHECK_THROWS_AS(load_labels(g, path.string()), ParseError);
}

TEST_CASE("edge homophily on a hand-labeled graph") {
    Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    g.labels = std::vector<int>{0, 0, 1, 1};
    g.num_classes = 2;
    // same-label edges: (0,1) and (2,3) of four
    CHECK(edge_homophily(g) == doctest::Approx(0.5));
    Graph empty = make_graph(2, {});
    empty.labels = std::vector<int>{0, 0};
    empty.num_classes = 1;
    CHECK(edge_homophily(empty) == 0.0);
}

}  // TEST_SUITE
