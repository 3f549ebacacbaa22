#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <partfilt/report.hpp>
#include <partfilt/errors.hpp>
#include <sstream>

using namespace pf;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "partfilt_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("format_double roundtrips through text") {
    for (double v : {1.0 / 3.0, -2.5e-17, 1e300, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("row width must match the header") {
    Report rep;
    rep.columns = {"a", "b"};
    CHECK_THROWS_AS(rep.add_row({"1"}), ShapeError);
    rep.add_row({"1", "2"});
    CHECK(rep.rows.size() == 1);
}

TEST_CASE("emit_report writes matching csv and json twins") {
    Report rep;
    rep.columns = {"x", "y"};
    rep.config = {{"seed", "7"}};
    rep.add_row({"1", "2"});
    rep.add_row({"3", "4"});
    const auto stem = temp_file("twin");
    emit_report(rep, stem.string());

    std::ifstream csv(stem.string() + ".csv");
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(csv, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "x,y");
    CHECK(lines[1] == "1,2");

    std::ifstream json(stem.string() + ".json");
    std::stringstream body;
    body << json.rdbuf();
    CHECK(body.str().find("\"seed\"") != std::string::npos);
    CHECK(body.str().find(version_string()) != std::string::npos);
}

TEST_CASE("config parser handles comments, blanks and errors") {
    const auto path = temp_file("config.txt");
    {
        std::ofstream out(path);
        out << "# a comment\n\nlr = 0.01\nK=10\n  basis =  chebyshev  \n";
    }
    const auto kv = load_config(path.string());
    CHECK(kv.at("lr") == "0.01");
    CHECK(kv.at("K") == "10");
    CHECK(kv.at("basis") == "chebyshev");

    {
        std::ofstream out(path);
        out << "lr 0.01\n";
    }
    try {
        load_config(path.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":1") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/config"), ParseError);
}

}  // TEST_SUITE
