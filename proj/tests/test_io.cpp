#include <doctest.h>

#include <filesystem>
#include <random>

#include "hcube/errors.hpp"
#include "hcube/io.hpp"

using namespace hcube;

namespace {

Edge E(Vertex a, Vertex b) { return Edge::between(a, b); }

}  // namespace

TEST_CASE("instances accept integer and binary vertices") {
    const Instance a = parse_instance(R"({"n": 3, "matching": [[0, 1], ["010", "011"]], "faults": [["001", "101"]]})");
    CHECK(a.n == 3);
    CHECK(a.matching == EdgeSet{E(0, 1), E(2, 6)});
    CHECK(a.faults == EdgeSet{E(4, 5)});
    const Instance b = parse_instance(R"({"n": 2, "matching": [[0, 1]]})");
    CHECK(b.faults.empty());
}

TEST_CASE("malformed instances are parse errors") {
    CHECK_THROWS_AS(parse_instance("{"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"matching": []})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n": 2, "matching": [[0, 3]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n": 2, "matching": [[0, 1], [0, 2]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n": 2, "matching": [[0, 1], [1, 0]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n": 2, "matching": [[0, 1]], "faults": [[1, 0]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n": 2, "matching": [[0, 4]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n": 2, "matching": [["0", "1"]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n": 2, "matching": [[0]]})"), ParseError);
}

TEST_CASE("instances round-trip through serialisation") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        Instance inst;
        inst.n = 2 + static_cast<int>(rng() % 5);
        inst.matching = random_matching(inst.n, 1 + static_cast<int>(rng() % inst.n), rng);
        inst.faults = random_edges(inst.n, static_cast<int>(rng() % 3), inst.matching, rng);
        const std::string text = serialize_instance(inst);
        CHECK(parse_instance(text) == inst);
        CHECK(serialize_instance(parse_instance(text)) == text);
    }
}

TEST_CASE("cycle files round-trip and carry the trace") {
    ConstructionTrace t;
    t.begin(2, -1, "Base/Forest");
    const CycleFile c = make_cycle_file(HamCycle{2, {0, 1, 3, 2}}, &t);
    CHECK(c.trace == std::vector<std::string>{"Base/Forest"});
    CHECK(parse_cycle_file(serialize_cycle_file(c)) == c);
    const CycleFile plain = make_cycle_file(HamCycle{2, {0, 1, 3, 2}}, nullptr);
    CHECK(serialize_cycle_file(plain).find("trace") == std::string::npos);
    CHECK_THROWS_AS(parse_cycle_file(R"({"n": 2, "cycle": [0, 1, 3, 7]})"), ParseError);
    CHECK_THROWS_AS(parse_cycle_file(R"({"n": 2})"), ParseError);
}

TEST_CASE("DOT export tags matching, fault and cycle edges") {
    const HamCycle c{2, {0, 1, 3, 2}};
    const std::string dot = to_dot(c, EdgeSet{E(0, 1)}, {});
    CHECK(dot.rfind("graph Q2 {", 0) == 0);
    CHECK(dot.find("0 -- 1 [class=\"matching\"") != std::string::npos);
    CHECK(dot.find("1 -- 3 [class=\"cycle\"") != std::string::npos);
    const std::string with_fault = to_dot(HamCycle{3, {0, 1, 3, 2, 6, 7, 5, 4}}, {}, EdgeSet{E(1, 5)});
    CHECK(with_fault.find("1 -- 5 [class=\"fault\"") != std::string::npos);
}

TEST_CASE("atomic writes replace the file and leave no temporary") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "hcube_test_io";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "out.txt").string();
    write_text_file_atomic(path, "first\n");
    write_text_file_atomic(path, "second\n");
    CHECK(read_text_file(path) == "second\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    CHECK_THROWS_AS(read_text_file((dir / "missing.txt").string()), ParseError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep summaries are JSON arrays with one object per cell") {
    SweepReport r;
    r.theorem = 1;
    r.n = 3;
    r.cell = {2, 0};
    r.tested = 3;
    r.successes = 3;
    const std::string text = sweep_summary_json({r});
    CHECK(text.front() == '[');
    CHECK(text.find("\"pass\": true") != std::string::npos);
}
