#include <doctest.h>

#include <string>

#include "elemnorm/io.hpp"

using namespace elemnorm;
using io::Json;

namespace {

std::string error_of(const std::string& text) {
    try {
        io::operator_from_json(io::parse_json(text, "input"));
    } catch (const io::InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("operator round trip") {
    auto rng = keyed_rng(1, 0);
    const ElementaryOperator t = random_operator(2, 3, rng);
    const Json j = io::operator_to_json(t);
    CHECK(j["n"] == 2);
    CHECK(j["l"] == 3);
    CHECK(j["a"][0].size() == 4);
    const ElementaryOperator back = io::operator_from_json(io::parse_json(j.dump(), "roundtrip"));
    for (Index k = 0; k < 3; ++k) {
        CHECK((back.a()[k] - t.a()[k]).norm() == 0.0);
        CHECK((back.b()[k] - t.b()[k]).norm() == 0.0);
    }
}

TEST_CASE("row-major entries") {
    const Json j = io::parse_json(R"({"dim": 2, "entries": [[1,0],[2,0],[3,0],[4,1]]})", "m");
    const Matrix m = io::square_from_json(j);
    CHECK(m(0, 1) == Complex(2.0, 0.0));
    CHECK(m(1, 0) == Complex(3.0, 0.0));
    CHECK(m(1, 1) == Complex(4.0, 1.0));
    CHECK(io::square_to_json(m).dump() == R"({"dim":2,"entries":[[1.0,0.0],[2.0,0.0],[3.0,0.0],[4.0,1.0]]})");
}

TEST_CASE("malformed JSON reports a position") {
    const std::string msg = error_of("{\"n\": 2,\n \"l\": 1,\n \"a\": [,]}");
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
}

TEST_CASE("schema errors name the offending field") {
    CHECK(error_of(R"({"l": 1, "a": [], "b": []})").find("\"n\"") != std::string::npos);
    CHECK(error_of(R"({"n": 0, "l": 1, "a": [], "b": []})").find("$.n") != std::string::npos);
    const std::string short_matrix =
        error_of(R"({"n": 2, "l": 1, "a": [[[1,0]]], "b": [[[1,0],[0,0],[0,0],[1,0]]]})");
    CHECK(short_matrix.find("$.a[0]") != std::string::npos);
    CHECK(short_matrix.find("4") != std::string::npos);
    const std::string bad_pair =
        error_of(R"({"n": 1, "l": 1, "a": [[[1]]], "b": [[[1,0]]]})");
    CHECK(bad_pair.find("$.a[0][0]") != std::string::npos);
    const std::string wrong_count = error_of(R"({"n": 1, "l": 2, "a": [[[1,0]]], "b": [[[1,0]]]})");
    CHECK(wrong_count.find("l = 2") != std::string::npos);
}

TEST_CASE("vector families") {
    const Json j = io::parse_json(R"({"dim": 2, "vectors": [[[1,0],[0,1]], [[0,0],[2,0]]]})", "v");
    const auto vs = io::vectors_from_json(j);
    REQUIRE(vs.size() == 2);
    CHECK(vs[0](1) == Complex(0.0, 1.0));
    CHECK(io::vectors_to_json(vs) == j);
}

TEST_CASE("report layout") {
    NormReport r;
    r.value = 1.5;
    r.method = NormMethod::TgmFormula;
    r.restarts_used = 4;
    r.converged = true;
    r.seed = 9;
    const Json j = io::report_to_json(r, io::Bounds{2.0, std::nullopt});
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) {
        keys.push_back(it.key());
    }
    CHECK(keys == std::vector<std::string>{"value", "method", "certificate", "restarts_used",
                                           "converged", "seed", "bounds"});
    CHECK(j["certificate"].is_null());
    CHECK(j["bounds"]["haagerup"] == 2.0);
    CHECK(j["bounds"]["cb"].is_null());
}
