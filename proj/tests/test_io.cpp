#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "whlab/io.hpp"
#include "whlab/random.hpp"

using namespace whlab;
using io::Json;

TEST_CASE("stable dump") {
    const Json j = {{"b", 0.1}, {"a", Json::array({1, 2.5, "x"})}, {"c", Json::object()}, {"d", true}};
    const std::string s = io::dump_stable(j);
    CHECK(s == "{\n  \"a\": [\n    1,\n    2.5,\n    \"x\"\n  ],\n  \"b\": 0.10000000000000001,\n  \"c\": {},\n  \"d\": true\n}\n");
    CHECK(io::dump_stable(Json::parse(s)) == s);
    CHECK(io::dump_stable(io::number(HUGE_VAL)) == "\"inf\"\n");
    CHECK(io::dump_stable(Json{{"cases", Json::array()}}) == "{\n  \"cases\": []\n}\n");
}

TEST_CASE("matrix round trip") {
    Rng rng(1);
    const MatrixXc m = random_gaussian<double>(3, 3, rng);
    const MatrixXc back = io::matrix_from_json(Json::parse(io::dump_stable(io::to_json(m))));
    CHECK((back - m).norm() == 0.0);
    const Json real_only = {{"d", 2}, {"re", {{1, 2}, {3, 4}}}};
    CHECK(io::matrix_from_json(real_only)(1, 0) == cdouble(3, 0));
    CHECK_THROWS_AS(io::matrix_from_json(Json{{"d", 2}, {"re", {{1, 2}}}}), io::SchemaError);
    CHECK_THROWS_AS(io::matrix_from_json(Json{{"re", {{1}}}}), io::SchemaError);
    CHECK_THROWS_AS(io::matrix_from_json(Json{{"d", 1}, {"re", {{"a"}}}}), io::SchemaError);
}

TEST_CASE("algebra round trip and closure check") {
    const auto a = diagonal_algebra<double>(3);
    const auto b = io::algebra_from_json(io::to_json(a));
    CHECK(b.size() == 3);
    for (const auto& m : a.basis()) CHECK(b.contains(m));
    // span{I, E_01 + E_10} is closed; span{E_00} lacks the identity
    Json closed = {{"d", 2}, {"basis", {io::to_json(MatrixXc::Identity(2, 2)),
                                        io::to_json((MatrixXc(2, 2) << 0, 1, 1, 0).finished())}}};
    CHECK(io::algebra_from_json(closed).size() == 2);
    Json no_unit = {{"d", 2}, {"basis", {io::to_json((MatrixXc(2, 2) << 1, 0, 0, 0).finished())}}};
    CHECK_THROWS_AS(io::algebra_from_json(no_unit), io::SchemaError);
    Json not_herm = {{"d", 2}, {"basis", {io::to_json((MatrixXc(2, 2) << 0, 1, 0, 0).finished())}}};
    CHECK_THROWS_AS(io::algebra_from_json(not_herm), io::SchemaError);
}

TEST_CASE("symbol round trip") {
    Rng rng(2);
    SymbolFunction f(2);
    f.set(-1, random_gaussian<double>(2, 2, rng));
    f.set(3, random_gaussian<double>(2, 2, rng));
    const auto g = io::symbol_from_json(Json::parse(io::dump_stable(io::to_json(f))));
    CHECK(g.support() == f.support());
    for (auto k : f.support()) CHECK((g.at(k) - f.at(k)).norm() == 0.0);
    Json bad = io::to_json(f);
    bad["support"] = {-1, 2};
    CHECK_THROWS_AS(io::symbol_from_json(bad), io::SchemaError);
    bad = io::to_json(f);
    bad["values"]["x"] = bad["values"]["3"];
    CHECK_THROWS_AS(io::symbol_from_json(bad), io::SchemaError);
}

TEST_CASE("section round trip") {
    const auto act = EndomorphismAction::identity(1);
    GroupoidSection s(1, {4, 3}, act);
    s.set({Unit::at(2), -1}, MatrixXc::Constant(1, 1, cdouble(1, 2)));
    s.set({Unit::inf(), 3}, MatrixXc::Constant(1, 1, 5.0));
    const auto t = io::section_from_json(io::to_json(s), 1, {4, 3}, act);
    CHECK(t.distance(s) == 0.0);
    const Json off = Json::array({{{"X", 0}, {"g", -1}, {"value", io::to_json(MatrixXc::Identity(1, 1))}}});
    CHECK_THROWS_AS(io::section_from_json(off, 1, {4, 3}, act), DomainError);
}

TEST_CASE("piecewise-linear and trig round trips") {
    const PiecewiseLinear f({0.0, 0.25, 1.0}, {1.0, cdouble(0, 2), -3.0});
    const auto g = io::pl_from_json(io::to_json(f));
    CHECK(g.breaks() == f.breaks());
    CHECK(g.values() == f.values());
    CHECK(io::to_json(f)["vals"][0].is_number());
    CHECK(io::pl_from_json(Json{{"breaks", {0, 0.5, 1}}, {"vals", {1, 2, 3}}})(0.75) == cdouble(2.5));
    CHECK_THROWS_AS(io::pl_from_json(Json{{"breaks", {0, 0.5}}, {"vals", {1, 2}}}), io::SchemaError);

    const TrigPolynomial p({{-2, cdouble(1, -1)}, {5, 0.5}});
    const auto q = io::trig_from_json(Json::parse(io::dump_stable(io::to_json(p))));
    CHECK(coeff_distance(p, q) == 0.0);
    CHECK_THROWS_AS(io::trig_from_json(Json{{"coeffs", {{"1.5", {1, 0}}}}}), io::SchemaError);
}

TEST_CASE("set sequences") {
    const Json j = Json::parse(R"({"ambient":"R","window":[-4,4],"step":0.25,
        "sets":[{"kind":"ray","endpoint":1},{"kind":"interval","lo":-1,"hi":"inf"},{"kind":"empty"},
                {"kind":"all"},{"kind":"union","parts":[{"kind":"ray","endpoint":-2},{"kind":"interval","lo":0,"hi":1}]}]})");
    const auto seq = io::set_sequence_from_json(j);
    CHECK(seq.size() == 5);
    CHECK(seq[0].contains(1.0));
    CHECK_FALSE(seq[0].contains(1.5));
    CHECK(seq[1].contains(3.0));
    CHECK_FALSE(seq[2].contains(0.0));
    CHECK(seq[4].contains(-3.0));
    CHECK_FALSE(seq[4].contains(-1.0));

    const Json q = Json::parse(R"({"ambient":"R2","window":[[-2,2],[-1,1]],"step":0.5,
        "sets":[{"kind":"quadrant","corner":[0,0]}]})");
    const auto seq2 = io::set_sequence_from_json(q);
    CHECK(seq2.front().frame().lo == std::vector<double>{-2, -1});

    CHECK_THROWS_AS(io::set_sequence_from_json(Json::parse(R"({"ambient":"Q","window":[0,1],"sets":[]})")),
                    io::SchemaError);
    CHECK_THROWS_AS(io::set_sequence_from_json(Json::parse(R"({"ambient":"R","window":[0,1],"step":0.5,"sets":[{"kind":"disc"}]})")),
                    io::SchemaError);
    CHECK_THROWS_AS(io::set_sequence_from_json(Json::parse(R"({"ambient":"R","window":[0,1],"step":0.5,"sets":[]})")),
                    io::SchemaError);
}

TEST_CASE("fell limit report") {
    const Json j = Json::parse(R"({"ambient":"R","window":[-2,2],"step":0.5,
        "sets":[{"kind":"ray","endpoint":0},{"kind":"ray","endpoint":0},{"kind":"ray","endpoint":0},{"kind":"ray","endpoint":0}]})");
    const Json r = io::to_json(fell_limit(io::set_sequence_from_json(j)));
    CHECK(r["converges"] == true);
    CHECK(r["limit_runs"] == Json::parse("[[-2, 0]]"));
}

TEST_CASE("homotopy report") {
    Rng rng(3);
    const auto rep = verify_condition_H(halfline_spec(1e-10), uniform_grid(65), halfline_samples(5, rng), 1e-10);
    const Json j = io::to_json(rep);
    CHECK(j["suite"] == "condition_H");
    CHECK(j["model"] == "halfline");
    CHECK(j["clauses"].contains("boundary_invariance"));
    CHECK(j["clauses"].contains("orbit_and_order"));
    CHECK(j["clauses"].contains("endpoints"));
    CHECK(j["failures"].empty());
}

TEST_CASE("file errors") {
    CHECK_THROWS_AS(io::read_file("/nonexistent/whlab.json"), io::IoError);
    CHECK_THROWS_AS(io::write_file("/nonexistent/dir/out.json", "{}"), io::IoError);
}
