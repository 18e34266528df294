#include <doctest.h>

#include "sks/instance_io.hpp"
#include "sks/verify_suites.hpp"

using namespace sks;

TEST_CASE("ks instance parsing") {
    KsInstance inst = parse_ks_instance(
        "n 2\n"
        "c\n"
        "2 0\n"
        "0 6\n"
        "qdoubled\n"
        "2 1\n"
        "1 4\n"
        "tdoubled\n"
        "0 0\n"
        "0 0\n");
    CHECK(inst.c == IntMatrix::from_rows({{2, 0}, {0, 6}}));
    CHECK(inst.q.doubled.at(0, 1) == 1);
    CHECK(inst.t.doubled.is_zero());

    // comments and omitted q/t default to zero
    KsInstance i2 = parse_ks_instance("# scalar\nn 1\nc\n5\n");
    CHECK(i2.q.doubled.is_zero());
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_ks_instance("n 2\nc\n1 0\n0 x\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
        CHECK(e.col == 3);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_ks_instance("n 2\nbogus\n1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_ks_instance("c\n1\n"), ParseError); // n must come first
    // half-integrality is validated during parsing
    CHECK_THROWS_AS(parse_ks_instance("n 1\nc\n3\nqdoubled\n1\n"), ParseError);
}

TEST_CASE("gauss and count instances") {
    GaussInstance g = parse_gauss_instance(
        "p 3\ns 1\nn 2\n"
        "adoubled\n1\n"
        "b1doubled\n2\n"
        "b2\n1\n");
    CHECK(g.p == 3);
    CHECK(g.a2.rows() == 1);

    CountSpec cs = parse_count_instance(
        "kind quad2\np 2\nk 3\na 1\nb 0\ncc -1\n");
    CHECK(cs.kind == EquationKind::QuadScalarMod2);
    CHECK(cs.inst.c == -1);

    CountSpec cm = parse_count_instance(
        "kind uq\np 5\nk 1\n"
        "t 1 1\n3\n"
        "q 1 1\n2\n");
    CHECK(cm.kind == EquationKind::UQ_eq_T);
    CHECK(cm.inst.q == IntMatrix::from_rows({{2}}));

    CHECK_THROWS_AS(parse_count_instance("kind nope\np 2\nk 1\n"), ParseError);
}

TEST_CASE("all verify suites pass") {
    // the heavyweight grids run in the acceptance binary; here the cheap ones
    for (const char* name : {"snf", "factorization", "blockdecomp", "common_divisor", "p2"}) {
        SuiteResult r = run_suite(name);
        INFO(r.name, ": ", r.detail);
        CHECK(r.passed);
        CHECK(r.checked > 0);
    }
    CHECK_THROWS_AS(run_suite("unknown"), InputError);
}
