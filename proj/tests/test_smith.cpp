#include <doctest.h>

#include <random>

#include "sks/smith.hpp"
#include "sks/verify_suites.hpp"

using namespace sks;

TEST_CASE("snf pinned examples") {
    SmithForm f = snf(IntMatrix::from_rows({{2, 0}, {0, 6}}));
    CHECK(f.divisors == std::vector<mpz_class>{2, 6});
    CHECK(f.u == IntMatrix::identity(2));
    CHECK(f.v == IntMatrix::identity(2));

    // d1 = gcd = 2, d2 = |det| = 8, so c2 = 4
    f = snf(IntMatrix::from_rows({{2, 4}, {6, 8}}));
    CHECK(f.divisors == std::vector<mpz_class>{2, 4});

    f = snf(IntMatrix::from_rows({{0, 1}, {-1, 0}}));
    CHECK(f.divisors == std::vector<mpz_class>{1, 1});

    CHECK_THROWS_WITH_AS(snf(IntMatrix::zeros(3, 3)), "rank zero", InputError);
}

TEST_CASE("snf suite grid") {
    SuiteResult r = suite_snf();
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("snf handles a previously exploding system") {
    // regression: this 5x8 matrix made the naive truncated-division
    // elimination blow up
    IntMatrix m(5, 8);
    long rows[5][8] = {
        {0, -9, 18, 0, 0, 0, 0, 0},
        {10, 6, 0, 0, -9, 0, 0, 0},
        {0, 0, 10, 6, 0, -9, 0, 0},
        {12, 23, 0, 0, 0, 0, -18, 0},
        {0, 0, 12, 23, 0, 0, 0, -18},
    };
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 8; ++j) m.at(i, j) = rows[i][j];
    SmithForm f = snf(m);
    CHECK(f.u * m * f.v == f.s);
    mpz_class du = det_exact(f.u), dv = det_exact(f.v);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    CHECK(f.divisors.size() == 5);
}

TEST_CASE("solve_linear") {
    // x + 2y = 5, 3y = 6
    IntMatrix a = IntMatrix::from_rows({{1, 2}, {0, 3}});
    auto sol = solve_linear(a, {5, 6});
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == 1);
    CHECK((*sol)[1] == 2);

    // 2x = 3 has no integral solution
    CHECK_FALSE(solve_linear(IntMatrix::from_rows({{2}}), {3}).has_value());

    // underdetermined systems pick some solution
    IntMatrix b = IntMatrix::from_rows({{2, 3}});
    auto s2 = solve_linear(b, {1});
    REQUIRE(s2.has_value());
    CHECK(2 * (*s2)[0] + 3 * (*s2)[1] == 1);

    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-6, 6);
    for (int trial = 0; trial < 40; ++trial) {
        IntMatrix coeff(3, 5);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 5; ++j) coeff.at(i, j) = d(rng);
        std::vector<mpz_class> x0(5);
        for (auto& v : x0) v = d(rng);
        std::vector<mpz_class> rhs(3, 0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 5; ++j) rhs[static_cast<size_t>(i)] += coeff.at(i, j) * x0[static_cast<size_t>(j)];
        auto got = solve_linear(coeff, rhs);
        REQUIRE(got.has_value());
        for (int i = 0; i < 3; ++i) {
            mpz_class acc = 0;
            for (int j = 0; j < 5; ++j) acc += coeff.at(i, j) * (*got)[static_cast<size_t>(j)];
            CHECK(acc == rhs[static_cast<size_t>(i)]);
        }
    }
}

TEST_CASE("hermite normal form") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-7, 7);
    int done = 0;
    while (done < 30) {
        IntMatrix c(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c.at(i, j) = d(rng);
        if (det_exact(c) == 0) continue;
        IntMatrix w;
        IntMatrix h = hermite_normal_form(c, &w);
        mpz_class dw = det_exact(w);
        CHECK((dw == 1 || dw == -1));
        CHECK(c * w == h);
        for (int i = 0; i < 3; ++i) {
            CHECK(h.at(i, i) > 0);
            for (int j = i + 1; j < 3; ++j) CHECK(h.at(i, j) == 0);
        }
        ++done;
    }
    CHECK_THROWS_AS(hermite_normal_form(IntMatrix::from_rows({{1, 1}, {1, 1}})), InputError);
}
