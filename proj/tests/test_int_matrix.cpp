#include <doctest.h>

#include <random>

#include "sks/int_matrix.hpp"

using namespace sks;

TEST_CASE("det_exact pinned values") {
    CHECK(det_exact(IntMatrix::identity(3)) == 1);
    CHECK(det_exact(IntMatrix::from_rows({{1, 2}, {3, 4}})) == -2);
    // diag(p^sigma) -> p^{sum sigma}
    CHECK(det_exact(IntMatrix::diagonal({3, 9, 27})) == 729);
    CHECK_THROWS_AS(det_exact(IntMatrix(2, 3)), InputError);
}

TEST_CASE("adjugate identities") {
    CHECK(adjugate(IntMatrix::identity(4)) == IntMatrix::identity(4));
    IntMatrix m = IntMatrix::from_rows({{7, -3}, {2, 5}});
    CHECK(adjugate(m) == IntMatrix::from_rows({{5, 3}, {-2, 7}}));

    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int trial = 0; trial < 50; ++trial) {
        IntMatrix r(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.at(i, j) = d(rng);
        // direct multiplication oracle
        CHECK(r * adjugate(r) == det_exact(r) * IntMatrix::identity(3));
        CHECK(adjugate(r) * r == det_exact(r) * IntMatrix::identity(3));
    }
}

TEST_CASE("adjugate against det on random 4x4 within [-9,9]") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int trial = 0; trial < 25; ++trial) {
        IntMatrix r(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.at(i, j) = d(rng);
        CHECK(r * adjugate(r) == det_exact(r) * IntMatrix::identity(4));
    }
}

TEST_CASE("inv_mod") {
    CHECK(inv_mod(IntMatrix::identity(3), 7) == IntMatrix::identity(3));
    CHECK(inv_mod(IntMatrix::from_rows({{2}}), 5) == IntMatrix::from_rows({{3}}));
    CHECK_THROWS_AS(inv_mod(IntMatrix::from_rows({{3}}), 9), InputError);

    std::mt19937 rng(23);
    std::uniform_int_distribution<int> d(-9, 9);
    int done = 0;
    while (done < 30) {
        IntMatrix m(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m.at(i, j) = d(rng);
        if (mod_floor(det_exact(m), 3) == 0) continue;
        IntMatrix inv = inv_mod(m, 27);
        IntMatrix prod = m * inv;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(mod_floor(prod.at(i, j), 27) == (i == j ? 1 : 0));
        ++done;
    }
}

TEST_CASE("half-integral invariants") {
    CHECK_THROWS_AS(HalfIntegralSym(IntMatrix::from_rows({{1, 0}, {0, 0}})), InputError); // odd diagonal
    CHECK_THROWS_AS(HalfIntegralSym(IntMatrix::from_rows({{0, 1}, {2, 0}})), InputError); // not symmetric
    HalfIntegralSym q = HalfIntegralSym::from_doubled_rows({{2, 3}, {3, -4}});
    CHECK(q.n == 2);

    // congruence transform keeps half-integrality
    IntMatrix u = IntMatrix::from_rows({{1, 2}, {0, 1}});
    HalfIntegralSym qt = q.transformed(u);
    CHECK(qt.doubled.is_symmetric());
    for (int i = 0; i < 2; ++i) CHECK(qt.doubled.at(i, i) % 2 == 0);
    CHECK(qt.doubled == u.transpose() * q.doubled * u);

    CHECK(q.bottom_right(1).doubled == IntMatrix::from_rows({{-4}}));
    CHECK_THROWS_AS(q.divided_by(3), InputError);
}
