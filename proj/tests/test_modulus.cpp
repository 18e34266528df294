#include <doctest.h>

#include <cmath>
#include <random>

#include "sks/modulus.hpp"
#include "sks/smallint.hpp"

using namespace sks;

TEST_CASE("divisor chain validation") {
    CHECK_THROWS_AS(DiagonalModulus::from_divisors({4, 6}), InputError);
    CHECK_THROWS_AS(DiagonalModulus::from_divisors({0, 2}), InputError);
    DiagonalModulus c = DiagonalModulus::from_divisors({2, 6, 12});
    CHECK(c.prime_local.at(2) == std::vector<int>{1, 1, 2});
    CHECK(c.prime_local.at(3) == std::vector<int>{0, 1, 1});
    CHECK_FALSE(c.is_prime_power());
    CHECK_FALSE(c.primes_cover_all_rows()); // 3 does not divide c_1
    CHECK(DiagonalModulus::from_divisors({6, 6, 12}).primes_cover_all_rows());
    CHECK_FALSE(DiagonalModulus::from_divisors({2, 12}).primes_cover_all_rows());
}

TEST_CASE("prime_split examples") {
    // diag(6): Bezout with minimal |r| is (-1, 1) for 2r + 3s = 1
    auto steps = prime_split(DiagonalModulus::from_divisors({6}));
    REQUIRE(steps.size() == 2);
    CHECK(steps[0].p == 2);
    CHECK(steps[0].local.divisors == std::vector<i64>{2});
    CHECK(steps[0].twist.g.divisors == std::vector<i64>{3});
    CHECK(steps[0].twist.r == -1);
    CHECK(steps[0].twist.s == 1);
    CHECK(steps[1].local.divisors == std::vector<i64>{3});

    // diag(1,12): leaves diag(1,4) and diag(1,3)
    steps = prime_split(DiagonalModulus::from_divisors({1, 12}));
    REQUIRE(steps.size() == 2);
    CHECK(steps[0].local.divisors == std::vector<i64>{1, 4});
    CHECK(steps[1].local.divisors == std::vector<i64>{1, 3});

    // prime power: a single leaf with no twist
    steps = prime_split(DiagonalModulus::prime_power(5, {1, 2}));
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].local.divisors == std::vector<i64>{5, 25});
}

TEST_CASE("prime_split invariants") {
    for (auto divs : std::vector<std::vector<i64>>{{60}, {2, 12}, {6, 36}, {1, 30}, {4, 40}}) {
        DiagonalModulus c = DiagonalModulus::from_divisors(divs);
        auto steps = prime_split(c);
        // leaves multiply back entrywise
        std::vector<i64> prod(static_cast<size_t>(c.n), 1);
        for (const auto& st : steps)
            for (int i = 0; i < c.n; ++i) prod[static_cast<size_t>(i)] *= st.local.divisors[static_cast<size_t>(i)];
        CHECK(prod == c.divisors);
        for (const auto& st : steps) {
            if (st.twist.f.n == 0) continue;
            // Bezout and Fbar F + Gbar G = I, exactly
            CHECK(st.twist.r * st.twist.f.cn() + st.twist.s * st.twist.g.cn() == 1);
            IntMatrix lhs = st.twist.fbar * st.twist.f.matrix() + st.twist.gbar * st.twist.g.matrix();
            CHECK(lhs == IntMatrix::identity(c.n));
        }
    }
}

TEST_CASE("strip_unit_block") {
    HalfIntegralSym q = HalfIntegralSym::from_doubled_rows({{2, 1}, {1, 4}});
    HalfIntegralSym t = HalfIntegralSym::from_doubled_rows({{0, 1}, {1, 2}});

    auto s = strip_unit_block(DiagonalModulus::from_divisors({1, 1}), q, t);
    CHECK(s.c.n == 0);
    CHECK(s.removed == 2);

    s = strip_unit_block(DiagonalModulus::from_divisors({1, 5}), q, t);
    CHECK(s.c.divisors == std::vector<i64>{5});
    CHECK(s.q.doubled == IntMatrix::from_rows({{4}}));
    CHECK(s.t.doubled == IntMatrix::from_rows({{2}}));

    s = strip_unit_block(DiagonalModulus::from_divisors({3, 9}), q, t);
    CHECK(s.removed == 0);
    CHECK(s.q.doubled == q.doubled);
}

TEST_CASE("bracket membership") {
    DiagonalModulus c = DiagonalModulus::prime_power(3, {1, 2});
    CHECK(bracket_contains(IntMatrix::zeros(2, 2), c));
    // p * E_12: min(sigma_1, sigma_2) = 1
    CHECK(bracket_contains(IntMatrix::from_rows({{0, 3}, {0, 0}}), c));
    CHECK_FALSE(bracket_contains(IntMatrix::from_rows({{0, 1}, {0, 0}}), c));

    // exhaustive oracle: membership in C Mat + Mat C by brute force over
    // A = C X + Y C with X, Y mod p^{sigma_n}
    i64 p = 3, psn = 9;
    auto in_lattice = [&](const IntMatrix& a) {
        for (i64 x0 = 0; x0 < psn; ++x0)
            for (i64 x1 = 0; x1 < psn; ++x1)
                for (i64 x2 = 0; x2 < psn; ++x2)
                    for (i64 x3 = 0; x3 < psn; ++x3) {
                        // A - C X has to lie in Mat * C: columns j divisible by c_j
                        IntMatrix x(2, 2);
                        x.at(0, 0) = x0; x.at(0, 1) = x1; x.at(1, 0) = x2; x.at(1, 1) = x3;
                        IntMatrix r = a - c.matrix() * x;
                        bool ok = true;
                        for (int i = 0; i < 2 && ok; ++i)
                            for (int j = 0; j < 2 && ok; ++j)
                                if (mod_floor(r.at(i, j), c.divisors[static_cast<size_t>(j)]) != 0) ok = false;
                        if (ok) return true;
                    }
        return false;
    };
    std::mt19937 rng(13);
    for (int trial = 0; trial < 12; ++trial) {
        IntMatrix a(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a.at(i, j) = static_cast<long>(rng() % 9);
        CHECK(bracket_contains(a, c) == in_lattice(a));
    }
    (void)p;
}

TEST_CASE("gcd_with_scalar") {
    IntMatrix q2 = IntMatrix::from_rows({{2, 0}, {0, 2}});
    CHECK(gcd_with_scalar(9, {&q2}) == 1);
    IntMatrix m = IntMatrix::from_rows({{3, 6}, {6, 3}});
    CHECK(gcd_with_scalar(9, {&m}) == 3);
    IntMatrix z = IntMatrix::zeros(2, 2);
    CHECK(gcd_with_scalar(7, {&z}) == 7);
    CHECK(gcd_with_scalar(7, {}) == 7);
}

TEST_CASE("phase_index") {
    DiagonalModulus c5 = DiagonalModulus::from_divisors({5});
    CHECK(phase_index(IntMatrix::zeros(1, 1), c5, IntMatrix::zeros(1, 1), 10) == 0);
    // n=1, C=(5), A=(2), Q=1 (R=2): tr = 2/5, N=10 -> k=4
    CHECK(phase_index(IntMatrix::from_rows({{2}}), c5, IntMatrix::from_rows({{2}}), 10) == 4);
    CHECK_THROWS_WITH_AS(phase_index(IntMatrix::from_rows({{2}}), c5, IntMatrix::from_rows({{2}}), 5),
                         "insufficient denominator", InputError);

    // float cross-check oracle on random n=2 instances
    std::mt19937 rng(7);
    DiagonalModulus c = DiagonalModulus::from_divisors({2, 6});
    i64 nden = 24;
    for (int trial = 0; trial < 20; ++trial) {
        IntMatrix a(2, 2), r(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a.at(i, j) = static_cast<long>(rng() % 12) - 6;
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                long v = static_cast<long>(rng() % 9) - 4;
                if (i == j) v = 2 * (v / 2);
                r.at(i, j) = v;
                r.at(j, i) = v;
            }
        i64 k = phase_index(a, c, r, nden);
        double tr = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                tr += a.at(i, j).get_d() * r.at(j, i).get_d() / (2.0 * static_cast<double>(c.divisors[static_cast<size_t>(j)]));
        double frac = tr - std::floor(tr);
        double kf = static_cast<double>(k) / static_cast<double>(nden);
        CHECK(std::min(std::abs(frac - kf), 1.0 - std::abs(frac - kf)) < 1e-12);
    }
}

TEST_CASE("normalize") {
    HalfIntegralSym q = HalfIntegralSym::from_doubled_rows({{2, 1}, {1, 4}});
    HalfIntegralSym t = HalfIntegralSym::from_doubled_rows({{0, 1}, {1, 2}});
    CHECK_THROWS_WITH_AS(normalize(IntMatrix::from_rows({{1, 1}, {1, 1}}), q, t), "singular modulus", InputError);

    IntMatrix c = IntMatrix::from_rows({{0, 2}, {2, 0}});
    NormalizedInstance ni = normalize(c, q, t);
    CHECK(ni.c.divisors == std::vector<i64>{2, 2});
    // U^t C V = S
    CHECK(ni.u.transpose() * c * ni.v == ni.c.matrix());
    CHECK(ni.q.doubled.is_symmetric());
}
