#include <doctest.h>

#include <cmath>
#include <random>

#include "sks/phase_sum.hpp"

using namespace sks;

namespace {

PhaseSum random_sum(std::mt19937& rng, std::int64_t denom, int terms) {
    PhaseSum s(denom);
    for (int i = 0; i < terms; ++i) s.add_term(static_cast<std::int64_t>(rng() % denom));
    return s;
}

} // namespace

TEST_CASE("phase_mul is the value product") {
    PhaseSum unit = PhaseSum::one(2);
    std::mt19937 rng(99);
    PhaseSum a = random_sum(rng, 12, 7);
    CHECK(phase_mul(unit, a) == a.rescaled(12));

    // (1 + e(1/2)) annihilates anything
    PhaseSum zero_factor(2);
    zero_factor.add_term(0);
    zero_factor.add_term(1);
    PhaseSum prod = phase_mul(zero_factor, a);
    CHECK(prod.value_is_zero());

    for (int trial = 0; trial < 40; ++trial) {
        PhaseSum x = random_sum(rng, 10, 5), y = random_sum(rng, 8, 6);
        auto v = phase_mul(x, y).value();
        auto w = x.value() * y.value();
        CHECK(std::abs(v - w) < 1e-10);
    }
}

TEST_CASE("phase_mul associativity and commutativity on count vectors") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        PhaseSum a = random_sum(rng, 6, 4), b = random_sum(rng, 9, 3), c = random_sum(rng, 4, 5);
        CHECK(phase_mul(a, b) == phase_mul(b, a));
        CHECK(phase_mul(phase_mul(a, b), c) == phase_mul(a, phase_mul(b, c)));
    }
}

TEST_CASE("merge adds values and masses") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        PhaseSum a = random_sum(rng, 14, 6), b = random_sum(rng, 21, 4);
        PhaseSum m = merge(a, b);
        CHECK(m.mass() == a.mass() + b.mass());
        CHECK(std::abs(m.value() - (a.value() + b.value())) < 1e-10);
    }
}

TEST_CASE("magnitude") {
    CHECK(PhaseSum(10).magnitude() == 0.0);
    CHECK(PhaseSum::constant(6, 2).magnitude() == doctest::Approx(6.0));
    // K_1(1,1;5) as a frozen count vector: phases (x + xbar)/5 for x = 1..4
    PhaseSum k(10);
    k.add_term(4);  // x=1: 2/5
    k.add_term(10); // x=2: 5/5
    k.add_term(10); // x=3
    k.add_term(16); // x=4: 8/5
    CHECK(k.magnitude() == doctest::Approx(0.3819660113).epsilon(1e-9));
}

TEST_CASE("value equality through cyclotomic relations") {
    // 1 + e(1/2) = 0 seen at denominator 10
    PhaseSum a(10);
    a.add_term(0);
    a.add_term(5);
    CHECK(a.value_is_zero());
    CHECK(a.value_equal(PhaseSum(4)));

    // sum of all p-th roots vanishes
    PhaseSum b(7);
    for (int k = 0; k < 7; ++k) b.add_term(k);
    CHECK(b.value_is_zero());

    // e(1/6) = -e(4/6): different vectors, equal values
    PhaseSum l(6), r(6);
    l.add_term(1);
    r.add_term(4, -1);
    CHECK(l.value_equal(r));
    CHECK_FALSE(l == r.rescaled(6));

    // fast path: identical vectors at different denominators
    PhaseSum x(3);
    x.add_term(1, 2);
    CHECK(x.value_equal(x.rescaled(12)));
    PhaseSum y(3);
    y.add_term(2, 2);
    CHECK_FALSE(x.value_equal(y));
}

TEST_CASE("conjugate negates phases") {
    std::mt19937 rng(77);
    PhaseSum a = random_sum(rng, 9, 8);
    auto v = a.value(), w = a.conjugate().value();
    CHECK(v.real() == doctest::Approx(w.real()));
    CHECK(v.imag() == doctest::Approx(-w.imag()));
}

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_poly(1) == std::vector<std::int64_t>{-1, 1});
    CHECK(cyclotomic_poly(2) == std::vector<std::int64_t>{1, 1});
    CHECK(cyclotomic_poly(6) == std::vector<std::int64_t>{1, -1, 1});
    CHECK(cyclotomic_poly(12) == std::vector<std::int64_t>{1, 0, -1, 0, 1});
}
