#include <doctest.h>

#include <numeric>
#include <set>

#include "sks/equidist.hpp"

using namespace sks;

TEST_CASE("build_SC for scalar 1x1 moduli") {
    // S_{mI_1} = {(x/m, xbar/m) : (x,m)=1}
    for (i64 m : {5, 8, 12}) {
        auto pts = build_SC(DiagonalModulus::from_divisors({m}));
        CHECK(static_cast<i64>(pts.size()) == euler_phi(m));
        std::set<std::pair<i64, i64>> got, expect;
        for (const auto& p : pts) {
            i64 scale = m / p.den;
            got.emplace(p.num2.at(0, 0).get_si() * scale, p.num1.at(0, 0).get_si() * scale);
        }
        for (i64 x = 0; x < m; ++x) {
            if (std::gcd(x, m) != 1) continue;
            i64 xb = invmod64(x, m);
            expect.emplace(x, xb);
        }
        CHECK(got == expect);
    }
}

TEST_CASE("build_SC basics") {
    auto pts = build_SC(DiagonalModulus::scalar(1, 2));
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].num1.is_zero());
    CHECK(pts[0].num2.is_zero());

    // |S_C| = |X(C)|, including composite moduli through recombination
    for (auto divs : std::vector<std::vector<i64>>{{6}, {2, 4}, {2, 12}, {3, 9}}) {
        DiagonalModulus c = DiagonalModulus::from_divisors(divs);
        CHECK(static_cast<i64>(build_SC(c).size()) == count_xtilde(c));
    }
}

TEST_CASE("torus points are symmetric with denominators dividing c_n") {
    DiagonalModulus c = DiagonalModulus::prime_power(3, {1, 2});
    for (const auto& p : build_SC(c)) {
        CHECK(p.den == c.cn());
        CHECK(p.num1.is_symmetric());
        CHECK(p.num2.is_symmetric());
        for (int i = 0; i < p.n; ++i)
            for (int j = 0; j < p.n; ++j) {
                CHECK(p.num1.at(i, j) >= 0);
                CHECK(p.num1.at(i, j) < p.den);
            }
    }
}

TEST_CASE("S_C averages reproduce the Kloosterman evaluator exactly") {
    // the module's core consistency test: sum of e(Q X1 + T X2) over S_C
    // equals K(Q,T;C) as exact phase sums
    for (auto divs : std::vector<std::vector<i64>>{{5}, {2, 6}, {3, 9}, {2, 12}}) {
        DiagonalModulus c = DiagonalModulus::from_divisors(divs);
        auto pts = build_SC(c);
        auto box = doubled_box(c.n, 2);
        KsEvaluator ev(c);
        size_t stride = box.size() > 9 ? 11 : 1;
        for (size_t qi = 0; qi < box.size(); qi += stride)
            for (size_t ti = 0; ti < box.size(); ti += stride) {
                PhaseSum avg(2 * c.cn());
                for (const auto& pt : pts) {
                    mpz_class k = 0;
                    for (int i = 0; i < c.n; ++i)
                        for (int j = 0; j < c.n; ++j)
                            k += box[qi].doubled.at(i, j) * pt.num1.at(j, i) +
                                 box[ti].doubled.at(i, j) * pt.num2.at(j, i);
                    avg.add_term(mod_floor(k, 2 * c.cn()).get_si());
                }
                REQUIRE(avg.value_equal(ev.eval(box[qi], box[ti])));
            }
    }
}

TEST_CASE("S_C for non-diagonal moduli through the normalization conjugation") {
    IntMatrix c = IntMatrix::from_rows({{4, 2}, {0, 4}});
    auto pts = build_SC(c);
    KsEvaluator ev(c);
    CHECK(static_cast<i64>(pts.size()) == ev.class_count());
    for (const auto& p : pts) {
        CHECK(p.num1.is_symmetric());
        CHECK(p.num2.is_symmetric());
    }
    // the S_C average still reproduces K(Q,T;C) exactly
    auto box = doubled_box(2, 2);
    for (size_t qi = 0; qi < box.size(); qi += 13)
        for (size_t ti = 0; ti < box.size(); ti += 7) {
            PhaseSum avg(2 * pts[0].den);
            for (const auto& pt : pts) {
                mpz_class k = 0;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        k += box[qi].doubled.at(i, j) * pt.num1.at(j, i) +
                             box[ti].doubled.at(i, j) * pt.num2.at(j, i);
                avg.add_term(mod_floor(k, 2 * pts[0].den).get_si());
            }
            REQUIRE(avg.value_equal(ev.eval(box[qi], box[ti])));
        }
}

TEST_CASE("weyl_sum") {
    HalfIntegralSym q1(IntMatrix::diagonal({2})), z1 = HalfIntegralSym::zero(1);
    IntMatrix c5 = IntMatrix::diagonal({5});
    // |Ramanujan-type sum| / 4 at (q,t) = (1,0)
    double w = weyl_sum(q1, z1, c5);
    CHECK(w == doctest::Approx(0.25)); // |c_5(1)| = |mu(5)| = 1, over phi(5) = 4
    CHECK(w <= 1.0);
    CHECK_THROWS_WITH_AS(weyl_sum(z1, z1, c5), "use mass 1", InputError);

    // C = I: single class, ratio 1
    CHECK(weyl_sum(q1, z1, IntMatrix::identity(1)) == doctest::Approx(1.0));
}

TEST_CASE("weyl_profile") {
    IntMatrix c5 = IntMatrix::diagonal({5});
    double p1 = weyl_profile(c5, 1);
    double p2 = weyl_profile(c5, 2);
    double p3 = weyl_profile(c5, 3);
    CHECK(p1 <= p2);
    CHECK(p2 <= p3);
    CHECK(p3 <= 1.0);
    CHECK_THROWS_WITH_AS(weyl_profile(c5, 0), "empty frequency box", InputError);

    // worker count cannot change the maximum
    CHECK(weyl_profile(c5, 3, 1) == weyl_profile(c5, 3, 4));
}

TEST_CASE("decay_experiment") {
    auto rows = decay_experiment(IntMatrix::diagonal({2}), {3}, 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].m == 3);
    CHECK(rows[0].c1 == 6);
    CHECK(rows[0].normalized == doctest::Approx(rows[0].profile * std::sqrt(6.0)));

    std::string csv = decay_csv(IntMatrix::diagonal({2}), 2, rows);
    CHECK(csv.find("# schema=sks-equi-v1 instance_hash=") == 0);
    CHECK(csv.find("m,c1,cn,radius,profile,normalized_profile") != std::string::npos);
}
