#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "sks/bounds.hpp"
#include "sks/kloosterman.hpp"
#include "sks/smith.hpp"

using namespace sks;

namespace {

/// Independent evaluation of K(Q,T;C) for arbitrary nonsingular C: classes
/// of Mat/C Mat enumerated through the Hermite residue system, symmetric-
/// pair representatives and completions found by integer linear solves.
/// Shares nothing with the normalize/prime-split evaluation path.
PhaseSum ks_general_direct(const HalfIntegralSym& q, const HalfIntegralSym& t, const IntMatrix& c) {
    const int n = c.rows();
    mpz_class det = det_exact(c);
    REQUIRE(det != 0);
    mpz_class adet = abs(det);
    IntMatrix adjc = adjugate(c);
    i64 nden = 2 * adet.get_si();

    IntMatrix h = hermite_normal_form(c);
    std::vector<i64> diag(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) diag[static_cast<size_t>(i)] = h.at(i, i).get_si();

    auto solve_sym_fix = [&](const IntMatrix& d) -> std::optional<IntMatrix> {
        // M with C (D + C M)^t symmetric
        int eqs = n * (n - 1) / 2;
        IntMatrix coeff(eqs, n * n);
        std::vector<mpz_class> rhs(static_cast<size_t>(eqs));
        IntMatrix cdt = c * d.transpose();
        int row = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                for (int l = 0; l < n; ++l)
                    for (int k = 0; k < n; ++k)
                        coeff.at(row, l * n + k) = c.at(i, k) * c.at(j, l) - c.at(j, k) * c.at(i, l);
                rhs[static_cast<size_t>(row)] = cdt.at(j, i) - cdt.at(i, j);
                ++row;
            }
        auto sol = solve_linear(coeff, rhs);
        if (!sol) return std::nullopt;
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = (*sol)[static_cast<size_t>(i * n + j)];
        return m;
    };

    auto solve_completion = [&](const IntMatrix& d) -> IntMatrix {
        int na = n * n;
        int eqs = n * (n - 1) / 2 + na;
        IntMatrix coeff(eqs, 2 * na);
        std::vector<mpz_class> rhs(static_cast<size_t>(eqs));
        int row = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    coeff.at(row, k * n + i) += c.at(k, j);
                    coeff.at(row, k * n + j) -= c.at(k, i);
                }
                ++row;
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    coeff.at(row, j * n + k) = d.at(i, k);
                    coeff.at(row, na + k * n + j) -= c.at(i, k);
                }
                rhs[static_cast<size_t>(row)] = (i == j) ? 1 : 0;
                ++row;
            }
        auto sol = solve_linear(coeff, rhs);
        REQUIRE(sol.has_value());
        IntMatrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a.at(i, j) = (*sol)[static_cast<size_t>(i * n + j)];
        return a;
    };

    PhaseSum out(nden);
    std::vector<i64> digits(static_cast<size_t>(n * n), 0);
    for (;;) {
        IntMatrix d(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) d.at(i, j) = digits[static_cast<size_t>(j * n + i)];
        auto fix = solve_sym_fix(d);
        if (fix) {
            IntMatrix dsym = d + c * *fix;
            if (is_coprime_pair(c, dsym)) {
                IntMatrix a = solve_completion(dsym);
                // tr(A C^{-1} Q + C^{-1} D T) = [tr(A adj(C) RQ) + tr(adj(C) D RT)] / (2 det)
                mpz_class num = (a * adjc * q.doubled).trace() + (adjc * dsym * t.doubled).trace();
                if (det < 0) num = -num;
                out.add_term(mod_floor(num, nden).get_si());
            }
        }
        size_t k = digits.size();
        bool done = true;
        while (k-- > 0) {
            // digit k is component (k mod n) of column (k div n); the
            // residue system of Z^n / C Z^n runs component i mod h_ii
            int comp = static_cast<int>(k) % n;
            if (++digits[k] < diag[static_cast<size_t>(comp)]) {
                done = false;
                break;
            }
            digits[k] = 0;
        }
        if (done) return out;
    }
}

HalfIntegralSym random_half(std::mt19937& rng, int n, int radius) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            long v = static_cast<long>(rng() % static_cast<unsigned long>(2 * radius + 1)) - radius;
            if (i == j) v = 2 * (v / 2);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    return HalfIntegralSym(m);
}

IntMatrix random_unimodular(std::mt19937& rng, int n) {
    IntMatrix u = IntMatrix::identity(n);
    for (int step = 0; step < 6; ++step) {
        int i = static_cast<int>(rng() % static_cast<unsigned>(n));
        int j = static_cast<int>(rng() % static_cast<unsigned>(n));
        if (i == j) continue;
        long f = static_cast<long>(rng() % 5) - 2;
        for (int k = 0; k < n; ++k) u.at(i, k) += f * u.at(j, k);
    }
    return u;
}

} // namespace

TEST_CASE("ks_direct basics") {
    DiagonalModulus c = DiagonalModulus::prime_power(3, {1, 2});
    HalfIntegralSym z = HalfIntegralSym::zero(2);
    PhaseSum k0 = ks_direct(z, z, c);
    CHECK(k0.magnitude() == doctest::Approx(36.0)); // |X~(C)| at zero phases
    CHECK(k0.mass() == count_xtilde(c));

    // c = 1: the empty-congruence term
    PhaseSum one = ks_direct(HalfIntegralSym::zero(1), HalfIntegralSym::zero(1), DiagonalModulus::from_divisors({1}));
    CHECK(one.value_equal(PhaseSum::one(2)));

    HalfIntegralSym q1(IntMatrix::diagonal({2}));
    PhaseSum k5 = ks_direct(q1, q1, DiagonalModulus::from_divisors({5}));
    CHECK(k5.magnitude() == doctest::Approx(0.3819660113).epsilon(1e-9));

    CHECK_THROWS_AS(ks_direct(z, z, DiagonalModulus::from_divisors({2, 6})), InputError);
}

TEST_CASE("classical sums") {
    for (i64 c : {1, 2, 3, 4, 8, 12}) CHECK(ks_classical(0, 0, c).magnitude() == doctest::Approx((double)euler_phi(c)));
    // S(1,1;4): two terms at e(1/2), so the value is -2
    auto v = ks_classical(1, 1, 4).value();
    CHECK(v.real() == doctest::Approx(-2.0));
    CHECK(v.imag() == doctest::Approx(0.0));
}

TEST_CASE("ks on 1x1 moduli agrees with the classical sum, c <= 60") {
    for (i64 c = 1; c <= 60; ++c) {
        IntMatrix cm = IntMatrix::diagonal({c});
        for (i64 q = 0; q < c; ++q)
            for (i64 t = 0; t < c; ++t) {
                PhaseSum lhs = ks(HalfIntegralSym(IntMatrix::diagonal({2 * q})),
                                  HalfIntegralSym(IntMatrix::diagonal({2 * t})), cm);
                PhaseSum rhs = ks_classical(q, t, c);
                REQUIRE(lhs.value_equal(rhs));
                REQUIRE(lhs.magnitude() <= weil_bound(q, t, c) + 1e-9);
            }
    }
}

TEST_CASE("trivial bound holds for every evaluated instance") {
    std::mt19937 rng(3);
    for (auto divs : std::vector<std::vector<i64>>{{4}, {9}, {2, 4}, {3, 9}, {2, 6}}) {
        DiagonalModulus c = DiagonalModulus::from_divisors(divs);
        for (int trial = 0; trial < 6; ++trial) {
            HalfIntegralSym q = random_half(rng, c.n, 4), t = random_half(rng, c.n, 4);
            PhaseSum k = ks(q, t, c.matrix());
            CHECK(k.magnitude() <= trivial_bound(c).get_d() + 1e-9);
        }
    }
}

TEST_CASE("worker count does not change the count vector") {
    DiagonalModulus c = DiagonalModulus::prime_power(3, {2, 2});
    std::mt19937 rng(8);
    HalfIntegralSym q = random_half(rng, 2, 4), t = random_half(rng, 2, 4);
    PhaseSum w1 = ks_direct(q, t, c, 1);
    PhaseSum w4 = ks_direct(q, t, c, 4);
    PhaseSum w8 = ks_direct(q, t, c, 8);
    CHECK(w1 == w4);
    CHECK(w1 == w8);
}

TEST_CASE("product path equals flat sum on composite diagonals") {
    std::mt19937 rng(21);
    for (auto divs : std::vector<std::vector<i64>>{{6}, {12}, {2, 6}, {2, 12}, {6, 12}, {1, 18}, {9, 18}}) {
        DiagonalModulus c = DiagonalModulus::from_divisors(divs);
        for (int trial = 0; trial < 4; ++trial) {
            HalfIntegralSym q = random_half(rng, c.n, 4), t = random_half(rng, c.n, 4);
            PhaseSum prod = ks(q, t, c.matrix());
            PhaseSum flat = ks_flat(q, t, c);
            REQUIRE(prod.value_equal(flat));
        }
    }
}

TEST_CASE("normalize invariance against the Hermite-domain oracle") {
    std::mt19937 rng(42);
    // the antidiagonal modulus normalizes to diag(2,2)
    {
        IntMatrix c = IntMatrix::from_rows({{0, 2}, {2, 0}});
        HalfIntegralSym z = HalfIntegralSym::zero(2);
        CHECK(normalize(c, z, z).c.divisors == std::vector<i64>{2, 2});
        HalfIntegralSym q = random_half(rng, 2, 3), t = random_half(rng, 2, 3);
        REQUIRE(ks(q, t, c).value_equal(ks_general_direct(q, t, c)));
    }
    int done = 0;
    while (done < 10) {
        IntMatrix c(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) c.at(i, j) = static_cast<long>(rng() % 7) - 3;
        mpz_class det = det_exact(c);
        if (det == 0 || abs(det) > 12 || c.at(0, 1) == 0) continue;
        HalfIntegralSym q = random_half(rng, 2, 3), t = random_half(rng, 2, 3);
        PhaseSum lhs = ks(q, t, c);
        PhaseSum oracle = ks_general_direct(q, t, c);
        REQUIRE(lhs.mass() == oracle.mass());
        REQUIRE(lhs.value_equal(oracle));
        ++done;
    }
}

TEST_CASE("stripping unit divisors preserves the value") {
    // compare ks_direct (which strips) against the unstripped frozen-row
    // enumeration with full symplectic completions
    std::mt19937 rng(61);
    for (i64 p : {2, 3}) {
        for (auto sig : std::vector<std::vector<int>>{{0, 1}, {0, 2}, {0, 0}}) {
            DiagonalModulus c = DiagonalModulus::prime_power(p, sig);
            for (int trial = 0; trial < 5; ++trial) {
                HalfIntegralSym q = random_half(rng, 2, 4), t = random_half(rng, 2, 4);
                PhaseSum direct(2 * c.cn());
                enumerate_xtilde(c, [&](const CoprimePairWitness& w) {
                    mpz_class k = 0;
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j) {
                            k += w.a.at(i, j) * q.doubled.at(j, i) * (c.cn() / c.divisors[static_cast<size_t>(j)]);
                            k += w.d.at(i, j) * t.doubled.at(j, i) * (c.cn() / c.divisors[static_cast<size_t>(i)]);
                        }
                    direct.add_term(mod_floor(k, 2 * c.cn()).get_si());
                });
                REQUIRE(ks_direct(q, t, c).value_equal(direct));
            }
        }
    }
}

TEST_CASE("unimodular twists leave the value unchanged") {
    std::mt19937 rng(77);
    int done = 0;
    while (done < 8) {
        IntMatrix c(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) c.at(i, j) = static_cast<long>(rng() % 9) - 4;
        mpz_class det = det_exact(c);
        if (det == 0 || abs(det) > 20) continue;
        HalfIntegralSym q = random_half(rng, 2, 4), t = random_half(rng, 2, 4);
        IntMatrix u = random_unimodular(rng, 2), v = random_unimodular(rng, 2);
        PhaseSum lhs = ks(q, t, c);
        PhaseSum rhs = ks(HalfIntegralSym(u.transpose() * q.doubled * u),
                          HalfIntegralSym(v.transpose() * t.doubled * v), u.transpose() * c * v);
        REQUIRE(lhs.value_equal(rhs));
        ++done;
    }
}

TEST_CASE("evaluator matches ks") {
    std::mt19937 rng(15);
    for (auto divs : std::vector<std::vector<i64>>{{5}, {2, 4}, {3, 9}, {2, 12}}) {
        DiagonalModulus c = DiagonalModulus::from_divisors(divs);
        KsEvaluator ev(c);
        CHECK(ev.class_count() == count_xtilde(c));
        for (int trial = 0; trial < 5; ++trial) {
            HalfIntegralSym q = random_half(rng, c.n, 4), t = random_half(rng, c.n, 4);
            CHECK(ev.eval(q, t).value_equal(ks(q, t, c.matrix())));
        }
    }
}

TEST_CASE("singular modulus is rejected") {
    HalfIntegralSym z = HalfIntegralSym::zero(2);
    CHECK_THROWS_WITH_AS(ks(z, z, IntMatrix::from_rows({{2, 2}, {1, 1}})), "singular modulus", InputError);
}
