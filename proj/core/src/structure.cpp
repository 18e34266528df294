#include "sks/structure.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace sks {

namespace {

SmallMat small_doubled(const HalfIntegralSym& q) { return SmallMat::from_int_matrix(q.doubled); }

/// Odometer over an arbitrary rectangular matrix box with one modulus per
/// row (all entries of row i run mod row_mod[i]).
template <class F>
void scan_matrix_box(int rows, int cols, const std::vector<i64>& row_mod, i64 budget, F&& fn) {
    i64 total = 1;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            total *= row_mod[static_cast<size_t>(i)];
            check_budget(total, budget);
        }
    SmallMat x(rows, cols);
    for (i64 idx = 0; idx < total; ++idx) {
        fn(const_cast<const SmallMat&>(x));
        for (int i = rows - 1; i >= 0; --i) {
            bool carry = true;
            for (int j = cols - 1; j >= 0 && carry; --j) {
                if (++x.at(i, j) < row_mod[static_cast<size_t>(i)]) carry = false;
                else x.at(i, j) = 0;
            }
            if (!carry) break;
        }
    }
}

i64 trace_small(const SmallMat& m) {
    i64 t = 0;
    for (int i = 0; i < m.rows && i < m.cols; ++i) t += m.at(i, i);
    return t;
}

SmallMat row_scaled(const std::vector<i64>& d, const SmallMat& m) {
    SmallMat r = m;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) *= d[static_cast<size_t>(i)];
    return r;
}

/// Dbar = dinv * adj(D) reduced mod `red`; phases are invariant under the
/// mod-2p^sigma reduction.
SmallMat dbar_of(const SmallMat& d, i64 modulus, i64 red) {
    i64 det = sdet(d);
    i64 dinv = invmod64(det, modulus);
    SmallMat adj = sadjugate(d);
    SmallMat out(d.rows, d.cols);
    for (int i = 0; i < d.rows; ++i)
        for (int j = 0; j < d.cols; ++j) out.at(i, j) = mod64(dinv * mod64(adj.at(i, j), red), red);
    return out;
}

bool bracket_zero(const SmallMat& m, const std::vector<i64>& lattice) {
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (mod64(m.at(i, j), std::min(lattice[static_cast<size_t>(i)], lattice[static_cast<size_t>(j)])) != 0)
                return false;
    return true;
}

} // namespace

PhaseSum gauss_G(const IntMatrix& a2, const HalfIntegralSym& b1, const IntMatrix& b2, i64 p, i64 budget) {
    const int ns = a2.rows(); // n - s
    const int s = a2.cols();
    if (b1.n != ns) throw InputError("shape mismatch");
    if (!b2.is_square() || b2.rows() != s || !b2.is_symmetric()) throw InputError("B2 must be symmetric of size s");
    if (mod_floor(det_exact(b2), p) == 0) throw InputError("p divides det(B2)");
    SmallMat a2s = SmallMat::from_int_matrix(a2);
    SmallMat rb1 = small_doubled(b1);
    SmallMat b2s = SmallMat::from_int_matrix(b2);
    a2s = smod(a2s, 2 * p);
    rb1 = smod(rb1, 2 * p);
    b2s = smod(b2s, 2 * p);
    const i64 nden = 2 * p;
    PhaseSum out(nden);
    std::vector<i64> mods(static_cast<size_t>(s), p);
    scan_matrix_box(s, ns, mods, budget, [&](const SmallMat& x) {
        i64 k = 2 * trace_small(smul(x, a2s));
        k += trace_small(smul(smul(smul(x, rb1), stranspose(x)), b2s));
        out.add_term(k);
    });
    return out;
}

PhaseSum gauss_H(const HalfIntegralSym& a, const HalfIntegralSym& b, const IntMatrix& w,
                 const DiagonalModulus& c, i64 budget) {
    const int n = c.n;
    if (a.n != n || b.n != n || w.rows() != n || w.cols() != n) throw InputError("shape mismatch");
    auto sig = c.sigma();
    for (int e : sig)
        if (e < 2) throw InputError("out of identity domain");
    i64 p = c.prime();
    const IntMatrix cm = c.matrix();
    if (!(cm * w.transpose()).is_symmetric() || mod_floor(det_exact(w), p) == 0)
        throw InputError("(C,W) must be a coprime symmetric pair");
    const i64 psn = c.cn();
    const i64 nden = 2 * psn;
    SmallMat ra = smod(small_doubled(a), nden);
    SmallMat rb = smod(small_doubled(b), nden);
    SmallMat ws = SmallMat::from_int_matrix(w);
    std::vector<i64> ct2(static_cast<size_t>(n)), weights(static_cast<size_t>(n));
    DiagonalModulus ch = half_modulus(c);
    for (int i = 0; i < n; ++i) {
        i64 mu = ch.divisors[static_cast<size_t>(i)];
        ct2[static_cast<size_t>(i)] = mu * mu;
        weights[static_cast<size_t>(i)] = nden / (2 * c.divisors[static_cast<size_t>(i)]);
    }
    SymPairBox box = x21_box(c);
    i64 total = box.total(budget);
    PhaseSum out(nden);
    box.scan(0, total, [&](const SmallMat& u) {
        // tr(C^{-1} C~^2 U A) with A = ra/2
        __int128 k = 0;
        SmallMat cu = row_scaled(ct2, u);
        SmallMat m1 = smul(cu, ra);
        for (int i = 0; i < n; ++i) k += static_cast<__int128>(m1.at(i, i)) * weights[static_cast<size_t>(i)];
        // tr(C^{-1} (C~ U W)^2 B W^t) with B = rb/2
        SmallMat ctuw = smul(row_scaled(std::vector<i64>(ch.divisors.begin(), ch.divisors.end()), u), ws);
        SmallMat sq = smul(ctuw, ctuw);
        SmallMat m2 = smul(smul(sq, rb), stranspose(ws));
        for (int i = 0; i < n; ++i) k += static_cast<__int128>(m2.at(i, i)) * weights[static_cast<size_t>(i)];
        out.add_term(static_cast<i64>(k % nden));
    });
    return out;
}

PhaseSum char_sum_full(const DiagonalModulus& c, const IntMatrix& a, i64 budget) {
    const int m = c.n;
    const int n = a.rows();
    if (a.cols() != m) throw InputError("A must have as many columns as C");
    const i64 nden = 2 * c.cn();
    SmallMat as = smod(SmallMat::from_int_matrix(a), nden);
    std::vector<i64> wrow(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) wrow[static_cast<size_t>(i)] = nden / c.divisors[static_cast<size_t>(i)];
    std::vector<i64> mods(c.divisors.begin(), c.divisors.end());
    PhaseSum out(nden);
    scan_matrix_box(m, n, mods, budget, [&](const SmallMat& x) {
        i64 k = 0;
        for (int i = 0; i < m; ++i) {
            i64 acc = 0;
            for (int j = 0; j < n; ++j) acc += x.at(i, j) * as.at(j, i);
            k += mod64(acc, nden) * wrow[static_cast<size_t>(i)];
        }
        out.add_term(k);
    });
    // delta identity: nonzero iff every column j of A vanishes mod c_j
    bool delta = true;
    for (int i = 0; i < n && delta; ++i)
        for (int j = 0; j < m && delta; ++j)
            if (mod_floor(a.at(i, j), c.divisors[static_cast<size_t>(j)]) != 0) delta = false;
    mpz_class expect = 1;
    if (delta)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) expect *= c.divisors[static_cast<size_t>(i)];
    PhaseSum expected = delta ? PhaseSum::constant(expect.get_si(), nden) : PhaseSum(nden);
    if (!out.value_equal(expected)) throw std::logic_error("character sum delta identity failed");
    return out;
}

PhaseSum char_sum_sympair(const DiagonalModulus& c, const IntMatrix& a, i64 p, i64 budget) {
    const int n = c.n;
    if (a.rows() != n || a.cols() != n) throw InputError("shape mismatch");
    if (!c.is_prime_power() || (!c.prime_local.empty() && c.prime() != p))
        throw InputError("prime-power modulus required");
    const i64 nden = 2 * c.cn();
    SmallMat as = smod(SmallMat::from_int_matrix(a), nden);
    std::vector<i64> wrow(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) wrow[static_cast<size_t>(i)] = nden / c.divisors[static_cast<size_t>(i)];
    SymPairBox box{n, std::vector<i64>(c.divisors.begin(), c.divisors.end()),
                   std::vector<i64>(c.divisors.begin(), c.divisors.end()), false};
    i64 total = box.total(budget);
    PhaseSum out(nden);
    box.scan(0, total, [&](const SmallMat& d) {
        i64 k = 0;
        for (int i = 0; i < n; ++i) {
            i64 acc = 0;
            for (int j = 0; j < n; ++j) acc += d.at(i, j) * as.at(j, i);
            k += mod64(acc, nden) * wrow[static_cast<size_t>(i)];
        }
        out.add_term(k);
    });
    // delta: A + A^t in [C]; for p = 2 additionally a_ii = 0 mod 2^{sigma_i}
    bool delta = true;
    for (int i = 0; i < n && delta; ++i)
        for (int j = 0; j < n && delta; ++j) {
            mpz_class s = a.at(i, j) + a.at(j, i);
            i64 m = std::min(c.divisors[static_cast<size_t>(i)], c.divisors[static_cast<size_t>(j)]);
            if (mod_floor(s, m) != 0) delta = false;
        }
    if (p == 2)
        for (int i = 0; i < n && delta; ++i)
            if (mod_floor(a.at(i, i), c.divisors[static_cast<size_t>(i)]) != 0) delta = false;
    mpz_class expect = 1;
    if (delta)
        for (int i = 0; i < n; ++i)
            for (int k2 = 0; k2 < n - i; ++k2) expect *= c.divisors[static_cast<size_t>(i)];
    PhaseSum expected = delta ? PhaseSum::constant(expect.get_si(), nden) : PhaseSum(nden);
    if (!out.value_equal(expected)) throw std::logic_error("symmetric character sum delta identity failed");
    return out;
}

namespace {

std::string shape_str(const IntMatrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

i64 val_cap(i64 x, i64 p, int cap) {
    // p-adic valuation of x capped at `cap`; returns cap for x = 0
    if (x == 0) return cap;
    int v = 0;
    while (v < cap && x % p == 0) { x /= p; ++v; }
    return v;
}

} // namespace

EquationCount count_solutions(EquationKind kind, const CountInstance& inst, i64 budget) {
    EquationCount out;
    out.kind = kind;
    const i64 p = inst.p;
    const int k = inst.k;
    const i64 pk = ipow64(p, k);
    std::ostringstream id;

    auto cong = [&](const SmallMat& m) {
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j)
                if (mod64(m.at(i, j), pk) != 0) return false;
        return true;
    };

    switch (kind) {
        case EquationKind::UQ_eq_T: {
            SmallMat t = SmallMat::from_int_matrix(inst.t), q = SmallMat::from_int_matrix(inst.q);
            int m = t.rows, n = q.rows;
            if (q.cols != t.cols || t.cols != n) throw InputError("shape mismatch");
            std::vector<i64> mods(static_cast<size_t>(m), pk);
            scan_matrix_box(m, n, mods, budget, [&](const SmallMat& u) {
                if (cong(ssub(smul(u, q), t))) ++out.count;
            });
            out.bound = std::pow(static_cast<double>(p), static_cast<double>(k) * m * (n - 1));
            id << "UQ=T p=" << p << " k=" << k << " " << shape_str(inst.t);
            break;
        }
        case EquationKind::SymUQ_eq_T: {
            SmallMat t = SmallMat::from_int_matrix(inst.t), q = SmallMat::from_int_matrix(inst.q);
            int n = q.rows, m = q.cols;
            if (t.rows != n || t.cols != m) throw InputError("shape mismatch");
            SymPairBox box{n, std::vector<i64>(static_cast<size_t>(n), pk),
                           std::vector<i64>(static_cast<size_t>(n), 1), false};
            i64 total = box.total(budget);
            box.scan(0, total, [&](const SmallMat& u) {
                if (cong(ssub(smul(u, q), t))) ++out.count;
            });
            out.bound = std::pow(static_cast<double>(p), static_cast<double>(k) * n * (n - 1) / 2.0);
            id << "symUQ=T p=" << p << " k=" << k << " " << shape_str(inst.q);
            break;
        }
        case EquationKind::UDUt_eq_T: {
            SmallMat t = SmallMat::from_int_matrix(inst.t), d = SmallMat::from_int_matrix(inst.d);
            int n = t.rows, m = d.rows;
            std::vector<i64> mods(static_cast<size_t>(n), pk);
            scan_matrix_box(n, m, mods, budget, [&](const SmallMat& u) {
                if (cong(ssub(smul(smul(u, d), stranspose(u)), t))) ++out.count;
            });
            out.bound = std::pow(static_cast<double>(p), static_cast<double>(k) * (m - 1) * n);
            id << "UDU^t=T p=" << p << " k=" << k << " m=" << m << " n=" << n;
            break;
        }
        case EquationKind::SymUDU_eq_T: {
            SmallMat t = SmallMat::from_int_matrix(inst.t), d = SmallMat::from_int_matrix(inst.d);
            int n = t.rows;
            SymPairBox box{n, std::vector<i64>(static_cast<size_t>(n), pk),
                           std::vector<i64>(static_cast<size_t>(n), 1), false};
            i64 total = box.total(budget);
            box.scan(0, total, [&](const SmallMat& u) {
                if (cong(ssub(smul(smul(u, d), u), t))) ++out.count;
            });
            out.bound = std::pow(static_cast<double>(p), static_cast<double>(k) * n * (n - 1) / 2.0);
            id << "symUDU=T p=" << p << " k=" << k << " n=" << n;
            break;
        }
        case EquationKind::QUt_plus_UQt_eq_T: {
            SmallMat t = SmallMat::from_int_matrix(inst.t), q = SmallMat::from_int_matrix(inst.q);
            int n = q.rows, m = q.cols;
            if (t.rows != n || t.cols != n) throw InputError("shape mismatch");
            std::vector<i64> mods(static_cast<size_t>(n), pk);
            scan_matrix_box(n, m, mods, budget, [&](const SmallMat& u) {
                if (cong(ssub(sadd(smul(q, stranspose(u)), smul(u, stranspose(q))), t))) ++out.count;
            });
            // the proof fixes one column of U: p^{k n (m-1)}; the statement
            // prints p^{k m (n-1)}, false already for n=1, m=2
            out.bound = std::pow(static_cast<double>(p), static_cast<double>(k) * n * (m - 1));
            out.bound_alt = std::pow(static_cast<double>(p), static_cast<double>(k) * m * (n - 1));
            id << "QU^t+UQ^t=T p=" << p << " k=" << k << " n=" << n << " m=" << m;
            break;
        }
        case EquationKind::QuadScalarMod2: {
            if (p != 2) throw InputError("quadratic congruence is mod 2^k");
            i64 g = std::gcd(std::gcd(inst.a, 2 * inst.b), inst.c);
            if (val_cap(g, 2, k) >= k) throw InputError("out of counting domain");
            check_budget(pk, budget);
            for (i64 x = 0; x < pk; ++x)
                if (mod64(inst.a * x * x + 2 * inst.b * x + inst.c, pk) == 0) ++out.count;
            i64 disc = inst.b * inst.b - inst.a * inst.c;
            i64 v = val_cap(disc, 2, 2 * k);
            out.bound = std::pow(2.0, static_cast<double>(v) / 2.0 + 2.0);
            id << "ax^2+2bx+c=0 (a,b,c)=(" << inst.a << "," << inst.b << "," << inst.c << ") k=" << k;
            break;
        }
        case EquationKind::T_eq_UQUt_bracket:
            throw InputError("use count_TUQU for the bracket equation");
    }
    out.instance = id.str();
    return out;
}

namespace {

/// gcd factor (p^e, doubled block) for the Q_i' bounds, as a double.
double gcd_factor(i64 p, int e, const IntMatrix& block) {
    mpz_class pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    mpz_class g = gcd_with_scalar(pe, {&block});
    return g.get_d();
}

} // namespace

EquationCount count_TUQU(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c,
                         i64 budget) {
    const int n = c.n;
    if (q.n != n || t.n != n) throw InputError("shape mismatch");
    auto sig = c.sigma();
    for (int e : sig)
        if (e < 2) throw InputError("out of identity domain");
    i64 p = c.prime();
    DiagonalModulus ch = half_modulus(c);
    const i64 psn = c.cn();
    const i64 red = 2 * psn;
    SmallMat rq = smod(SmallMat::from_int_matrix(q.doubled), red);
    SmallMat rt = smod(SmallMat::from_int_matrix(t.doubled), red);
    SymPairBox box = x1_box(c);
    i64 total = box.total(budget);
    EquationCount out;
    out.kind = EquationKind::T_eq_UQUt_bracket;
    std::vector<i64> lat(ch.divisors.begin(), ch.divisors.end());
    box.scan(0, total, [&](const SmallMat& u) {
        if (mod64(sdet(u), p) == 0) return;
        SmallMat ub = dbar_of(u, psn, red);
        SmallMat mx = ssub(rt, smul(smul(ub, rq), stranspose(ub)));
        if (bracket_zero(mx, lat)) ++out.count;
    });
    double bound_proof = 1, bound_text = 1;
    auto mu = ch.sigma();
    for (int i = 0; i < n; ++i) {
        int s = 0;
        while (sig[static_cast<size_t>(s)] != sig[static_cast<size_t>(i)]) ++s;
        IntMatrix blk_proof = q.doubled.block(s, s, n - s, n - s);
        IntMatrix blk_text = q.doubled.block(n - (s + 1), n - (s + 1), s + 1, s + 1);
        double pw = std::pow(static_cast<double>(p), static_cast<double>((n - i - 1) * mu[static_cast<size_t>(i)]));
        bound_proof *= pw * gcd_factor(p, mu[static_cast<size_t>(i)], blk_proof);
        bound_text *= pw * gcd_factor(p, mu[static_cast<size_t>(i)], blk_text);
    }
    out.bound = bound_proof;
    out.bound_alt = bound_text;
    std::ostringstream id;
    id << "2T=2UQU^t mod [C~] p=" << p << " n=" << n;
    out.instance = id.str();
    return out;
}

std::pair<PhaseSum, PhaseSum> identity_taylor(const HalfIntegralSym& q, const HalfIntegralSym& t,
                                              const DiagonalModulus& c, i64 budget) {
    const int n = c.n;
    if (q.n != n || t.n != n) throw InputError("shape mismatch");
    if (!c.is_prime_power() || c.prime_local.empty()) throw InputError("out of identity domain");
    i64 p = c.prime();
    auto sig = c.sigma();
    if (p == 2 || sig.front() < 2) throw InputError("out of identity domain");
    if (c.cn() > 100000) throw BudgetExceeded("instance too large");

    PhaseSum lhs = ks_direct(q, t, c, 1, budget);

    DiagonalModulus ch = half_modulus(c);
    auto mu = ch.sigma();
    const i64 psn = c.cn();
    const i64 nden = 2 * psn;
    SmallMat rq = smod(SmallMat::from_int_matrix(q.doubled), nden);
    SmallMat rt = smod(SmallMat::from_int_matrix(t.doubled), nden);
    std::vector<i64> w(static_cast<size_t>(n)), lat(ch.divisors.begin(), ch.divisors.end());
    for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = nden / (2 * c.divisors[static_cast<size_t>(i)]);
    i64 pref = 1;
    for (int i = 0; i < n; ++i) pref *= ipow64(p, (n - i) * mu[static_cast<size_t>(i)]);

    SymPairBox b1 = x1_box(c), b21 = x21_box(c);
    i64 t1 = b1.total(budget), t21 = b21.total(budget);
    std::vector<i64> ctd(ch.divisors.begin(), ch.divisors.end());
    PhaseSum rhs(nden);

    b1.scan(0, t1, [&](const SmallMat& d1) {
        if (mod64(sdet(d1), p) == 0) return;
        SmallMat d1b = dbar_of(d1, psn, nden);
        SmallMat mx = ssub(rt, smul(smul(d1b, rq), stranspose(d1b)));
        if (!bracket_zero(mx, lat)) return;
        i64 ph1 = 0;
        for (int i = 0; i < n; ++i) {
            i64 acc = 0;
            for (int j = 0; j < n; ++j) acc += d1b.at(i, j) * rq.at(j, i) + d1.at(i, j) * rt.at(j, i);
            ph1 += mod64(acc, nden) * w[static_cast<size_t>(i)];
        }
        ph1 = mod64(ph1, nden);
        b21.scan(0, t21, [&](const SmallMat& d21) {
            __int128 k = ph1;
            // tr(C^{-1} C~ D21 (T - D1b Q D1b^t)), half matrices via mx/2
            SmallMat m1 = smul(row_scaled(ctd, d21), mx);
            for (int i = 0; i < n; ++i) k += static_cast<__int128>(m1.at(i, i)) * w[static_cast<size_t>(i)];
            // tr(D1b^t C^{-1} (C~ D21 D1b)^2 Q)
            SmallMat inner = smul(row_scaled(ctd, d21), d1b);
            SmallMat sq = smul(inner, inner);
            SmallMat m2 = smul(sq, rq);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    k += static_cast<__int128>(d1b.at(i, j)) * m2.at(i, j) * w[static_cast<size_t>(i)];
            rhs.add_term(static_cast<i64>(k % nden), pref);
        });
    });
    return {lhs, rhs};
}

std::pair<PhaseSum, PhaseSum> identity_blockdecomp(const HalfIntegralSym& q, const HalfIntegralSym& t,
                                                   const DiagonalModulus& c, i64 budget) {
    const int n = c.n;
    if (q.n != n || t.n != n) throw InputError("shape mismatch");
    if (!c.is_prime_power() || c.prime_local.empty()) throw InputError("out of identity domain");
    i64 p = c.prime();
    auto sig = c.sigma();
    if (p == 2 || sig.front() < 1) throw InputError("out of identity domain");
    int s = 0;
    while (s < n && sig[static_cast<size_t>(s)] == 1) ++s;
    if (s == 0) return identity_taylor(q, t, c, budget);
    if (s == n || sig[static_cast<size_t>(s)] < 2) throw InputError("out of identity domain");
    if (c.cn() > 100000) throw BudgetExceeded("instance too large");

    PhaseSum lhs = ks_direct(q, t, c, 1, budget);

    const int m = n - s;
    DiagonalModulus c1 = DiagonalModulus::from_divisors(
        std::vector<i64>(c.divisors.begin() + s, c.divisors.end()));
    DiagonalModulus c1h = half_modulus(c1);
    auto mu1 = c1h.sigma();
    const i64 psn = c.cn();
    const i64 nden = 2 * psn;

    SmallMat rq = smod(SmallMat::from_int_matrix(q.doubled), nden);
    SmallMat rt = smod(SmallMat::from_int_matrix(t.doubled), nden);
    auto blk = [&](const SmallMat& mat, int i0, int j0, int r2, int c2) {
        SmallMat b(r2, c2);
        for (int i = 0; i < r2; ++i)
            for (int j = 0; j < c2; ++j) b.at(i, j) = mat.at(i0 + i, j0 + j);
        return b;
    };
    SmallMat rq1 = blk(rq, 0, 0, s, s), rq2 = blk(rq, 0, s, s, m), rq3 = blk(rq, s, s, m, m);
    SmallMat rt1 = blk(rt, 0, 0, s, s), rt2 = blk(rt, 0, s, s, m), rt3 = blk(rt, s, s, m, m);

    std::vector<i64> w1(static_cast<size_t>(m)), lat1(c1h.divisors.begin(), c1h.divisors.end());
    for (int i = 0; i < m; ++i) w1[static_cast<size_t>(i)] = nden / (2 * c1.divisors[static_cast<size_t>(i)]);
    std::vector<i64> ctd1(c1h.divisors.begin(), c1h.divisors.end());
    const i64 wp = nden / (2 * p);
    i64 pref = 1;
    for (int i = 0; i < m; ++i) pref *= ipow64(p, (m - i) * mu1[static_cast<size_t>(i)]);

    DiagonalModulus cps = DiagonalModulus::scalar(p, s);
    SymPairBox bw = xtilde_box(cps), b1 = x1_box(c1), b21 = x21_box(c1);
    i64 tw = bw.total(budget), t1 = b1.total(budget), t21 = b21.total(budget);
    std::vector<i64> xmods(static_cast<size_t>(s), p);
    PhaseSum rhs(nden);

    bw.scan(0, tw, [&](const SmallMat& wmt) {
        if (mod64(sdet(wmt), p) == 0) return;
        SmallMat wb = dbar_of(wmt, p, 2 * p);
        i64 phw = 0;
        for (int i = 0; i < s; ++i) {
            i64 acc = 0;
            for (int j = 0; j < s; ++j) acc += wb.at(i, j) * rq1.at(j, i) + wmt.at(i, j) * rt1.at(j, i);
            phw += mod64(acc, nden) * wp;
        }
        phw = mod64(phw, nden);
        b1.scan(0, t1, [&](const SmallMat& u1) {
            if (mod64(sdet(u1), p) == 0) return;
            SmallMat u1b = dbar_of(u1, psn, nden);
            SmallMat mx = ssub(rt3, smul(smul(u1b, rq3), stranspose(u1b)));
            if (!bracket_zero(mx, lat1)) return;
            i64 ph1 = phw;
            for (int i = 0; i < m; ++i) {
                i64 acc = 0;
                for (int j = 0; j < m; ++j) acc += u1b.at(i, j) * rq3.at(j, i) + u1.at(i, j) * rt3.at(j, i);
                ph1 = mod64(ph1 + mod64(acc, nden) * w1[static_cast<size_t>(i)], nden);
            }
            // X-sum via M_A = 2T2^t - U1b (2Q2)^t Wb, all integral (m x s)
            SmallMat ma = ssub(stranspose(rt2), smul(smul(u1b, stranspose(rq2)), wb));
            ma = smod(ma, nden);
            PhaseSum xsum(nden);
            scan_matrix_box(s, m, xmods, budget, [&](const SmallMat& x) {
                __int128 k = 0;
                SmallMat xa = smul(x, ma);
                for (int i = 0; i < s; ++i) k += static_cast<__int128>(xa.at(i, i)) * (nden / p);
                SmallMat xq = smul(smul(smul(x, rt3), stranspose(x)), wb);
                for (int i = 0; i < s; ++i) k += static_cast<__int128>(xq.at(i, i)) * wp;
                xsum.add_term(static_cast<i64>(k % nden));
            });
            // U21-sum as in the stationary-phase identity, at C1
            PhaseSum usum(nden);
            b21.scan(0, t21, [&](const SmallMat& d21) {
                __int128 k = 0;
                SmallMat m1 = smul(row_scaled(ctd1, d21), mx);
                for (int i = 0; i < m; ++i) k += static_cast<__int128>(m1.at(i, i)) * w1[static_cast<size_t>(i)];
                SmallMat inner = smul(row_scaled(ctd1, d21), u1b);
                SmallMat sq = smul(inner, inner);
                SmallMat m2 = smul(sq, rq3);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        k += static_cast<__int128>(u1b.at(i, j)) * m2.at(i, j) * w1[static_cast<size_t>(i)];
                usum.add_term(static_cast<i64>(k % nden));
            });
            // accumulate pref * e(ph1) * xsum * usum
            PhaseSum base(nden);
            base.add_term(ph1, pref);
            PhaseSum term = phase_mul(phase_mul(base, xsum), usum);
            for (i64 idx = 0; idx < nden; ++idx)
                if (term.counts()[static_cast<size_t>(idx)] != 0)
                    rhs.add_term(idx, term.counts()[static_cast<size_t>(idx)]);
        });
    });
    return {lhs, rhs};
}

std::pair<PhaseSum, PhaseSum> identity_common_divisor(const HalfIntegralSym& q, const HalfIntegralSym& t,
                                                      const DiagonalModulus& c, i64 budget) {
    const int n = c.n;
    if (q.n != n || t.n != n) throw InputError("shape mismatch");
    if (!c.is_prime_power() || c.prime_local.empty()) throw InputError("out of identity domain");
    i64 p = c.prime();
    auto sig = c.sigma();
    if (p == 2 || sig.front() < 1) throw InputError("out of identity domain");
    int s = 0;
    while (s < n && sig[static_cast<size_t>(s)] == 1) ++s;
    for (int i = s; i < n; ++i)
        if (sig[static_cast<size_t>(i)] < 2) throw InputError("out of identity domain");
    if (mod_floor(gcd_entries(q.doubled), p) != 0 || mod_floor(gcd_entries(t.doubled), p) != 0)
        throw InputError("divisibility precondition fails");

    PhaseSum lhs = ks_direct(q, t, c, 1, budget);

    i64 xs = s > 0 ? count_xtilde(DiagonalModulus::scalar(p, s), budget) : 1;
    i64 factor = xs * ipow64(p, (n - s) * (n + s + 1) / 2);
    HalfIntegralSym q3 = q.bottom_right(s).divided_by(p);
    HalfIntegralSym t3 = t.bottom_right(s).divided_by(p);
    std::vector<i64> c3d;
    for (int i = s; i < n; ++i) c3d.push_back(c.divisors[static_cast<size_t>(i)] / p);
    PhaseSum inner = ks_direct(q3, t3, DiagonalModulus::from_divisors(c3d), 1, budget);
    PhaseSum rhs(inner.denom());
    for (i64 idx = 0; idx < inner.denom(); ++idx)
        if (inner.counts()[static_cast<size_t>(idx)] != 0)
            rhs.add_term(idx, inner.counts()[static_cast<size_t>(idx)] * factor);
    return {lhs, rhs};
}

Diagonalization diagonalize_mod_pk(const IntMatrix& q, i64 p, int k) {
    if (!q.is_square() || !q.is_symmetric()) throw InputError("symmetric matrix required");
    if (p == 2) throw InputError("use the mod-2^k variant");
    const int n = q.rows();
    const i64 pk = ipow64(p, k);
    if (pk > 1000000) throw BudgetExceeded("instance too large");
    SmallMat a = smod(SmallMat::from_int_matrix(q), pk);
    SmallMat m = SmallMat::identity(n);

    auto row_sub = [&](SmallMat& mat, int dst, int src, i64 f) {
        for (int j = 0; j < mat.cols; ++j) mat.at(dst, j) = mod64(mat.at(dst, j) - f * mat.at(src, j), pk);
    };
    auto col_sub = [&](SmallMat& mat, int dst, int src, i64 f) {
        for (int i = 0; i < mat.rows; ++i) mat.at(i, dst) = mod64(mat.at(i, dst) - f * mat.at(i, src), pk);
    };
    auto sym_swap = [&](int i, int j) {
        if (i == j) return;
        for (int t2 = 0; t2 < n; ++t2) std::swap(a.at(i, t2), a.at(j, t2));
        for (int t2 = 0; t2 < n; ++t2) std::swap(a.at(t2, i), a.at(t2, j));
        for (int t2 = 0; t2 < n; ++t2) std::swap(m.at(i, t2), m.at(j, t2));
    };

    int pos = 0;
    while (pos < n) {
        int piv = -1;
        for (int i = pos; i < n && piv < 0; ++i)
            if (a.at(i, i) % p != 0) piv = i;
        if (piv < 0) {
            int oi = -1, oj = -1;
            for (int i = pos; i < n && oi < 0; ++i)
                for (int j = i + 1; j < n && oi < 0; ++j)
                    if (a.at(i, j) % p != 0) { oi = i; oj = j; }
            if (oi < 0) break;
            // 2 a_ij is a unit for odd p, so folding row j in creates a
            // unit diagonal entry
            row_sub(a, oi, oj, -1);
            col_sub(a, oi, oj, -1);
            row_sub(m, oi, oj, -1);
            piv = oi;
        }
        sym_swap(pos, piv);
        i64 inv = invmod64(a.at(pos, pos), pk);
        for (int r = pos + 1; r < n; ++r) {
            i64 f = mod64(a.at(r, pos) * inv, pk);
            if (f == 0) continue;
            row_sub(a, r, pos, f);
            col_sub(a, r, pos, f);
            row_sub(m, r, pos, f);
        }
        ++pos;
    }
    Diagonalization out;
    out.rank = pos;
    out.m = m.to_int_matrix();
    IntMatrix core(pos, pos), e(n - pos, n - pos);
    for (int i = 0; i < pos; ++i) core.at(i, i) = a.at(i, i);
    for (int i = 0; i < n - pos; ++i)
        for (int j = 0; j < n - pos; ++j) {
            i64 v = a.at(pos + i, pos + j);
            if (v % p != 0) throw std::logic_error("unit survived past the rank block");
            e.at(i, j) = v / p;
        }
    out.core = core;
    out.e = e;
    return out;
}

Diagonalization diagonalize_mod_2k(const HalfIntegralSym& q, int k) {
    const int n = q.n;
    const i64 pk = ipow64(2, k);
    if (pk > 1000000) throw BudgetExceeded("instance too large");
    SmallMat a = smod(SmallMat::from_int_matrix(q.doubled), pk);
    SmallMat m = SmallMat::identity(n);

    auto sym_swap = [&](int i, int j) {
        if (i == j) return;
        for (int t2 = 0; t2 < n; ++t2) std::swap(a.at(i, t2), a.at(j, t2));
        for (int t2 = 0; t2 < n; ++t2) std::swap(a.at(t2, i), a.at(t2, j));
        for (int t2 = 0; t2 < n; ++t2) std::swap(m.at(i, t2), m.at(j, t2));
    };

    int pos = 0;
    while (true) {
        int oi = -1, oj = -1;
        for (int i = pos; i < n && oi < 0; ++i)
            for (int j = i + 1; j < n && oi < 0; ++j)
                if (a.at(i, j) % 2 != 0) { oi = i; oj = j; }
        if (oi < 0) break;
        sym_swap(pos, oi);
        if (oj == pos) oj = oi; // the swap moved it
        sym_swap(pos + 1, oj);
        // clear below the 2x2 unit pivot block P
        i64 det = mod64(a.at(pos, pos) * a.at(pos + 1, pos + 1) - a.at(pos, pos + 1) * a.at(pos + 1, pos), pk);
        i64 dinv = invmod64(det, pk);
        i64 q00 = mod64(dinv * a.at(pos + 1, pos + 1), pk), q01 = mod64(-dinv * a.at(pos, pos + 1), pk);
        i64 q10 = mod64(-dinv * a.at(pos + 1, pos), pk), q11 = mod64(dinv * a.at(pos, pos), pk);
        for (int r = pos + 2; r < n; ++r) {
            i64 c1 = mod64(a.at(r, pos) * q00 + a.at(r, pos + 1) * q10, pk);
            i64 c2 = mod64(a.at(r, pos) * q01 + a.at(r, pos + 1) * q11, pk);
            if (c1 == 0 && c2 == 0) continue;
            for (int j = 0; j < n; ++j)
                a.at(r, j) = mod64(a.at(r, j) - c1 * a.at(pos, j) - c2 * a.at(pos + 1, j), pk);
            for (int i = 0; i < n; ++i)
                a.at(i, r) = mod64(a.at(i, r) - c1 * a.at(i, pos) - c2 * a.at(i, pos + 1), pk);
            for (int j = 0; j < n; ++j)
                m.at(r, j) = mod64(m.at(r, j) - c1 * m.at(pos, j) - c2 * m.at(pos + 1, j), pk);
        }
        pos += 2;
    }
    Diagonalization out;
    out.rank = pos;
    out.m = m.to_int_matrix();
    IntMatrix core(pos, pos), e(n - pos, n - pos);
    for (int i = 0; i < pos; ++i)
        for (int j = 0; j < pos; ++j) core.at(i, j) = a.at(i, j);
    for (int i = 0; i < n - pos; ++i)
        for (int j = 0; j < n - pos; ++j) {
            i64 v = a.at(pos + i, pos + j);
            if (v % 2 != 0) throw std::logic_error("odd entry survived past the rank block");
            e.at(i, j) = v / 2;
        }
    out.core = core;
    out.e = e;
    return out;
}

} // namespace sks
