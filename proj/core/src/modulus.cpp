#include "sks/modulus.hpp"

#include <algorithm>
#include <numeric>

namespace sks {

namespace {

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t m) {
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        int e = 0;
        while (m % p == 0) { m /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

} // namespace

DiagonalModulus DiagonalModulus::from_divisors(std::vector<std::int64_t> divisors) {
    DiagonalModulus c;
    c.n = static_cast<int>(divisors.size());
    for (int i = 0; i < c.n; ++i) {
        if (divisors[static_cast<size_t>(i)] <= 0) throw InputError("divisors must be positive");
        if (i + 1 < c.n && divisors[static_cast<size_t>(i) + 1] % divisors[static_cast<size_t>(i)] != 0)
            throw InputError("divisors must form a divisibility chain");
    }
    c.divisors = std::move(divisors);
    if (c.n) {
        for (auto [p, e] : factorize(c.divisors.back())) {
            (void)e;
            std::vector<int> sig(static_cast<size_t>(c.n), 0);
            for (int i = 0; i < c.n; ++i) {
                std::int64_t v = c.divisors[static_cast<size_t>(i)];
                while (v % p == 0) { v /= p; ++sig[static_cast<size_t>(i)]; }
            }
            c.prime_local.emplace(p, std::move(sig));
        }
    }
    return c;
}

DiagonalModulus DiagonalModulus::scalar(std::int64_t c, int n) {
    return from_divisors(std::vector<std::int64_t>(static_cast<size_t>(n), c));
}

DiagonalModulus DiagonalModulus::prime_power(std::int64_t p, std::vector<int> sigma) {
    std::vector<std::int64_t> d;
    d.reserve(sigma.size());
    for (int e : sigma) d.push_back(ipow(p, e));
    return from_divisors(std::move(d));
}

std::int64_t DiagonalModulus::prime() const {
    if (prime_local.size() != 1) throw InputError("prime-power modulus required");
    return prime_local.begin()->first;
}

std::vector<int> DiagonalModulus::sigma() const {
    if (prime_local.empty()) return std::vector<int>(static_cast<size_t>(n), 0);
    if (prime_local.size() != 1) throw InputError("prime-power modulus required");
    return prime_local.begin()->second;
}

IntMatrix DiagonalModulus::matrix() const {
    std::vector<mpz_class> d(divisors.begin(), divisors.end());
    return IntMatrix::diagonal(d);
}

bool DiagonalModulus::primes_cover_all_rows() const {
    for (const auto& [p, sig] : prime_local)
        if (sig.front() == 0) return false;
    return true;
}

mpz_class DiagonalModulus::box_size() const {
    mpz_class total = 1;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n - i; ++k) total *= divisors[static_cast<size_t>(i)];
    return total;
}

std::vector<PrimeSplitStep> prime_split(const DiagonalModulus& c) {
    std::vector<PrimeSplitStep> steps;
    DiagonalModulus rest = c;
    while (rest.prime_local.size() > 1) {
        std::int64_t p = rest.prime_local.begin()->first; // smallest prime of c_n
        const auto& sig = rest.prime_local.begin()->second;
        std::vector<std::int64_t> fd(static_cast<size_t>(rest.n), 1), gd(static_cast<size_t>(rest.n), 1);
        for (int i = 0; i < rest.n; ++i) {
            fd[static_cast<size_t>(i)] = ipow(p, sig[static_cast<size_t>(i)]);
            gd[static_cast<size_t>(i)] = rest.divisors[static_cast<size_t>(i)] / fd[static_cast<size_t>(i)];
        }
        PrimeSplitStep step;
        step.p = p;
        step.local = DiagonalModulus::from_divisors(fd);
        step.twist.f = step.local;
        step.twist.g = DiagonalModulus::from_divisors(gd);
        std::int64_t fnn = fd.back(), gnn = gd.back();
        // extended Euclid, then shift r into (-gnn/2, gnn/2] for determinism
        std::int64_t r0 = 0, s0 = 0;
        {
            std::int64_t a = fnn, b = gnn, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
            while (b) {
                std::int64_t q = a / b;
                std::int64_t t = a - q * b; a = b; b = t;
                t = x0 - q * x1; x0 = x1; x1 = t;
                t = y0 - q * y1; y0 = y1; y1 = t;
            }
            r0 = x0; s0 = y0; // fnn r0 + gnn s0 = 1
        }
        while (2 * r0 > gnn) { r0 -= gnn; s0 += fnn; }
        while (2 * r0 <= -gnn) { r0 += gnn; s0 -= fnn; }
        step.twist.r = r0;
        step.twist.s = s0;
        IntMatrix fbar(rest.n, rest.n), gbar(rest.n, rest.n);
        for (int i = 0; i < rest.n; ++i) {
            fbar.at(i, i) = r0 * (fnn / fd[static_cast<size_t>(i)]);
            gbar.at(i, i) = s0 * (gnn / gd[static_cast<size_t>(i)]);
        }
        step.twist.fbar = fbar;
        step.twist.gbar = gbar;
        steps.push_back(std::move(step));
        rest = steps.back().twist.g;
    }
    // final leaf: prime power (or all-ones) with an empty twist
    PrimeSplitStep last;
    last.p = rest.prime_local.empty() ? 1 : rest.prime_local.begin()->first;
    last.local = rest;
    steps.push_back(std::move(last));
    return steps;
}

NormalizedInstance normalize(const IntMatrix& c, const HalfIntegralSym& q, const HalfIntegralSym& t) {
    if (!c.is_square() || c.rows() != q.n || q.n != t.n) throw InputError("shape mismatch");
    if (c.rows() > 0 && det_exact(c) == 0) throw InputError("singular modulus");
    if (c.rows() == 0) return {DiagonalModulus{}, q, t, IntMatrix::identity(0), IntMatrix::identity(0)};
    SmithForm f = snf(c);
    // snf gives U0 C V0 = S; report the transform as U = U0^t so that
    // U^t C V = S, Q[U] = U0 Q U0^t.
    NormalizedInstance out;
    std::vector<std::int64_t> d;
    d.reserve(f.divisors.size());
    for (const auto& x : f.divisors) {
        if (!x.fits_slong_p()) throw BudgetExceeded("instance too large");
        d.push_back(x.get_si());
    }
    out.c = DiagonalModulus::from_divisors(std::move(d));
    out.u = f.u.transpose();
    out.v = f.v;
    out.q = HalfIntegralSym(f.u * q.doubled * f.u.transpose());
    out.t = t.transformed(f.v);
    return out;
}

StrippedInstance strip_unit_block(const DiagonalModulus& c, const HalfIntegralSym& q, const HalfIntegralSym& t) {
    if (q.n != c.n || t.n != c.n) throw InputError("shape mismatch");
    int s = 0;
    while (s < c.n && c.divisors[static_cast<size_t>(s)] == 1) ++s;
    StrippedInstance out;
    out.removed = s;
    out.c = DiagonalModulus::from_divisors(
        std::vector<std::int64_t>(c.divisors.begin() + s, c.divisors.end()));
    out.q = q.bottom_right(s);
    out.t = t.bottom_right(s);
    return out;
}

bool bracket_contains(const IntMatrix& a, const DiagonalModulus& c) {
    if (!a.is_square() || a.rows() != c.n) throw InputError("shape mismatch");
    std::int64_t p = c.is_prime_power() && !c.prime_local.empty() ? c.prime() : 0;
    if (p == 0 && !c.prime_local.empty()) throw InputError("prime-power modulus required");
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            std::int64_t m = std::min(c.divisors[static_cast<size_t>(i)], c.divisors[static_cast<size_t>(j)]);
            if (a.at(i, j) % m != 0) return false;
        }
    return true;
}

mpz_class gcd_with_scalar(const mpz_class& c, const std::vector<const IntMatrix*>& mats) {
    mpz_class g = c;
    for (const IntMatrix* m : mats)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), gcd_entries(*m).get_mpz_t());
    return g;
}

std::int64_t phase_index(const IntMatrix& a, const DiagonalModulus& c, const IntMatrix& r, std::int64_t n_denom) {
    if (a.rows() != c.n || r.rows() != c.n) throw InputError("shape mismatch");
    if (c.n == 0) return 0;
    if (n_denom % (2 * c.cn()) != 0) throw InputError("insufficient denominator");
    mpz_class k = 0;
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j)
            k += a.at(i, j) * r.at(j, i) * (n_denom / (2 * c.divisors[static_cast<size_t>(j)]));
    return mod_floor(k, n_denom).get_si();
}

} // namespace sks
