#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "sks/int_matrix.hpp"
#include "sks/smith.hpp"

namespace sks {

/// A modulus C in Smith normal form: elementary divisors c_1 | ... | c_n
/// together with the per-prime exponent vectors.
struct DiagonalModulus {
    int n = 0;
    std::vector<std::int64_t> divisors;                    // c_1 | ... | c_n, positive
    std::map<std::int64_t, std::vector<int>> prime_local;  // p -> nondecreasing sigma vector

    static DiagonalModulus from_divisors(std::vector<std::int64_t> divisors);
    static DiagonalModulus scalar(std::int64_t c, int n); // c * I_n
    static DiagonalModulus prime_power(std::int64_t p, std::vector<int> sigma);

    std::int64_t cn() const { return n ? divisors.back() : 1; }
    std::int64_t c1() const { return n ? divisors.front() : 1; }
    /// Universal phase denominator 2 * c_n.
    std::int64_t phase_denom() const { return 2 * cn(); }

    bool is_prime_power() const { return prime_local.size() <= 1; }
    std::int64_t prime() const; // requires single prime
    std::vector<int> sigma() const; // exponent vector at prime(); requires prime power

    IntMatrix matrix() const;
    /// True when every prime of c_n divides c_1; then the coprime-pair test
    /// reduces to gcd(det D, c_n) = 1 and D-bar exists mod c_n.
    bool primes_cover_all_rows() const;
    /// Free-parameter count of the X-tilde box, prod c_i^{n-i+1}.
    mpz_class box_size() const;
};

struct TwistData {
    DiagonalModulus f, g;   // C = F * G entrywise, (f_nn, g_nn) = 1
    IntMatrix fbar, gbar;   // Fbar = r f_nn F^{-1}, Gbar = s g_nn G^{-1}
    std::int64_t r = 0, s = 0; // r f_nn + s g_nn = 1, |r| minimal
};

struct PrimeSplitStep {
    std::int64_t p = 0;
    DiagonalModulus local; // the p-part F of this split
    TwistData twist;
};

/// Recursive binary split: smallest prime of c_n first, leaves are
/// prime-power moduli.
std::vector<PrimeSplitStep> prime_split(const DiagonalModulus& c);

struct NormalizedInstance {
    DiagonalModulus c;
    HalfIntegralSym q, t;
    IntMatrix u, v; // U^t C V = S with parameters Q[U], T[V]
};

/// K(Q,T;C) = K(Q[U], T[V]; U^t C V) with U^t C V the Smith normal form.
NormalizedInstance normalize(const IntMatrix& c, const HalfIntegralSym& q, const HalfIntegralSym& t);

struct StrippedInstance {
    DiagonalModulus c;
    HalfIntegralSym q, t;
    int removed = 0; // leading indices with sigma_i = 0
};

/// Removes leading unit divisors: K_n(Q,T;C) = K_{n-s}(Q_3,T_3;C_3).
StrippedInstance strip_unit_block(const DiagonalModulus& c, const HalfIntegralSym& q, const HalfIntegralSym& t);

/// Membership in [C] = C Mat + Mat C for prime-power diagonal C:
/// a_ij = 0 mod p^{min(sigma_i, sigma_j)}.
bool bracket_contains(const IntMatrix& a, const DiagonalModulus& c);

/// gcd of c and all entries of all matrices; returns c for an empty list.
mpz_class gcd_with_scalar(const mpz_class& c, const std::vector<const IntMatrix*>& mats);

/// Exact root-of-unity index of tr(A C^{-1} (R/2)) over denominator N:
/// k = sum_ij A_ij R_ji N/(2 c_j) (mod N). Requires 2*c_n | N.
std::int64_t phase_index(const IntMatrix& a, const DiagonalModulus& c, const IntMatrix& r, std::int64_t n_denom);

} // namespace sks
