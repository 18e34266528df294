#pragma once

#include <string>
#include <utility>

#include "sks/kloosterman.hpp"

namespace sks {

/// Matrix Gauss sum G(A,B1,B2;p) = sum_{X mod p Mat_{s,n-s}}
/// e(2 p^{-1} X A + p^{-1} X B1 X^t B2); a2 is the doubled A of shape
/// (n-s) x s, b1 half-integral of size n-s, b2 integral symmetric of size
/// s with p not dividing det(b2).
PhaseSum gauss_G(const IntMatrix& a2, const HalfIntegralSym& b1, const IntMatrix& b2, i64 p,
                 i64 budget = kDefaultBudget);

/// Symmetric-pair Gauss sum H(A,B,W;C C~^{-2}) over U mod C C~^{-2} with
/// (C C~^{-1}, U) a symmetric pair:
/// e(C^{-1} C~^2 U A + C^{-1} C~ U W C~ U W B W^t).
/// Requires sigma_i >= 2 and (C,W) a coprime symmetric pair.
PhaseSum gauss_H(const HalfIntegralSym& a, const HalfIntegralSym& b, const IntMatrix& w,
                 const DiagonalModulus& c, i64 budget = kDefaultBudget);

/// Full-matrix character sum over X mod C Mat_{m,n}: equals
/// det(C)^n delta_{A = 0 mod Mat C}; the delta identity is re-asserted
/// internally on every call.
PhaseSum char_sum_full(const DiagonalModulus& c, const IntMatrix& a, i64 budget = kDefaultBudget);

/// Character sum over symmetric pairs (C,D): for odd p equals
/// delta_{A + A^t = 0 mod [C]} prod p^{(n-i+1) sigma_i}; for p = 2 the
/// diagonal needs the stronger a_ii = 0 mod 2^{sigma_i}. Asserted
/// internally.
PhaseSum char_sum_sympair(const DiagonalModulus& c, const IntMatrix& a, i64 p, i64 budget = kDefaultBudget);

enum class EquationKind {
    UQ_eq_T,             // (1) T = U Q, U in Mat_{m,n}
    SymUQ_eq_T,          // (2) T = U Q, U symmetric n x n
    UDUt_eq_T,           // (3) T = U D U^t, U in Mat_{n,m}
    SymUDU_eq_T,         // (4) T = U D U, U symmetric n x n
    QUt_plus_UQt_eq_T,   // (5) T = Q U^t + U Q^t, U in Mat_{n,m}
    QuadScalarMod2,      // a x^2 + 2 b x + c = 0 mod 2^k
    T_eq_UQUt_bracket,   // 2T = 2 U Q U^t mod [C~] over X~_1(C)
};

struct EquationCount {
    EquationKind kind;
    std::string instance;
    i64 count = 0;
    double bound = 0;       // constant-free bound expression
    double bound_alt = 0;   // second block-size reading where one exists
};

struct CountInstance {
    IntMatrix t, q, d;
    i64 p = 0;
    int k = 0;
    i64 a = 0, b = 0, c = 0; // scalar quadratic coefficients
};

EquationCount count_solutions(EquationKind kind, const CountInstance& inst, i64 budget = kDefaultBudget);

/// Solutions of 2T = 2 U Q U^t mod [C~] over U in X~_1(C); the bound is
/// prod p^{(n-i) mu_i} (p^{mu_i}, 2Q_i') in both block readings.
EquationCount count_TUQU(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c,
                         i64 budget = kDefaultBudget);

/// Both sides of the stationary-phase identity (odd p, all sigma_i >= 2):
/// first = direct sum, second = the product formula over X~_1 and X~_{2,1}.
std::pair<PhaseSum, PhaseSum> identity_taylor(const HalfIntegralSym& q, const HalfIntegralSym& t,
                                              const DiagonalModulus& c, i64 budget = kDefaultBudget);

/// Both sides of the block-decomposition identity (odd p,
/// sigma_1 = ... = sigma_s = 1 < 2 <= sigma_{s+1}); s = 0 reduces to the
/// stationary-phase identity.
std::pair<PhaseSum, PhaseSum> identity_blockdecomp(const HalfIntegralSym& q, const HalfIntegralSym& t,
                                                   const DiagonalModulus& c, i64 budget = kDefaultBudget);

/// Both sides of the common-divisor reduction (odd p, p | (2Q, 2T),
/// C = diag(p I_s, C3) with C3 exponents >= 2):
/// K_n(Q,T;C) = |X(p I_s)| p^{(n-s)(n+s+1)/2} K_{n-s}(Q3/p, T3/p; C3/p).
std::pair<PhaseSum, PhaseSum> identity_common_divisor(const HalfIntegralSym& q, const HalfIntegralSym& t,
                                                      const DiagonalModulus& c, i64 budget = kDefaultBudget);

struct Diagonalization {
    IntMatrix m;     // p not dividing det(m)
    IntMatrix core;  // r x r block of units (odd p) or hyperbolic 2x2 blocks (p = 2)
    IntMatrix e;     // M Q M^t = diag(core, p E) mod p^k
    int rank = 0;    // rank of Q mod p
};

/// Odd p: congruence-diagonalize an integral symmetric matrix mod p^k.
Diagonalization diagonalize_mod_pk(const IntMatrix& q, i64 p, int k);
/// p = 2: operates on the doubling 2Q; the mod-2 reduction is alternating,
/// so the core is a direct sum of hyperbolic blocks.
Diagonalization diagonalize_mod_2k(const HalfIntegralSym& q, int k);

} // namespace sks
