#pragma once

#include <functional>
#include <vector>

#include "sks/modulus.hpp"
#include "sks/smallint.hpp"

namespace sks {

/// Deterministic generator over a box of symmetric-pair representatives:
/// free entries d_ij for i <= j run mod row_mod[i], the lower triangle is
/// forced to (chain[i]/chain[j]) * d_ji. With frozen_identity, rows whose
/// free modulus is 1 become identity rows (the sigma_i = 0 convention).
/// Enumeration order is an odometer over the free upper-triangle
/// coordinates with (0,0) slowest, so the index space splits into
/// contiguous chunks for deterministic parallel folds.
struct SymPairBox {
    int n = 0;
    std::vector<i64> row_mod;
    std::vector<i64> chain;
    bool frozen_identity = false;

    i64 total(i64 budget = kDefaultBudget) const {
        i64 t = 1;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                i64 r = radix(i);
                if (t > budget / r + 1) throw BudgetExceeded("instance too large");
                t *= r;
                if (t > budget) throw BudgetExceeded("instance too large");
            }
        return t;
    }

    i64 radix(int row) const {
        return (frozen_identity && row_mod[static_cast<size_t>(row)] == 1) ? 1 : row_mod[static_cast<size_t>(row)];
    }

    template <class F>
    void scan(i64 lo, i64 hi, F&& fn) const {
        if (lo >= hi) return;
        // digit order: (0,0),(0,1),...,(n-1,n-1), first digit slowest
        std::vector<std::pair<int, int>> coords;
        std::vector<i64> radixv;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                coords.emplace_back(i, j);
                radixv.push_back(radix(i));
            }
        size_t m = coords.size();
        std::vector<i64> digit(m, 0);
        i64 idx = lo;
        for (size_t k = m; k-- > 0;) {
            digit[k] = idx % radixv[k];
            idx /= radixv[k];
        }
        SmallMat d(n, n);
        for (i64 cur = lo; cur < hi; ++cur) {
            for (size_t k = 0; k < m; ++k) {
                auto [i, j] = coords[k];
                d.at(i, j) = digit[k];
            }
            if (frozen_identity)
                for (int i = 0; i < n; ++i)
                    if (row_mod[static_cast<size_t>(i)] == 1) {
                        for (int j = i; j < n; ++j) d.at(i, j) = 0;
                        d.at(i, i) = 1;
                    }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < i; ++j)
                    d.at(i, j) = (chain[static_cast<size_t>(i)] / chain[static_cast<size_t>(j)]) * d.at(j, i);
            fn(const_cast<const SmallMat&>(d));
            // odometer increment
            for (size_t k = m; k-- > 0;) {
                if (++digit[k] < radixv[k]) break;
                digit[k] = 0;
            }
        }
    }
};

/// The X~(C) box: free d_ij mod c_i, forced lower triangle, rows
/// with c_i = 1 frozen to identity. Det filter applied by consumers.
SymPairBox xtilde_box(const DiagonalModulus& c);
/// Representatives of X~(C) mod C~ (free entries mod p^{mu_i}).
SymPairBox x1_box(const DiagonalModulus& c);
/// Symmetric pairs (C C~^{-1}, D) mod C C~^{-1}.
SymPairBox x2_box(const DiagonalModulus& c);
/// Symmetric pairs (C C~^{-1}, D) mod C C~^{-2}.
SymPairBox x21_box(const DiagonalModulus& c);
/// Symmetric pairs (C~, D) mod C~.
SymPairBox x22_box(const DiagonalModulus& c);

/// C~ = diag(p^{floor(sigma_i/2)}).
DiagonalModulus half_modulus(const DiagonalModulus& c);

/// Completion data for one class of X(C): A = Dbar^t, B = C^{-1}(Dbar D - I).
struct CoprimePairWitness {
    DiagonalModulus c;
    IntMatrix d, dbar, a, b;
};

/// CD^t symmetric and the n x n minors of (C D) have gcd 1.
bool is_coprime_pair(const IntMatrix& c, const IntMatrix& d);

/// Requires gcd(det D, c_n) = 1; verifies the symplectic relations exactly.
CoprimePairWitness complete_symplectic(const DiagonalModulus& c, const IntMatrix& d);

/// |X~(C)| by exhaustive enumeration (budget-guarded).
i64 count_xtilde(const DiagonalModulus& c, i64 budget = kDefaultBudget);

/// Streams every class of X~(C) exactly once as a full verified witness.
void enumerate_xtilde(const DiagonalModulus& c, const std::function<void(const CoprimePairWitness&)>& fn,
                      i64 budget = kDefaultBudget);

/// Fast witness pair: representative D and a valid completion block A
/// (both reduced mod 2 c_n, which leaves every phase and torus point
/// unchanged).
struct WitnessAD {
    SmallMat a, d;
};

/// All classes of X~(C) with completions, for diagonal C in SNF. Uses the
/// direct box when every prime of c_n divides c_1, else recombines
/// prime-power leaves through the factorization bijection
/// (D_F, D_G) -> (G D_F + F D_G).
std::vector<WitnessAD> collect_witnesses(const DiagonalModulus& c, i64 budget = kDefaultBudget);

} // namespace sks
