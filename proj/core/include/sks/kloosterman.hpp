#pragma once

#include "sks/phase_sum.hpp"
#include "sks/xset.hpp"

namespace sks {

/// K_n(Q,T;C) for prime-power diagonal C, summed directly over X~(C) via
/// D-bar phases; sigma_i = 0 rows are stripped first. Result has
/// denominator 2 c_n (denominator 2 for the empty instance). The fold over
/// the witness stream is a commutative merge, so any worker partition of
/// the index space yields the identical count vector.
PhaseSum ks_direct(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c,
                   int workers = 1, i64 budget = kDefaultBudget);

/// K_n(Q,T;C) for arbitrary nonsingular integral C: Smith normalization,
/// then the prime factorization K(Q,T;FG) = K(Q[Gbar],T;F) K(Q[Fbar],T;G)
/// evaluated leaf by leaf and multiplied as count-vector convolutions.
PhaseSum ks(const HalfIntegralSym& q, const HalfIntegralSym& t, const IntMatrix& c,
            int workers = 1, i64 budget = kDefaultBudget);

/// One flat sum over X~(C) for diagonal C in SNF with arbitrary composite
/// divisors; the witnesses carry genuine symplectic completions, so this is
/// the multiplicativity oracle against the product path above.
PhaseSum ks_flat(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c,
                 i64 budget = kDefaultBudget);

/// Classical Kloosterman sum S(q,t;c) = sum_{(x,c)=1} e((qx + t xbar)/c),
/// embedded into denominator 2c.
PhaseSum ks_classical(i64 q, i64 t, i64 c);

/// Euler phi, by trial division.
i64 euler_phi(i64 n);

/// Reusable evaluator for sweeps: normalizes C once, splits into
/// prime-power leaves, strips unit blocks and caches the witness list of
/// every leaf. eval() is then a cheap pass over cached witnesses.
class KsEvaluator {
public:
    explicit KsEvaluator(const IntMatrix& c, i64 budget = kDefaultBudget);
    explicit KsEvaluator(const DiagonalModulus& c, i64 budget = kDefaultBudget);

    PhaseSum eval(const HalfIntegralSym& q, const HalfIntegralSym& t) const;
    /// |X(C)|: the number of summed classes.
    i64 class_count() const { return class_count_; }
    const DiagonalModulus& normalized_modulus() const { return c_; }

private:
    struct Leaf {
        DiagonalModulus stripped;          // unit block removed
        int removed = 0;                   // leading stripped indices
        std::vector<i64> qtwist;           // diagonal of Fbar... Gbar product (full size)
        std::vector<WitnessAD> witnesses;  // at the stripped modulus
        std::vector<i64> weights;          // N_leaf / (2 c_i) per stripped row
        i64 denom = 2;                     // 2 * leaf c_n
    };
    void build(const DiagonalModulus& c, i64 budget);

    DiagonalModulus c_;
    IntMatrix utrans_, v_; // normalization transforms, U^t C V = S
    bool transformed_ = false;
    std::vector<Leaf> leaves_;
    i64 class_count_ = 1;
};

} // namespace sks
