#pragma once

#include "sks/bounds.hpp"

namespace sks {

/// One point of S_C: the pair (C^{-t}A^t, C^{-1}D) of symmetric rational
/// matrices mod 1, stored as numerators over the common denominator c_n.
struct TorusPointPair {
    int n = 0;
    i64 den = 1;      // divides c_n
    IntMatrix num1;   // entries in [0, den)
    IntMatrix num2;
};

/// The set S_C built from the classes of X(C); exact rationals.
std::vector<TorusPointPair> build_SC(const IntMatrix& c, i64 budget = kDefaultBudget);
std::vector<TorusPointPair> build_SC(const DiagonalModulus& c, i64 budget = kDefaultBudget);

/// |K(Q,T;C)| / |X(C)| for a nonzero frequency pair.
double weyl_sum(const HalfIntegralSym& q, const HalfIntegralSym& t, const IntMatrix& c,
                i64 budget = kDefaultBudget);

/// max of weyl_sum over nonzero half-integral (Q,T) with ||Q||_inf <=
/// radius (doubled entries bounded by 2*radius, even diagonal).
double weyl_profile(const IntMatrix& c, int radius, int workers = 1, i64 budget = kDefaultBudget);

struct DecayRow {
    i64 m = 0;
    i64 c1 = 0, cn = 0;
    int radius = 0;
    double profile = 0;
    double normalized = 0; // profile * sqrt(c1)
};

/// Profile of S_{m C0} for each m; the last column is profile * c1^{1/2}.
std::vector<DecayRow> decay_experiment(const IntMatrix& c0, const std::vector<i64>& ms, int radius,
                                       int workers = 1, i64 budget = kDefaultBudget);

std::string decay_csv(const IntMatrix& c0, int radius, const std::vector<DecayRow>& rows);

} // namespace sks
