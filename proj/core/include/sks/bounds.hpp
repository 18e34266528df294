#pragma once

#include <string>
#include <vector>

#include "sks/kloosterman.hpp"

namespace sks {

/// prod c_i^{n-i+1}: the length of the X~(C) box.
mpz_class trivial_bound(const DiagonalModulus& c);

/// Number of divisors, by trial division.
i64 divisor_count(i64 c);

/// The two bound expressions for prime-power moduli (sigma_n >= 2),
/// constant-free. The Q_i' block size is ambiguous in the statement, so
/// both readings are evaluated: `proof_variant` takes the block from the
/// first index of the sigma-run onward, `text_variant` the literal
/// bottom-right block of run-length size. `scalar_variant` is the scalar-
/// modulus formula p^{sigma n^2/2} (p^mu,2Q,2T)^n (p^nu,2Q,2T)^{n/2}
/// (NaN when C is not scalar).
struct PrimePowerBound {
    double proof_variant = 0;
    double text_variant = 0;
    double scalar_variant = 0;
};
PrimePowerBound prime_power_bound(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c);

/// p^{n(n+1)/2 - r/2} with r = max rank of 2Q, 2T mod p (odd p).
double rank_bound(const HalfIntegralSym& q, const HalfIntegralSym& t, i64 p);

/// Weil: tau(c) (c,q,t)^{1/2} c^{1/2}.
double weil_bound(i64 q, i64 t, i64 c);

/// c_n^eps c_1^{n-1/2} (c_1,2Q,2T)^{3/2} prod_{i>=2} c_i^{n-i+1}.
double final_bound(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c, double eps);

/// Rank of an integral matrix mod p by Gaussian elimination over F_p.
int rank_mod_p(const IntMatrix& m, i64 p);

/// All symmetric doubled matrices (even diagonal) with entries in
/// [-radius, radius], in deterministic odometer order.
std::vector<HalfIntegralSym> doubled_box(int n, int radius);

std::uint64_t fnv1a64(const std::string& s);

struct SweepSpec {
    int n = 2;
    std::vector<i64> primes;
    std::vector<std::vector<int>> sigmas;
    int radius = 2; // doubled-entry box radius
    std::vector<std::string> bounds; // subset of {trivial, prime_power_proof, prime_power_text, tz, final, weil}
    double eps = 0.0;
    int workers = 1;
    i64 budget = kDefaultBudget;
};

struct SweepRow {
    std::string instance_id;
    int n = 0;
    i64 prime = 0;
    std::string sigma;
    std::string gcd_data;
    double k_magnitude = 0;
    std::string bound_name;
    double bound_value = 0;
    double ratio = 0;
    bool skipped = false;
};

/// One row per (instance, bound family), plus a summary row with the max
/// ratio per family. Rows are keyed deterministically; the output is
/// independent of the worker count.
std::vector<SweepRow> ratio_report(const SweepSpec& spec);

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

} // namespace sks
