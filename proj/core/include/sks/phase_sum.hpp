#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sks/errors.hpp"

namespace sks {

/// Exact finite sum of roots of unity: counts[k] is the multiplicity of
/// e^{2 pi i k / denom}. All identity tests in this library reduce to
/// equalities of these count vectors, or of their values after
/// cyclotomic canonicalization; complex numbers appear only in
/// magnitude/value evaluation.
class PhaseSum {
public:
    PhaseSum() : denom_(1), counts_(1, 0) {}
    explicit PhaseSum(std::int64_t denom);

    /// The multiplicative unit: a single term with phase 0.
    static PhaseSum one(std::int64_t denom = 2);
    /// `count` terms, all with phase 0.
    static PhaseSum constant(std::int64_t count, std::int64_t denom = 2);

    std::int64_t denom() const { return denom_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }

    void add_term(std::int64_t index, std::int64_t multiplicity = 1);
    /// Total number of summed terms.
    std::int64_t mass() const;

    PhaseSum rescaled(std::int64_t new_denom) const;
    PhaseSum conjugate() const;

    std::complex<double> value() const;
    /// |value| in double precision; error below (sum of |counts|) * 2^-50.
    double magnitude() const;

    /// Exact value equality: identical count vectors after rescaling to the
    /// lcm denominator, else the difference reduces to zero modulo the
    /// cyclotomic relations for the common denominator.
    bool value_equal(const PhaseSum& other) const;
    bool value_is_zero() const;

    /// Componentwise sum: value(merge(a,b)) = value(a) + value(b).
    friend PhaseSum merge(const PhaseSum& a, const PhaseSum& b);
    /// Count-vector convolution at the lcm denominator:
    /// value(phase_mul(a,b)) = value(a) * value(b).
    friend PhaseSum phase_mul(const PhaseSum& a, const PhaseSum& b);

    friend bool operator==(const PhaseSum& a, const PhaseSum& b) {
        return a.denom_ == b.denom_ && a.counts_ == b.counts_;
    }

private:
    std::int64_t denom_;
    std::vector<std::int64_t> counts_;
};

/// Coefficients of the N-th cyclotomic polynomial (cached).
const std::vector<std::int64_t>& cyclotomic_poly(std::int64_t n);

} // namespace sks
