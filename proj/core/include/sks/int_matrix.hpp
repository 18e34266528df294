#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <vector>

#include "sks/errors.hpp"

namespace sks {

/// Dense integer matrix with arbitrary-precision entries, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw InputError("negative matrix dimension");
    }

    static IntMatrix identity(int n);
    static IntMatrix zeros(int rows, int cols);
    static IntMatrix diagonal(const std::vector<mpz_class>& d);
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    mpz_class& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const mpz_class& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    IntMatrix transpose() const;
    IntMatrix block(int i0, int j0, int r, int c) const;
    bool is_symmetric() const;
    bool is_zero() const;

    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator*(const mpz_class& c, const IntMatrix& a);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b);

    mpz_class trace() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<mpz_class> a_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
mpz_class det_exact(const IntMatrix& m);

/// Adjugate matrix: m * adjugate(m) == det_exact(m) * I.
IntMatrix adjugate(const IntMatrix& m);

/// Modular inverse d * adj(m) with d * det(m) == 1 (mod mod); entries reduced to [0, mod).
/// Requires gcd(det(m), mod) == 1.
IntMatrix inv_mod(const IntMatrix& m, const mpz_class& mod);

/// gcd of all entries; 0 for an empty matrix.
mpz_class gcd_entries(const IntMatrix& m);

mpz_class mod_floor(const mpz_class& a, const mpz_class& m);

/// Symmetric half-integral matrix Q, stored exactly as its doubling 2Q
/// (symmetric with even diagonal).
struct HalfIntegralSym {
    int n = 0;
    IntMatrix doubled; // equals 2Q

    HalfIntegralSym() = default;
    explicit HalfIntegralSym(IntMatrix twice_q);
    static HalfIntegralSym zero(int n);
    static HalfIntegralSym from_doubled_rows(std::initializer_list<std::initializer_list<long>> rows);

    /// Congruence transform on the underlying form: (2Q)[U] = U^t (2Q) U.
    HalfIntegralSym transformed(const IntMatrix& u) const;
    /// Bottom-right (n-s) x (n-s) block.
    HalfIntegralSym bottom_right(int s) const;
    /// Exact division of every doubled entry (requires divisibility).
    HalfIntegralSym divided_by(const mpz_class& d) const;
    HalfIntegralSym negated() const;
};

} // namespace sks
