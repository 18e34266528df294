#include "sks/int_matrix.hpp"

namespace sks {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::zeros(int rows, int cols) { return IntMatrix(rows, cols); }

IntMatrix IntMatrix::diagonal(const std::vector<mpz_class>& d) {
    IntMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows.begin()->size()) : 0;
    IntMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c) throw InputError("ragged matrix literal");
        int j = 0;
        for (long v : row) m.at(i, j++) = v;
        ++i;
    }
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

IntMatrix IntMatrix::block(int i0, int j0, int r, int c) const {
    if (i0 < 0 || j0 < 0 || i0 + r > rows_ || j0 + c > cols_) throw InputError("block out of range");
    IntMatrix b(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) b.at(i, j) = at(i0 + i, j0 + j);
    return b;
}

bool IntMatrix::is_symmetric() const {
    if (!is_square()) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

bool IntMatrix::is_zero() const {
    for (const auto& v : a_)
        if (v != 0) return false;
    return true;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("shape mismatch in +");
    IntMatrix r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
    return r;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("shape mismatch in -");
    IntMatrix r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
    return r;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw InputError("shape mismatch in *");
    IntMatrix r(a.rows_, b.cols_);
    mpz_class acc;
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) {
            acc = 0;
            for (int k = 0; k < a.cols_; ++k) acc += a.at(i, k) * b.at(k, j);
            r.at(i, j) = acc;
        }
    return r;
}

IntMatrix operator*(const mpz_class& c, const IntMatrix& a) {
    IntMatrix r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = c * a.a_[i];
    return r;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

mpz_class IntMatrix::trace() const {
    mpz_class t = 0;
    for (int i = 0; i < rows_ && i < cols_; ++i) t += at(i, i);
    return t;
}

mpz_class det_exact(const IntMatrix& m) {
    if (!m.is_square()) throw InputError("determinant of non-square matrix");
    int n = m.rows();
    if (n == 0) return 1;
    // Bareiss: division-free pivoting with exact intermediate divisions.
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m.at(i, j);
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                mpz_class num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : mpz_class(-a[n - 1][n - 1]);
}

IntMatrix adjugate(const IntMatrix& m) {
    if (!m.is_square()) throw InputError("adjugate of non-square matrix");
    int n = m.rows();
    IntMatrix adj(n, n);
    if (n == 0) return adj;
    if (n == 1) {
        adj.at(0, 0) = 1;
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc++) = m.at(r, c);
                }
                ++rr;
            }
            mpz_class cof = det_exact(minor);
            if ((i + j) % 2) cof = -cof;
            adj.at(j, i) = cof;
        }
    return adj;
}

mpz_class mod_floor(const mpz_class& a, const mpz_class& m) {
    mpz_class r = a % m;
    if (r < 0) r += m;
    return r;
}

IntMatrix inv_mod(const IntMatrix& m, const mpz_class& mod) {
    if (!m.is_square()) throw InputError("inverse of non-square matrix");
    if (mod <= 0) throw InputError("modulus must be positive");
    mpz_class det = det_exact(m);
    mpz_class d;
    mpz_class detm = mod_floor(det, mod);
    if (mpz_invert(d.get_mpz_t(), detm.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw InputError("not invertible mod m");
    IntMatrix adj = adjugate(m);
    IntMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = mod_floor(d * adj.at(i, j), mod);
    return r;
}

mpz_class gcd_entries(const IntMatrix& m) {
    mpz_class g = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m.at(i, j).get_mpz_t());
    return g;
}

HalfIntegralSym::HalfIntegralSym(IntMatrix twice_q) : n(twice_q.rows()), doubled(std::move(twice_q)) {
    if (!doubled.is_square()) throw InputError("half-integral matrix must be square");
    if (!doubled.is_symmetric()) throw InputError("doubled matrix must be symmetric");
    for (int i = 0; i < n; ++i)
        if (doubled.at(i, i) % 2 != 0) throw InputError("doubled matrix must have even diagonal");
}

HalfIntegralSym HalfIntegralSym::zero(int n) { return HalfIntegralSym(IntMatrix::zeros(n, n)); }

HalfIntegralSym HalfIntegralSym::from_doubled_rows(std::initializer_list<std::initializer_list<long>> rows) {
    return HalfIntegralSym(IntMatrix::from_rows(rows));
}

HalfIntegralSym HalfIntegralSym::transformed(const IntMatrix& u) const {
    return HalfIntegralSym(u.transpose() * doubled * u);
}

HalfIntegralSym HalfIntegralSym::bottom_right(int s) const {
    return HalfIntegralSym(doubled.block(s, s, n - s, n - s));
}

HalfIntegralSym HalfIntegralSym::divided_by(const mpz_class& d) const {
    IntMatrix r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (doubled.at(i, j) % d != 0) throw InputError("entries not divisible");
            r.at(i, j) = doubled.at(i, j) / d;
        }
    return HalfIntegralSym(r);
}

HalfIntegralSym HalfIntegralSym::negated() const {
    return HalfIntegralSym(mpz_class(-1) * doubled);
}

} // namespace sks
