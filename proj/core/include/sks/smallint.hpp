#pragma once

#include <array>
#include <cstdint>
#include <numeric>

#include "sks/errors.hpp"
#include "sks/int_matrix.hpp"

namespace sks {

using i64 = std::int64_t;

/// Enumeration kernels work on matrices of dimension <= kSmallDim with
/// entries small enough for exact int64 arithmetic; the budget guard keeps
/// instances inside that envelope.
inline constexpr int kSmallDim = 4;

inline i64 ipow64(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

inline i64 mod64(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

/// Inverse of a modulo m (gcd(a,m)=1).
inline i64 invmod64(i64 a, i64 m) {
    i64 r0 = m, r1 = mod64(a, m), x0 = 0, x1 = 1;
    while (r1) {
        i64 q = r0 / r1;
        i64 t = r0 - q * r1; r0 = r1; r1 = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
    }
    if (r0 != 1) throw InputError("not invertible mod m");
    return mod64(x0, m);
}

struct SmallMat {
    int rows = 0, cols = 0;
    std::array<i64, kSmallDim * kSmallDim> a{};

    SmallMat() = default;
    SmallMat(int r, int c) : rows(r), cols(c) {
        if (r > kSmallDim || c > kSmallDim) throw BudgetExceeded("instance too large");
    }
    static SmallMat identity(int n) {
        SmallMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    i64& at(int i, int j) { return a[static_cast<size_t>(i * cols + j)]; }
    i64 at(int i, int j) const { return a[static_cast<size_t>(i * cols + j)]; }

    IntMatrix to_int_matrix() const {
        IntMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = at(i, j);
        return m;
    }
    static SmallMat from_int_matrix(const IntMatrix& m) {
        SmallMat s(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                if (!m.at(i, j).fits_slong_p()) throw BudgetExceeded("instance too large");
                s.at(i, j) = m.at(i, j).get_si();
            }
        return s;
    }
};

inline SmallMat smul(const SmallMat& x, const SmallMat& y) {
    SmallMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < y.cols; ++j) {
            i64 acc = 0;
            for (int k = 0; k < x.cols; ++k) acc += x.at(i, k) * y.at(k, j);
            r.at(i, j) = acc;
        }
    return r;
}

inline SmallMat ssub(const SmallMat& x, const SmallMat& y) {
    SmallMat r(x.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j) - y.at(i, j);
    return r;
}

inline SmallMat sadd(const SmallMat& x, const SmallMat& y) {
    SmallMat r(x.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j) + y.at(i, j);
    return r;
}

inline SmallMat stranspose(const SmallMat& x) {
    SmallMat r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
    return r;
}

inline SmallMat smod(const SmallMat& x, i64 m) {
    SmallMat r(x.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = mod64(x.at(i, j), m);
    return r;
}

inline i64 sdet(const SmallMat& m) {
    switch (m.rows) {
        case 0: return 1;
        case 1: return m.at(0, 0);
        case 2: return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
        case 3:
            return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
                   m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
                   m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
        default: {
            i64 d = 0;
            for (int j = 0; j < 4; ++j) {
                SmallMat minor(3, 3);
                for (int r = 1; r < 4; ++r)
                    for (int c = 0, cc = 0; c < 4; ++c) {
                        if (c == j) continue;
                        minor.at(r - 1, cc++) = m.at(r, c);
                    }
                i64 cof = sdet(minor);
                d += ((j % 2) ? -1 : 1) * m.at(0, j) * cof;
            }
            return d;
        }
    }
}

inline SmallMat sadjugate(const SmallMat& m) {
    int n = m.rows;
    SmallMat adj(n, n);
    if (n == 1) {
        adj.at(0, 0) = 1;
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            SmallMat minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc++) = m.at(r, c);
                }
                ++rr;
            }
            i64 cof = sdet(minor);
            if ((i + j) % 2) cof = -cof;
            adj.at(j, i) = cof;
        }
    return adj;
}

} // namespace sks
