#include "sks/smith.hpp"

#include <algorithm>

namespace sks {

namespace {

void row_op(IntMatrix& m, IntMatrix& u, int dst, int src, const mpz_class& q) {
    // row dst -= q * row src, mirrored into u
    for (int j = 0; j < m.cols(); ++j) m.at(dst, j) -= q * m.at(src, j);
    for (int j = 0; j < u.cols(); ++j) u.at(dst, j) -= q * u.at(src, j);
}

void col_op(IntMatrix& m, IntMatrix& v, int dst, int src, const mpz_class& q) {
    for (int i = 0; i < m.rows(); ++i) m.at(i, dst) -= q * m.at(i, src);
    for (int i = 0; i < v.rows(); ++i) v.at(i, dst) -= q * v.at(i, src);
}

void swap_rows(IntMatrix& m, IntMatrix& u, int a, int b) {
    if (a == b) return;
    for (int j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
    for (int j = 0; j < u.cols(); ++j) std::swap(u.at(a, j), u.at(b, j));
}

void swap_cols(IntMatrix& m, IntMatrix& v, int a, int b) {
    if (a == b) return;
    for (int i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
    for (int i = 0; i < v.rows(); ++i) std::swap(v.at(i, a), v.at(i, b));
}

} // namespace

namespace {

/// Rounded quotient: |a - q b| <= |b| / 2; keeps elimination entries from
/// blowing up the way truncated division does.
mpz_class nearest_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (2 * r > abs(b)) q += 1;
    return q;
}

} // namespace

SmithForm snf(const IntMatrix& m0) {
    if (m0.rows() == 0 || m0.cols() == 0 || m0.is_zero()) throw InputError("rank zero");
    IntMatrix s = m0;
    IntMatrix u = IntMatrix::identity(m0.rows());
    IntMatrix v = IntMatrix::identity(m0.cols());
    const int nmin = std::min(s.rows(), s.cols());

    for (int t = 0; t < nmin; ++t) {
        long guard = 0;
        for (;;) {
            if (++guard > 100000) throw std::logic_error("smith normal form did not converge");
            // re-select the globally minimal nonzero |entry| as the pivot
            int pi = -1, pj = -1;
            mpz_class best;
            for (int i = t; i < s.rows(); ++i)
                for (int j = t; j < s.cols(); ++j) {
                    if (s.at(i, j) == 0) continue;
                    mpz_class a = abs(s.at(i, j));
                    if (pi < 0 || a < best) { best = a; pi = i; pj = j; }
                }
            if (pi < 0) break; // trailing block all zero
            swap_rows(s, u, t, pi);
            swap_cols(s, v, t, pj);
            if (s.at(t, t) < 0) {
                for (int j = 0; j < s.cols(); ++j) s.at(t, j) = -s.at(t, j);
                for (int j = 0; j < u.cols(); ++j) u.at(t, j) = -u.at(t, j);
            }

            bool clean = true;
            for (int i = t + 1; i < s.rows(); ++i) {
                if (s.at(i, t) == 0) continue;
                row_op(s, u, i, t, nearest_div(s.at(i, t), s.at(t, t)));
                if (s.at(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < s.cols(); ++j) {
                if (s.at(t, j) == 0) continue;
                col_op(s, v, j, t, nearest_div(s.at(t, j), s.at(t, t)));
                if (s.at(t, j) != 0) clean = false;
            }
            if (!clean) continue; // remainders became the new minimum

            // divisibility of the trailing block: fold an offending row in
            bool fixed = false;
            for (int i = t + 1; i < s.rows() && !fixed; ++i)
                for (int j = t + 1; j < s.cols() && !fixed; ++j)
                    if (s.at(i, j) % s.at(t, t) != 0) {
                        row_op(s, u, t, i, mpz_class(-1));
                        fixed = true;
                    }
            if (!fixed) break;
        }
        if (s.at(t, t) == 0) break;
    }

    SmithForm f{std::move(u), std::move(s), std::move(v), {}};
    for (int i = 0; i < nmin; ++i)
        if (f.s.at(i, i) != 0) f.divisors.push_back(f.s.at(i, i));
    return f;
}

std::optional<std::vector<mpz_class>> solve_linear(const IntMatrix& a, const std::vector<mpz_class>& b) {
    if (static_cast<int>(b.size()) != a.rows()) throw InputError("rhs size mismatch");
    if (a.is_zero()) {
        for (const auto& x : b)
            if (x != 0) return std::nullopt;
        return std::vector<mpz_class>(static_cast<size_t>(a.cols()), 0);
    }
    SmithForm f = snf(a);
    // a x = b  <=>  s y = u b with x = v y
    std::vector<mpz_class> ub(static_cast<size_t>(a.rows()), 0);
    for (int i = 0; i < a.rows(); ++i) {
        mpz_class acc = 0;
        for (int j = 0; j < a.rows(); ++j) acc += f.u.at(i, j) * b[static_cast<size_t>(j)];
        ub[static_cast<size_t>(i)] = acc;
    }
    std::vector<mpz_class> y(static_cast<size_t>(a.cols()), 0);
    int nmin = std::min(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i) {
        mpz_class d = (i < nmin) ? f.s.at(i, i) : mpz_class(0);
        if (d == 0) {
            if (ub[static_cast<size_t>(i)] != 0) return std::nullopt;
        } else {
            if (ub[static_cast<size_t>(i)] % d != 0) return std::nullopt;
            y[static_cast<size_t>(i)] = ub[static_cast<size_t>(i)] / d;
        }
    }
    std::vector<mpz_class> x(static_cast<size_t>(a.cols()), 0);
    for (int i = 0; i < a.cols(); ++i) {
        mpz_class acc = 0;
        for (int j = 0; j < a.cols(); ++j) acc += f.v.at(i, j) * y[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = acc;
    }
    return x;
}

IntMatrix hermite_normal_form(const IntMatrix& c, IntMatrix* w) {
    if (!c.is_square()) throw InputError("hermite form of non-square matrix");
    if (det_exact(c) == 0) throw InputError("singular modulus");
    int n = c.rows();
    IntMatrix h = c;
    IntMatrix wm = IntMatrix::identity(n);
    for (int i = 0; i < n; ++i) {
        // clear row i to the right of the diagonal with column gcd steps
        for (int j = i + 1; j < n; ++j) {
            while (h.at(i, j) != 0) {
                if (h.at(i, i) == 0 || abs(h.at(i, j)) < abs(h.at(i, i))) {
                    for (int r = 0; r < n; ++r) std::swap(h.at(r, i), h.at(r, j));
                    for (int r = 0; r < n; ++r) std::swap(wm.at(r, i), wm.at(r, j));
                    continue;
                }
                mpz_class q = h.at(i, j) / h.at(i, i);
                for (int r = 0; r < n; ++r) h.at(r, j) -= q * h.at(r, i);
                for (int r = 0; r < n; ++r) wm.at(r, j) -= q * wm.at(r, i);
            }
        }
        if (h.at(i, i) < 0) {
            for (int r = 0; r < n; ++r) { h.at(r, i) = -h.at(r, i); wm.at(r, i) = -wm.at(r, i); }
        }
        // reduce columns to the left so 0 <= h(i, j<i) < h(i,i); optional for
        // residue enumeration but keeps entries small
        for (int j = 0; j < i; ++j) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), h.at(i, j).get_mpz_t(), h.at(i, i).get_mpz_t());
            if (q != 0) {
                for (int r = 0; r < n; ++r) h.at(r, j) -= q * h.at(r, i);
                for (int r = 0; r < n; ++r) wm.at(r, j) -= q * wm.at(r, i);
            }
        }
    }
    if (w) *w = wm;
    return h;
}

} // namespace sks
