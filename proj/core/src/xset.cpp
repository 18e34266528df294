#include "sks/xset.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace sks {

namespace {

SymPairBox make_box(int n, std::vector<i64> row_mod, std::vector<i64> chain, bool frozen) {
    SymPairBox b;
    b.n = n;
    b.row_mod = std::move(row_mod);
    b.chain = std::move(chain);
    b.frozen_identity = frozen;
    return b;
}

std::vector<int> mu_of(const std::vector<int>& sigma) {
    std::vector<int> mu(sigma.size());
    for (size_t i = 0; i < sigma.size(); ++i) mu[i] = sigma[i] / 2;
    return mu;
}

} // namespace

DiagonalModulus half_modulus(const DiagonalModulus& c) {
    if (c.n == 0) return c;
    auto sig = c.sigma();
    return DiagonalModulus::prime_power(c.prime(), mu_of(sig));
}

SymPairBox xtilde_box(const DiagonalModulus& c) {
    std::vector<i64> mods(c.divisors.begin(), c.divisors.end());
    return make_box(c.n, mods, mods, true);
}

SymPairBox x1_box(const DiagonalModulus& c) {
    i64 p = c.prime();
    auto sig = c.sigma();
    auto mu = mu_of(sig);
    std::vector<i64> mods, chain;
    for (int i = 0; i < c.n; ++i) {
        mods.push_back(ipow64(p, mu[static_cast<size_t>(i)]));
        chain.push_back(ipow64(p, sig[static_cast<size_t>(i)]));
    }
    return make_box(c.n, mods, chain, true);
}

SymPairBox x2_box(const DiagonalModulus& c) {
    i64 p = c.prime();
    auto sig = c.sigma();
    auto mu = mu_of(sig);
    std::vector<i64> mods;
    for (int i = 0; i < c.n; ++i)
        mods.push_back(ipow64(p, sig[static_cast<size_t>(i)] - mu[static_cast<size_t>(i)]));
    return make_box(c.n, mods, mods, false);
}

SymPairBox x21_box(const DiagonalModulus& c) {
    i64 p = c.prime();
    auto sig = c.sigma();
    auto mu = mu_of(sig);
    std::vector<i64> mods, chain;
    for (int i = 0; i < c.n; ++i) {
        mods.push_back(ipow64(p, sig[static_cast<size_t>(i)] - 2 * mu[static_cast<size_t>(i)]));
        chain.push_back(ipow64(p, sig[static_cast<size_t>(i)] - mu[static_cast<size_t>(i)]));
    }
    return make_box(c.n, mods, chain, false);
}

SymPairBox x22_box(const DiagonalModulus& c) {
    i64 p = c.prime();
    auto sig = c.sigma();
    auto mu = mu_of(sig);
    std::vector<i64> mods;
    for (int i = 0; i < c.n; ++i) mods.push_back(ipow64(p, mu[static_cast<size_t>(i)]));
    return make_box(c.n, mods, mods, false);
}

bool is_coprime_pair(const IntMatrix& c, const IntMatrix& d) {
    if (!c.is_square() || c.rows() != d.rows() || c.cols() != d.cols()) throw InputError("shape mismatch");
    int n = c.rows();
    if (!(c * d.transpose()).is_symmetric()) return false;
    // gcd of all n x n minors of (C D)
    IntMatrix cd(n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cd.at(i, j) = c.at(i, j);
            cd.at(i, n + j) = d.at(i, j);
        }
    mpz_class g = 0;
    std::vector<int> pick(static_cast<size_t>(n));
    std::function<bool(int, int)> rec = [&](int start, int depth) -> bool {
        if (depth == n) {
            IntMatrix minor(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) minor.at(i, j) = cd.at(i, pick[static_cast<size_t>(j)]);
            mpz_class dd = det_exact(minor);
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), dd.get_mpz_t());
            return g == 1;
        }
        for (int col = start; col < 2 * n; ++col) {
            pick[static_cast<size_t>(depth)] = col;
            if (rec(col + 1, depth + 1)) return true;
        }
        return false;
    };
    if (n == 0) return true;
    rec(0, 0);
    return g == 1;
}

CoprimePairWitness complete_symplectic(const DiagonalModulus& c, const IntMatrix& d) {
    if (d.rows() != c.n || d.cols() != c.n) throw InputError("shape mismatch");
    int n = c.n;
    mpz_class cn = c.cn();
    mpz_class det = det_exact(d);
    mpz_class dd;
    mpz_class detm = mod_floor(det, cn);
    if (mpz_invert(dd.get_mpz_t(), detm.get_mpz_t(), cn.get_mpz_t()) == 0)
        throw InputError("determinant of D not invertible modulo c_n");
    IntMatrix dbar = mpz_class(dd) * adjugate(d);
    // B = C^{-1}(Dbar D - I): row i exactly divisible by c_i
    IntMatrix bd = dbar * d;
    for (int i = 0; i < n; ++i) bd.at(i, i) -= 1;
    IntMatrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (bd.at(i, j) % c.divisors[static_cast<size_t>(i)] != 0)
                throw std::logic_error("completion not integral");
            b.at(i, j) = bd.at(i, j) / c.divisors[static_cast<size_t>(i)];
        }
    CoprimePairWitness w{c, d, dbar, dbar.transpose(), b};
    // verify M^t J M = J on the full 2n x 2n matrix
    IntMatrix m(2 * n, 2 * n);
    const IntMatrix cm = c.matrix();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            m.at(i, j) = w.a.at(i, j);
            m.at(i, n + j) = w.b.at(i, j);
            m.at(n + i, j) = cm.at(i, j);
            m.at(n + i, n + j) = w.d.at(i, j);
        }
    IntMatrix jm(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        jm.at(i, n + i) = 1;
        jm.at(n + i, i) = -1;
    }
    if (!(m.transpose() * jm * m == jm)) throw std::logic_error("completion is not symplectic");
    return w;
}

namespace {

/// det-based coprimality filter for the direct box; valid when the modulus
/// is a prime power or covers all rows.
struct DetFilter {
    i64 cn;
    bool prime_power;
    i64 p;
    bool accept(const SmallMat& d) const {
        i64 det = sdet(d);
        if (prime_power) return mod64(det, p) != 0;
        return std::gcd(mod64(det, cn), cn) == 1;
    }
};

} // namespace

i64 count_xtilde(const DiagonalModulus& c, i64 budget) {
    if (c.n == 0) return 1;
    SymPairBox box = xtilde_box(c);
    i64 total = box.total(budget);
    i64 cnt = 0;
    if (c.is_prime_power() || c.primes_cover_all_rows()) {
        DetFilter f{c.cn(), c.is_prime_power(), c.is_prime_power() && !c.prime_local.empty() ? c.prime() : 0};
        if (f.prime_power && f.p == 0) { // all divisors are 1
            return 1;
        }
        box.scan(0, total, [&](const SmallMat& d) {
            if (f.accept(d)) ++cnt;
        });
    } else {
        const IntMatrix cm = c.matrix();
        box.scan(0, total, [&](const SmallMat& d) {
            if (is_coprime_pair(cm, d.to_int_matrix())) ++cnt;
        });
    }
    return cnt;
}

void enumerate_xtilde(const DiagonalModulus& c, const std::function<void(const CoprimePairWitness&)>& fn,
                      i64 budget) {
    if (!c.is_prime_power()) throw InputError("prime-power modulus required");
    if (c.n == 0) return;
    SymPairBox box = xtilde_box(c);
    i64 total = box.total(budget);
    if (c.prime_local.empty()) {
        fn(complete_symplectic(c, IntMatrix::identity(c.n)));
        return;
    }
    i64 p = c.prime();
    box.scan(0, total, [&](const SmallMat& d) {
        if (mod64(sdet(d), p) == 0) return;
        fn(complete_symplectic(c, d.to_int_matrix()));
    });
}

namespace {

using D128 = std::array<__int128, kSmallDim * kSmallDim>;

/// Class representatives D of X~(C) for diagonal C in SNF, without
/// completions. Prime-power (and row-covered) moduli enumerate the box
/// directly; otherwise the factorization bijection recombines leaves via
/// D = G D_F + F D_G, which is exact on classes.
std::vector<D128> collect_d_reps(const DiagonalModulus& c, i64 budget) {
    int n = c.n;
    std::vector<D128> out;
    if (n == 0 || c.prime_local.empty()) {
        D128 w{};
        for (int i = 0; i < n; ++i) w[static_cast<size_t>(i * n + i)] = 1;
        out.push_back(w);
        return out;
    }
    if (c.is_prime_power() || c.primes_cover_all_rows()) {
        SymPairBox box = xtilde_box(c);
        i64 total = box.total(budget);
        i64 cn = c.cn();
        bool pp = c.is_prime_power();
        i64 p = pp ? c.prime() : 0;
        box.scan(0, total, [&](const SmallMat& d) {
            i64 det = sdet(d);
            if (pp ? (mod64(det, p) == 0) : (std::gcd(mod64(det, cn), cn) != 1)) return;
            D128 w{};
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) w[static_cast<size_t>(i * n + j)] = d.at(i, j);
            out.push_back(w);
        });
        return out;
    }
    auto steps = prime_split(c);
    const PrimeSplitStep& st = steps.front();
    auto wf = collect_d_reps(st.twist.f, budget);
    auto wg = collect_d_reps(st.twist.g, budget);
    check_budget(static_cast<i64>(wf.size()) * static_cast<i64>(wg.size()), budget);
    std::vector<__int128> fd(static_cast<size_t>(n)), gd(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        fd[static_cast<size_t>(i)] = st.twist.f.divisors[static_cast<size_t>(i)];
        gd[static_cast<size_t>(i)] = st.twist.g.divisors[static_cast<size_t>(i)];
    }
    std::vector<D128> out2;
    out2.reserve(wf.size() * wg.size());
    for (const auto& f : wf)
        for (const auto& g : wg) {
            D128 w{};
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    size_t k = static_cast<size_t>(i * n + j);
                    w[k] = gd[static_cast<size_t>(i)] * f[k] + fd[static_cast<size_t>(i)] * g[k];
                }
            out2.push_back(w);
        }
    return out2;
}

/// Some valid completion block A for the class of D: integral A with
/// A^t C symmetric and D A^t = I mod C Mat(Z). Any two such differ by a
/// symmetric X C, so every phase is independent of the choice.
///
/// The symmetry constraint A_{ji} c_j = A_{ij} c_i parametrizes A by one
/// free coordinate per unordered index pair (A_ii = a_i; for i < j,
/// A_ij = (c_j/c_i) t_ij and A_ji = t_ij), and the solution set is closed
/// under shifting any parameter by c_n, so a representative lies in the
/// box [0, c_n)^{n(n+1)/2}.
SmallMat search_completion(const DiagonalModulus& c, const SmallMat& d, i64 budget) {
    const int n = c.n;
    const i64 cn = c.cn();
    const int npar = n * (n + 1) / 2;
    i64 total = 1;
    for (int k = 0; k < npar; ++k) {
        total *= cn;
        check_budget(total, budget);
    }
    std::vector<std::pair<int, int>> coords;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) coords.emplace_back(i, j);
    std::vector<i64> par(static_cast<size_t>(npar), 0);
    SmallMat a(n, n);
    for (i64 idx = 0; idx < total; ++idx) {
        for (int k = 0; k < npar; ++k) {
            auto [i, j] = coords[static_cast<size_t>(k)];
            if (i == j) {
                a.at(i, i) = par[static_cast<size_t>(k)];
            } else {
                a.at(i, j) = (c.divisors[static_cast<size_t>(j)] / c.divisors[static_cast<size_t>(i)]) *
                             par[static_cast<size_t>(k)];
                a.at(j, i) = par[static_cast<size_t>(k)];
            }
        }
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                i64 acc = 0;
                for (int k = 0; k < n; ++k) acc += d.at(i, k) * a.at(j, k);
                if (mod64(acc - (i == j ? 1 : 0), c.divisors[static_cast<size_t>(i)]) != 0) ok = false;
            }
        if (ok) return a;
        for (int k = npar; k-- > 0;) {
            if (++par[static_cast<size_t>(k)] < cn) break;
            par[static_cast<size_t>(k)] = 0;
        }
    }
    throw std::logic_error("no symplectic completion for a coprime pair");
}

} // namespace

std::vector<WitnessAD> collect_witnesses(const DiagonalModulus& c, i64 budget) {
    // witnesses depend only on the divisor chain; sweeps and suites revisit
    // the same moduli constantly
    static std::map<std::vector<i64>, std::shared_ptr<const std::vector<WitnessAD>>> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(c.divisors);
        if (it != cache.end()) return *it->second;
    }
    const int n = c.n;
    const __int128 n2 = 2 * c.cn();
    const bool direct = n == 0 || c.prime_local.empty() || c.is_prime_power() || c.primes_cover_all_rows();
    auto reps = collect_d_reps(c, budget);
    std::vector<WitnessAD> out;
    out.reserve(reps.size());
    const i64 cn = c.cn();
    for (const auto& w : reps) {
        WitnessAD r;
        r.a = SmallMat(n, n);
        r.d = SmallMat(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                __int128 dv = w[static_cast<size_t>(i * n + j)] % n2;
                if (dv < 0) dv += n2;
                r.d.at(i, j) = static_cast<i64>(dv);
            }
        if (direct) {
            // A = Dbar^t with Dbar = dinv adj(D); gcd(det D, c_n) = 1 here
            SmallMat dm(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    dm.at(i, j) = static_cast<i64>(w[static_cast<size_t>(i * n + j)]);
            i64 det = sdet(dm);
            i64 dinv = n ? invmod64(det, cn) : 1;
            SmallMat adj = sadjugate(dm);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    r.a.at(i, j) = mod64(dinv * mod64(adj.at(j, i), 2 * cn), 2 * cn);
        } else {
            SmallMat a = search_completion(c, r.d, budget);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) r.a.at(i, j) = mod64(a.at(i, j), 2 * cn);
        }
        out.push_back(r);
    }
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(c.divisors);
        if (it == cache.end())
            it = cache.emplace(c.divisors, std::make_shared<const std::vector<WitnessAD>>(out)).first;
        return *it->second;
    }
}

} // namespace sks
