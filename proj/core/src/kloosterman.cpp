#include "sks/kloosterman.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace sks {

namespace {

SmallMat doubled_to_small(const HalfIntegralSym& q) { return SmallMat::from_int_matrix(q.doubled); }

/// Reduce a doubled parameter matrix mod 2 c_n; every phase of the sum is
/// unchanged because C^{-1} D (c_n E) has integral trace pairing.
SmallMat reduce_doubled(const SmallMat& r, i64 cn) {
    return smod(r, 2 * cn);
}

struct InverseTable {
    i64 m = 0;
    std::vector<i64> inv; // inv[x] = x^{-1} mod m for units, -1 otherwise
};

const InverseTable& inverse_table(i64 m) {
    static std::map<i64, InverseTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    InverseTable t;
    t.m = m;
    t.inv.assign(static_cast<size_t>(m), -1);
    for (i64 x = 0; x < m; ++x)
        if (std::gcd(x, m) == 1) t.inv[static_cast<size_t>(x)] = invmod64(x, m);
    return cache.emplace(m, std::move(t)).first->second;
}

/// Direct prime-power sum over a candidate range of the X~ box.
void ks_direct_range(const SymPairBox& box, i64 lo, i64 hi, i64 p, i64 psn, const SmallMat& rq,
                     const SmallMat& rt, const std::vector<i64>& w, PhaseSum& out) {
    const int n = box.n;
    const i64 nden = out.denom();
    if (n == 1) {
        const InverseTable& tab = inverse_table(psn);
        box.scan(lo, hi, [&](const SmallMat& d) {
            i64 x = d.at(0, 0);
            i64 xinv = tab.inv[static_cast<size_t>(x % psn)];
            if (xinv < 0) return;
            out.add_term((xinv * rq.at(0, 0) + x * rt.at(0, 0)) * w[0]);
        });
        return;
    }
    const i64 n2 = nden; // dbar reduced mod 2 p^{sigma_n} keeps phases exact
    box.scan(lo, hi, [&](const SmallMat& d) {
        i64 det = sdet(d);
        if (mod64(det, p) == 0) return;
        i64 dinv = invmod64(det, psn);
        SmallMat adj = sadjugate(d);
        i64 k = 0;
        for (int i = 0; i < n; ++i) {
            i64 acc = 0;
            for (int j = 0; j < n; ++j) {
                i64 dbar = mod64(dinv * mod64(adj.at(i, j), n2), n2);
                acc += dbar * rq.at(j, i) + d.at(i, j) * rt.at(j, i);
            }
            k += mod64(acc, nden) * w[static_cast<size_t>(i)];
        }
        out.add_term(k);
    });
}

std::vector<i64> phase_weights(const DiagonalModulus& c, i64 nden) {
    std::vector<i64> w(static_cast<size_t>(c.n));
    for (int i = 0; i < c.n; ++i) w[static_cast<size_t>(i)] = nden / (2 * c.divisors[static_cast<size_t>(i)]);
    return w;
}

} // namespace

PhaseSum ks_direct(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c,
                   int workers, i64 budget) {
    if (q.n != c.n || t.n != c.n) throw InputError("shape mismatch");
    if (!c.is_prime_power()) throw InputError("prime-power modulus required");
    StrippedInstance st = strip_unit_block(c, q, t);
    if (st.c.n == 0) return PhaseSum::one(2);
    i64 p = st.c.prime();
    i64 psn = st.c.cn();
    i64 nden = 2 * psn;
    SymPairBox box = xtilde_box(st.c);
    i64 total = box.total(budget);
    SmallMat rq = reduce_doubled(doubled_to_small(st.q), psn);
    SmallMat rt = reduce_doubled(doubled_to_small(st.t), psn);
    std::vector<i64> w = phase_weights(st.c, nden);

    if (workers <= 1 || total < 4096) {
        PhaseSum out(nden);
        ks_direct_range(box, 0, total, p, psn, rq, rt, w, out);
        return out;
    }
    int k = workers;
    std::vector<PhaseSum> parts(static_cast<size_t>(k), PhaseSum(nden));
    std::vector<std::thread> pool;
    for (int i = 0; i < k; ++i) {
        i64 lo = total * i / k, hi = total * (i + 1) / k;
        pool.emplace_back([&, i, lo, hi] { ks_direct_range(box, lo, hi, p, psn, rq, rt, w, parts[static_cast<size_t>(i)]); });
    }
    for (auto& th : pool) th.join();
    PhaseSum out = parts[0];
    for (int i = 1; i < k; ++i) out = merge(out, parts[static_cast<size_t>(i)]);
    return out;
}

PhaseSum ks(const HalfIntegralSym& q, const HalfIntegralSym& t, const IntMatrix& c, int workers, i64 budget) {
    NormalizedInstance ni = normalize(c, q, t);
    if (ni.c.n == 0) return PhaseSum::one(2);
    auto steps = prime_split(ni.c);
    PhaseSum result = PhaseSum::one(2);
    HalfIntegralSym qcur = ni.q;
    for (size_t s = 0; s < steps.size(); ++s) {
        const auto& step = steps[s];
        bool last = (s + 1 == steps.size());
        if (last) {
            result = phase_mul(result, ks_direct(qcur, ni.t, step.local, workers, budget));
        } else {
            HalfIntegralSym qleaf = qcur.transformed(step.twist.gbar);
            result = phase_mul(result, ks_direct(qleaf, ni.t, step.local, workers, budget));
            qcur = qcur.transformed(step.twist.fbar);
        }
    }
    return result;
}

PhaseSum ks_flat(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c, i64 budget) {
    if (q.n != c.n || t.n != c.n) throw InputError("shape mismatch");
    if (c.n == 0) return PhaseSum::one(2);
    i64 cn = c.cn();
    i64 nden = 2 * cn;
    auto wits = collect_witnesses(c, budget);
    SmallMat rq = reduce_doubled(doubled_to_small(q), cn);
    SmallMat rt = reduce_doubled(doubled_to_small(t), cn);
    std::vector<i64> w = phase_weights(c, nden);
    PhaseSum out(nden);
    const int n = c.n;
    for (const auto& wit : wits) {
        // tr(A C^{-1} Q): A_ij weighted by column j; tr(C^{-1} D T): row i.
        i64 k = 0;
        for (int i = 0; i < n; ++i) {
            i64 acc = 0;
            for (int j = 0; j < n; ++j) {
                k += mod64(wit.a.at(i, j) * rq.at(j, i), nden) * w[static_cast<size_t>(j)];
                acc += wit.d.at(i, j) * rt.at(j, i);
            }
            k += mod64(acc, nden) * w[static_cast<size_t>(i)];
            k = mod64(k, nden);
        }
        out.add_term(k);
    }
    return out;
}

PhaseSum ks_classical(i64 q, i64 t, i64 c) {
    if (c < 1) throw InputError("modulus must be positive");
    PhaseSum out(2 * c);
    const InverseTable& tab = inverse_table(c);
    for (i64 x = 0; x < c; ++x) {
        i64 xb = tab.inv[static_cast<size_t>(x)];
        if (xb < 0) continue;
        out.add_term(2 * (q * x + t * xb));
    }
    return out;
}

i64 euler_phi(i64 n) {
    i64 r = n;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

KsEvaluator::KsEvaluator(const IntMatrix& c, i64 budget) {
    HalfIntegralSym z = HalfIntegralSym::zero(c.rows());
    NormalizedInstance ni = normalize(c, z, z);
    utrans_ = ni.u;
    v_ = ni.v;
    transformed_ = true;
    build(ni.c, budget);
}

KsEvaluator::KsEvaluator(const DiagonalModulus& c, i64 budget) { build(c, budget); }

void KsEvaluator::build(const DiagonalModulus& c, i64 budget) {
    c_ = c;
    class_count_ = 1;
    if (c.n == 0) return;
    auto steps = prime_split(c);
    const i64 red = 2 * c.cn(); // twist coefficients only matter mod 2 c_n
    std::vector<i64> acc(static_cast<size_t>(c.n), 1); // running product of fbar diagonals
    for (size_t s = 0; s < steps.size(); ++s) {
        const auto& step = steps[s];
        bool last = (s + 1 == steps.size());
        Leaf leaf;
        leaf.qtwist = acc;
        if (!last) {
            for (int i = 0; i < c.n; ++i) {
                i64 gb = mod_floor(step.twist.gbar.at(i, i), red).get_si();
                i64 fb = mod_floor(step.twist.fbar.at(i, i), red).get_si();
                leaf.qtwist[static_cast<size_t>(i)] = mod64(leaf.qtwist[static_cast<size_t>(i)] * gb, red);
                acc[static_cast<size_t>(i)] = mod64(acc[static_cast<size_t>(i)] * fb, red);
            }
        }
        HalfIntegralSym z = HalfIntegralSym::zero(c.n);
        StrippedInstance st = strip_unit_block(step.local, z, z);
        leaf.stripped = st.c;
        leaf.removed = st.removed;
        if (st.c.n > 0) {
            leaf.denom = 2 * st.c.cn();
            leaf.weights = phase_weights(st.c, leaf.denom);
            leaf.witnesses = collect_witnesses(st.c, budget);
            class_count_ *= static_cast<i64>(leaf.witnesses.size());
        }
        leaves_.push_back(std::move(leaf));
    }
}

PhaseSum KsEvaluator::eval(const HalfIntegralSym& q, const HalfIntegralSym& t) const {
    if (q.n != c_.n || t.n != c_.n) throw InputError("shape mismatch");
    if (c_.n == 0) return PhaseSum::one(2);
    HalfIntegralSym qn = transformed_ ? HalfIntegralSym(utrans_.transpose() * q.doubled * utrans_) : q;
    HalfIntegralSym tn = transformed_ ? t.transformed(v_) : t;
    SmallMat rq0 = doubled_to_small(qn);
    SmallMat rt0 = doubled_to_small(tn);
    PhaseSum result = PhaseSum::one(2);
    for (const auto& leaf : leaves_) {
        if (leaf.stripped.n == 0) continue;
        i64 cn = leaf.stripped.cn();
        // twist Q by the accumulated diagonal, take stripped blocks, reduce
        int s = leaf.removed;
        int m = leaf.stripped.n;
        SmallMat rq(m, m), rt(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                i64 wi = mod64(leaf.qtwist[static_cast<size_t>(s + i)], 2 * cn);
                i64 wj = mod64(leaf.qtwist[static_cast<size_t>(s + j)], 2 * cn);
                rq.at(i, j) = mod64(wi * wj % (2 * cn) * mod64(rq0.at(s + i, s + j), 2 * cn), 2 * cn);
                rt.at(i, j) = mod64(rt0.at(s + i, s + j), 2 * cn);
            }
        PhaseSum part(leaf.denom);
        for (const auto& wit : leaf.witnesses) {
            i64 k = 0;
            for (int i = 0; i < m; ++i) {
                i64 acc2 = 0;
                for (int j = 0; j < m; ++j) {
                    k += mod64(wit.a.at(i, j) * rq.at(j, i), leaf.denom) * leaf.weights[static_cast<size_t>(j)];
                    acc2 += wit.d.at(i, j) * rt.at(j, i);
                }
                k += mod64(acc2, leaf.denom) * leaf.weights[static_cast<size_t>(i)];
                k = mod64(k, leaf.denom);
            }
            part.add_term(k);
        }
        result = phase_mul(result, part);
    }
    return result;
}

} // namespace sks
