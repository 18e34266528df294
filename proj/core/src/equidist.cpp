#include "sks/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace sks {

namespace {

TorusPointPair point_from_witness(const DiagonalModulus& c, const WitnessAD& w) {
    TorusPointPair pt;
    pt.n = c.n;
    pt.den = c.cn();
    pt.num1 = IntMatrix(c.n, c.n);
    pt.num2 = IntMatrix(c.n, c.n);
    for (int i = 0; i < c.n; ++i) {
        i64 scale = pt.den / c.divisors[static_cast<size_t>(i)];
        for (int j = 0; j < c.n; ++j) {
            // X1 = C^{-1} A^t, X2 = C^{-1} D, entries over c_n
            pt.num1.at(i, j) = mod64(w.a.at(j, i) * scale, pt.den);
            pt.num2.at(i, j) = mod64(w.d.at(i, j) * scale, pt.den);
        }
    }
    return pt;
}

} // namespace

std::vector<TorusPointPair> build_SC(const DiagonalModulus& c, i64 budget) {
    auto wits = collect_witnesses(c, budget);
    std::vector<TorusPointPair> out;
    out.reserve(wits.size());
    for (const auto& w : wits) out.push_back(point_from_witness(c, w));
    return out;
}

std::vector<TorusPointPair> build_SC(const IntMatrix& c, i64 budget) {
    HalfIntegralSym z = HalfIntegralSym::zero(c.rows());
    NormalizedInstance ni = normalize(c, z, z);
    auto wits = collect_witnesses(ni.c, budget);
    // X(C) = (U, U^{-t}) X(S) (V^{-1}, V^t) for S = U^t C V, so the points
    // conjugate back: X1 = Up (S^{-1} A_S^t) Up^t, X2 = V (S^{-1} D_S) V^t.
    i64 cn = ni.c.cn();
    std::vector<TorusPointPair> out;
    out.reserve(wits.size());
    const int n = c.rows();
    for (const auto& w : wits) {
        IntMatrix n1(n, n), n2(n, n);
        for (int i = 0; i < n; ++i) {
            i64 scale = cn / ni.c.divisors[static_cast<size_t>(i)];
            for (int j = 0; j < n; ++j) {
                n1.at(i, j) = w.a.at(j, i) * scale;
                n2.at(i, j) = w.d.at(i, j) * scale;
            }
        }
        IntMatrix m1 = ni.u * n1 * ni.u.transpose();
        IntMatrix m2 = ni.v * n2 * ni.v.transpose();
        TorusPointPair pt;
        pt.n = n;
        pt.den = cn;
        pt.num1 = IntMatrix(n, n);
        pt.num2 = IntMatrix(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                pt.num1.at(i, j) = mod_floor(m1.at(i, j), cn);
                pt.num2.at(i, j) = mod_floor(m2.at(i, j), cn);
            }
        out.push_back(std::move(pt));
    }
    return out;
}

double weyl_sum(const HalfIntegralSym& q, const HalfIntegralSym& t, const IntMatrix& c, i64 budget) {
    if (q.doubled.is_zero() && t.doubled.is_zero()) throw InputError("use mass 1");
    KsEvaluator ev(c, budget);
    return ev.eval(q, t).magnitude() / static_cast<double>(ev.class_count());
}

double weyl_profile(const IntMatrix& c, int radius, int workers, i64 budget) {
    if (radius < 1) throw InputError("empty frequency box");
    const int n = c.rows();
    KsEvaluator ev(c, budget);
    auto box = doubled_box(n, 2 * radius);
    const double count = static_cast<double>(ev.class_count());
    size_t total = box.size() * box.size();
    int nw = std::max(1, workers);
    std::vector<double> best(static_cast<size_t>(nw), 0.0);
    auto work = [&](int wid) {
        double local = 0;
        for (size_t k = static_cast<size_t>(wid); k < total; k += static_cast<size_t>(nw)) {
            size_t qi = k / box.size(), ti = k % box.size();
            if (box[qi].doubled.is_zero() && box[ti].doubled.is_zero()) continue;
            local = std::max(local, ev.eval(box[qi], box[ti]).magnitude() / count);
        }
        best[static_cast<size_t>(wid)] = local;
    };
    if (nw == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    return *std::max_element(best.begin(), best.end());
}

std::vector<DecayRow> decay_experiment(const IntMatrix& c0, const std::vector<i64>& ms, int radius,
                                       int workers, i64 budget) {
    if (c0.rows() == 0 || det_exact(c0) == 0) throw InputError("singular modulus");
    std::vector<DecayRow> out;
    for (i64 m : ms) {
        IntMatrix c = mpz_class(m) * c0;
        HalfIntegralSym z = HalfIntegralSym::zero(c.rows());
        NormalizedInstance ni = normalize(c, z, z);
        DecayRow row;
        row.m = m;
        row.c1 = ni.c.c1();
        row.cn = ni.c.cn();
        row.radius = radius;
        row.profile = weyl_profile(c, radius, workers, budget);
        row.normalized = row.profile * std::sqrt(static_cast<double>(row.c1));
        out.push_back(row);
    }
    return out;
}

std::string decay_csv(const IntMatrix& c0, int radius, const std::vector<DecayRow>& rows) {
    std::ostringstream key;
    key << "equi|" << radius << "|";
    for (int i = 0; i < c0.rows(); ++i)
        for (int j = 0; j < c0.cols(); ++j) key << c0.at(i, j).get_str() << ",";
    for (const auto& r : rows) key << "m" << r.m << ";";
    std::ostringstream os;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(key.str())));
    os << "# schema=sks-equi-v1 instance_hash=" << hash << "\n";
    os << "m,c1,cn,radius,profile,normalized_profile\n";
    char buf[64];
    for (const auto& r : rows) {
        os << r.m << "," << r.c1 << "," << r.cn << "," << r.radius << ",";
        std::snprintf(buf, sizeof buf, "%.12g", r.profile);
        os << buf << ",";
        std::snprintf(buf, sizeof buf, "%.12g", r.normalized);
        os << buf << "\n";
    }
    return os.str();
}

} // namespace sks
