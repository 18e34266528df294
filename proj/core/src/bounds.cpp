#include "sks/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

namespace sks {

mpz_class trivial_bound(const DiagonalModulus& c) {
    return c.box_size();
}

i64 divisor_count(i64 c) {
    i64 t = 1;
    for (i64 p = 2; p * p <= c; ++p) {
        if (c % p) continue;
        int e = 0;
        while (c % p == 0) { c /= p; ++e; }
        t *= e + 1;
    }
    if (c > 1) t *= 2;
    return t;
}

int rank_mod_p(const IntMatrix& m, i64 p) {
    int rows = m.rows(), cols = m.cols();
    std::vector<std::vector<i64>> a(static_cast<size_t>(rows), std::vector<i64>(static_cast<size_t>(cols)));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = mod_floor(m.at(i, j), p).get_si();
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (a[static_cast<size_t>(i)][static_cast<size_t>(col)] % p != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(a[static_cast<size_t>(rank)], a[static_cast<size_t>(piv)]);
        i64 inv = invmod64(a[static_cast<size_t>(rank)][static_cast<size_t>(col)], p);
        for (int i = rank + 1; i < rows; ++i) {
            i64 f = mod64(a[static_cast<size_t>(i)][static_cast<size_t>(col)] * inv, p);
            if (f == 0) continue;
            for (int j = col; j < cols; ++j)
                a[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    mod64(a[static_cast<size_t>(i)][static_cast<size_t>(j)] - f * a[static_cast<size_t>(rank)][static_cast<size_t>(j)], p);
        }
        ++rank;
    }
    return rank;
}

PrimePowerBound prime_power_bound(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c) {
    const int n = c.n;
    if (q.n != n || t.n != n) throw InputError("shape mismatch");
    if (!c.is_prime_power() || c.prime_local.empty()) throw InputError("theorem domain");
    auto sig = c.sigma();
    if (sig.back() < 2) throw InputError("theorem domain");
    i64 p = c.prime();
    auto gcd_pow = [&](int e, const IntMatrix& blk) {
        mpz_class pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        return gcd_with_scalar(pe, {&blk}).get_d();
    };

    PrimePowerBound out;
    double proof = 1, text = 1;
    for (int i0 = 0; i0 < n; ++i0) {
        int s = sig[static_cast<size_t>(i0)];
        if (s == 0) continue;
        int mu = s / 2, nu = s % 2;
        double pw = std::pow(static_cast<double>(p), (static_cast<double>(n - i0) - 0.5) * s);
        IntMatrix blk_proof, blk_text;
        if (s == 1) {
            int s1 = 0; // 0-based first index with sigma > 1 (exists: sigma_n >= 2)
            while (sig[static_cast<size_t>(s1)] <= 1) ++s1;
            blk_proof = q.doubled.block(0, s1, n, n - s1);
            blk_text = q.doubled.block(0, n - (s1 + 1), n, s1 + 1);
        } else {
            int s0 = 0;
            while (sig[static_cast<size_t>(s0)] != s) ++s0;
            blk_proof = q.doubled.block(s0, s0, n - s0, n - s0);
            blk_text = q.doubled.block(n - (s0 + 1), n - (s0 + 1), s0 + 1, s0 + 1);
        }
        proof *= pw * gcd_pow(mu, blk_proof) * std::sqrt(gcd_pow(nu, blk_proof));
        text *= pw * gcd_pow(mu, blk_text) * std::sqrt(gcd_pow(nu, blk_text));
    }
    out.proof_variant = proof;
    out.text_variant = text;
    out.scalar_variant = std::nan("");
    bool scalar = true;
    for (int i = 1; i < n; ++i)
        if (c.divisors[static_cast<size_t>(i)] != c.divisors[0]) scalar = false;
    if (scalar) {
        int s = sig[0], mu = s / 2, nu = s % 2;
        mpz_class pmu = 1, pnu = 1;
        for (int i = 0; i < mu; ++i) pmu *= p;
        for (int i = 0; i < nu; ++i) pnu *= p;
        double g1 = gcd_with_scalar(pmu, {&q.doubled, &t.doubled}).get_d();
        double g2 = gcd_with_scalar(pnu, {&q.doubled, &t.doubled}).get_d();
        out.scalar_variant = std::pow(static_cast<double>(p), s * n * n / 2.0) * std::pow(g1, n) *
                             std::pow(g2, n / 2.0);
    }
    return out;
}

double rank_bound(const HalfIntegralSym& q, const HalfIntegralSym& t, i64 p) {
    if (p == 2) throw InputError("odd prime required");
    int n = q.n;
    int r = std::max(rank_mod_p(q.doubled, p), rank_mod_p(t.doubled, p));
    return std::pow(static_cast<double>(p), n * (n + 1) / 2.0 - r / 2.0);
}

double weil_bound(i64 q, i64 t, i64 c) {
    if (c < 1) throw InputError("modulus must be positive");
    i64 g = std::gcd(c, std::gcd(std::llabs(q), std::llabs(t)));
    if (g == 0) g = c;
    return static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(g)) *
           std::sqrt(static_cast<double>(c));
}

double final_bound(const HalfIntegralSym& q, const HalfIntegralSym& t, const DiagonalModulus& c, double eps) {
    const int n = c.n;
    if (n == 0) return 1;
    mpz_class c1 = c.c1();
    double g = gcd_with_scalar(c1, {&q.doubled, &t.doubled}).get_d();
    double out = std::pow(static_cast<double>(c.cn()), eps) *
                 std::pow(static_cast<double>(c.c1()), n - 0.5) * std::pow(g, 1.5);
    for (int i = 1; i < n; ++i)
        out *= std::pow(static_cast<double>(c.divisors[static_cast<size_t>(i)]), n - i);
    return out;
}

std::vector<HalfIntegralSym> doubled_box(int n, int radius) {
    // symmetric doubled matrices with even diagonal, entries in [-radius, radius]
    std::vector<int> diag_vals, off_vals;
    for (int v = -radius; v <= radius; ++v) {
        if (v % 2 == 0) diag_vals.push_back(v);
        off_vals.push_back(v);
    }
    int free_off = n * (n - 1) / 2;
    std::vector<HalfIntegralSym> out;
    std::vector<int> idx(static_cast<size_t>(n + free_off), 0);
    size_t total = 1;
    for (int i = 0; i < n; ++i) total *= diag_vals.size();
    for (int i = 0; i < free_off; ++i) total *= off_vals.size();
    out.reserve(total);
    for (size_t lin = 0; lin < total; ++lin) {
        IntMatrix m(n, n);
        int k = 0;
        for (int i = 0; i < n; ++i) m.at(i, i) = diag_vals[static_cast<size_t>(idx[static_cast<size_t>(k++)])];
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                int v = off_vals[static_cast<size_t>(idx[static_cast<size_t>(k++)])];
                m.at(i, j) = v;
                m.at(j, i) = v;
            }
        out.push_back(HalfIntegralSym(m));
        for (size_t d = idx.size(); d-- > 0;) {
            size_t lim = d < static_cast<size_t>(n) ? diag_vals.size() : off_vals.size();
            if (static_cast<size_t>(++idx[d]) < lim) break;
            idx[d] = 0;
        }
    }
    return out;
}

namespace {

std::string sigma_str(const std::vector<int>& sig) {
    std::ostringstream os;
    for (size_t i = 0; i < sig.size(); ++i) os << (i ? "." : "") << sig[i];
    return os.str();
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::vector<SweepRow> ratio_report(const SweepSpec& spec) {
    struct Instance {
        i64 p;
        std::vector<int> sigma;
        size_t qi, ti;
    };
    auto box = doubled_box(spec.n, spec.radius);
    std::vector<Instance> instances;
    for (i64 p : spec.primes)
        for (const auto& sig : spec.sigmas)
            for (size_t qi = 0; qi < box.size(); ++qi)
                for (size_t ti = 0; ti < box.size(); ++ti) instances.push_back({p, sig, qi, ti});

    size_t nb = spec.bounds.size();
    std::vector<SweepRow> rows(instances.size() * nb);

    // evaluators are cached per modulus, built once up front
    std::map<std::pair<i64, std::string>, std::shared_ptr<KsEvaluator>> evals;
    for (i64 p : spec.primes)
        for (const auto& sig : spec.sigmas) {
            auto key = std::make_pair(p, sigma_str(sig));
            if (!evals.count(key))
                evals[key] = std::make_shared<KsEvaluator>(DiagonalModulus::prime_power(p, sig), spec.budget);
        }

    auto work = [&](int wid) {
        for (size_t ii = static_cast<size_t>(wid); ii < instances.size(); ii += static_cast<size_t>(std::max(1, spec.workers))) {
            const Instance& inst = instances[ii];
            DiagonalModulus c = DiagonalModulus::prime_power(inst.p, inst.sigma);
            const auto& ev = *evals.at(std::make_pair(inst.p, sigma_str(inst.sigma)));
            const HalfIntegralSym& q = box[inst.qi];
            const HalfIntegralSym& t = box[inst.ti];
            double kmag = ev.eval(q, t).magnitude();
            mpz_class c1 = c.c1();
            mpz_class g = gcd_with_scalar(c1, {&q.doubled, &t.doubled});
            char idbuf[96];
            std::snprintf(idbuf, sizeof idbuf, "n%d_p%02lld_s%s_q%05zu_t%05zu", spec.n,
                          static_cast<long long>(inst.p), sigma_str(inst.sigma).c_str(), inst.qi, inst.ti);
            for (size_t b = 0; b < nb; ++b) {
                SweepRow& row = rows[ii * nb + b];
                row.instance_id = idbuf;
                row.n = spec.n;
                row.prime = inst.p;
                row.sigma = sigma_str(inst.sigma);
                row.gcd_data = g.get_str();
                row.k_magnitude = kmag;
                row.bound_name = spec.bounds[b];
                const std::string& name = spec.bounds[b];
                try {
                    if (name == "trivial") row.bound_value = trivial_bound(c).get_d();
                    else if (name == "prime_power_proof") row.bound_value = prime_power_bound(q, t, c).proof_variant;
                    else if (name == "prime_power_text") row.bound_value = prime_power_bound(q, t, c).text_variant;
                    else if (name == "rank") row.bound_value = rank_bound(q, t, inst.p);
                    else if (name == "final") row.bound_value = final_bound(q, t, c, spec.eps);
                    else if (name == "weil") {
                        if (spec.n != 1) throw InputError("weil bound is the n=1 family");
                        row.bound_value = weil_bound(q.doubled.at(0, 0).get_si() / 2,
                                                     t.doubled.at(0, 0).get_si() / 2, c.cn());
                    } else throw InputError("unknown bound family: " + name);
                    row.ratio = row.bound_value > 0 ? kmag / row.bound_value : 0;
                } catch (const InputError&) {
                    row.skipped = true;
                }
            }
        }
    };
    if (spec.workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < spec.workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
        return a.bound_name < b.bound_name;
    });
    // summary rows: max ratio per family
    for (const auto& name : spec.bounds) {
        SweepRow s;
        s.instance_id = "zz_summary";
        s.n = spec.n;
        s.bound_name = name;
        s.ratio = 0;
        for (const auto& r : rows)
            if (r.bound_name == name && !r.skipped && r.instance_id != "zz_summary") s.ratio = std::max(s.ratio, r.ratio);
        rows.push_back(std::move(s));
    }
    return rows;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    std::ostringstream key;
    key << spec.n << "|" << spec.radius << "|" << spec.eps;
    for (i64 p : spec.primes) key << "|p" << p;
    for (const auto& s : spec.sigmas) key << "|s" << sigma_str(s);
    for (const auto& b : spec.bounds) key << "|b" << b;
    std::ostringstream os;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(key.str())));
    os << "# schema=sks-sweep-v1 instance_hash=" << hash << "\n";
    os << "instance,n,prime,sigma,gcd,k_magnitude,bound_name,bound_value,ratio,skipped\n";
    for (const auto& r : rows) {
        os << r.instance_id << "," << r.n << "," << r.prime << "," << r.sigma << "," << r.gcd_data << ","
           << fmt_double(r.k_magnitude) << "," << r.bound_name << "," << fmt_double(r.bound_value) << ","
           << fmt_double(r.ratio) << "," << (r.skipped ? 1 : 0) << "\n";
    }
    return os.str();
}

} // namespace sks
