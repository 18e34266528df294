#include "sks/phase_sum.hpp"

#include <gmpxx.h>

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>

namespace sks {

PhaseSum::PhaseSum(std::int64_t denom) : denom_(denom), counts_(static_cast<size_t>(denom), 0) {
    if (denom <= 0) throw InputError("phase denominator must be positive");
}

PhaseSum PhaseSum::one(std::int64_t denom) { return constant(1, denom); }

PhaseSum PhaseSum::constant(std::int64_t count, std::int64_t denom) {
    PhaseSum s(denom);
    s.counts_[0] = count;
    return s;
}

void PhaseSum::add_term(std::int64_t index, std::int64_t multiplicity) {
    std::int64_t k = index % denom_;
    if (k < 0) k += denom_;
    counts_[static_cast<size_t>(k)] += multiplicity;
}

std::int64_t PhaseSum::mass() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

PhaseSum PhaseSum::rescaled(std::int64_t new_denom) const {
    if (new_denom == denom_) return *this;
    if (new_denom % denom_ != 0) throw InputError("insufficient denominator");
    PhaseSum s(new_denom);
    std::int64_t f = new_denom / denom_;
    for (std::int64_t k = 0; k < denom_; ++k)
        if (counts_[static_cast<size_t>(k)] != 0) s.counts_[static_cast<size_t>(k * f)] = counts_[static_cast<size_t>(k)];
    return s;
}

PhaseSum PhaseSum::conjugate() const {
    PhaseSum s(denom_);
    for (std::int64_t k = 0; k < denom_; ++k)
        s.counts_[static_cast<size_t>((denom_ - k) % denom_)] = counts_[static_cast<size_t>(k)];
    return s;
}

std::complex<double> PhaseSum::value() const {
    double re = 0, im = 0;
    const double w = 2.0 * M_PI / static_cast<double>(denom_);
    for (std::int64_t k = 0; k < denom_; ++k) {
        std::int64_t c = counts_[static_cast<size_t>(k)];
        if (c == 0) continue;
        re += static_cast<double>(c) * std::cos(w * static_cast<double>(k));
        im += static_cast<double>(c) * std::sin(w * static_cast<double>(k));
    }
    return {re, im};
}

double PhaseSum::magnitude() const { return std::abs(value()); }

PhaseSum merge(const PhaseSum& a, const PhaseSum& b) {
    std::int64_t l = std::lcm(a.denom_, b.denom_);
    PhaseSum ra = a.rescaled(l), rb = b.rescaled(l);
    for (std::int64_t k = 0; k < l; ++k) ra.counts_[static_cast<size_t>(k)] += rb.counts_[static_cast<size_t>(k)];
    return ra;
}

PhaseSum phase_mul(const PhaseSum& a, const PhaseSum& b) {
    std::int64_t l = std::lcm(a.denom_, b.denom_);
    PhaseSum ra = a.rescaled(l), rb = b.rescaled(l);
    PhaseSum out(l);
    for (std::int64_t i = 0; i < l; ++i) {
        std::int64_t ci = ra.counts_[static_cast<size_t>(i)];
        if (ci == 0) continue;
        for (std::int64_t j = 0; j < l; ++j) {
            std::int64_t cj = rb.counts_[static_cast<size_t>(j)];
            if (cj == 0) continue;
            std::int64_t k = i + j;
            if (k >= l) k -= l;
            out.counts_[static_cast<size_t>(k)] += ci * cj;
        }
    }
    return out;
}

namespace {

std::vector<std::int64_t> poly_div_exact(const std::vector<std::int64_t>& num,
                                         const std::vector<std::int64_t>& den) {
    // num, den monic-led polynomials over Z, den | num exactly.
    std::vector<std::int64_t> r = num;
    std::vector<std::int64_t> q(num.size() - den.size() + 1, 0);
    for (std::int64_t i = static_cast<std::int64_t>(q.size()) - 1; i >= 0; --i) {
        std::int64_t lead = r[static_cast<size_t>(i) + den.size() - 1];
        std::int64_t coef = lead / den.back();
        q[static_cast<size_t>(i)] = coef;
        if (coef == 0) continue;
        for (size_t j = 0; j < den.size(); ++j)
            r[static_cast<size_t>(i) + j] -= coef * den[j];
    }
    return q;
}

} // namespace

const std::vector<std::int64_t>& cyclotomic_poly(std::int64_t n) {
    static std::map<std::int64_t, std::vector<std::int64_t>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    std::vector<std::int64_t> num(static_cast<size_t>(n) + 1, 0);
    num[0] = -1;
    num[static_cast<size_t>(n)] = 1;
    std::function<const std::vector<std::int64_t>&(std::int64_t)> phi =
        [&](std::int64_t m) -> const std::vector<std::int64_t>& {
        auto jt = cache.find(m);
        if (jt != cache.end()) return jt->second;
        std::vector<std::int64_t> p(static_cast<size_t>(m) + 1, 0);
        p[0] = -1;
        p[static_cast<size_t>(m)] = 1;
        for (std::int64_t d = 1; d < m; ++d)
            if (m % d == 0) p = poly_div_exact(p, phi(d));
        return cache.emplace(m, std::move(p)).first->second;
    };
    return phi(n);
}

bool PhaseSum::value_is_zero() const {
    bool any = false;
    for (auto c : counts_)
        if (c != 0) { any = true; break; }
    if (!any) return true;
    // reduce the count polynomial modulo Phi_denom; zero remainder iff the
    // value vanishes.
    const auto& phi = cyclotomic_poly(denom_);
    std::vector<mpz_class> r(counts_.begin(), counts_.end());
    const size_t dp = phi.size() - 1; // degree of Phi, = phi(denom)
    for (size_t i = r.size(); i-- > dp;) {
        if (r[i] == 0) continue;
        mpz_class lead = r[i];
        for (size_t j = 0; j < phi.size(); ++j)
            r[i - dp + j] -= lead * phi[j];
    }
    for (size_t i = 0; i < dp; ++i)
        if (r[i] != 0) return false;
    return true;
}

bool PhaseSum::value_equal(const PhaseSum& other) const {
    std::int64_t l = std::lcm(denom_, other.denom_);
    PhaseSum a = rescaled(l), b = other.rescaled(l);
    if (a.counts_ == b.counts_) return true;
    PhaseSum diff(l);
    for (std::int64_t k = 0; k < l; ++k)
        diff.counts_[static_cast<size_t>(k)] = a.counts_[static_cast<size_t>(k)] - b.counts_[static_cast<size_t>(k)];
    return diff.value_is_zero();
}

} // namespace sks
