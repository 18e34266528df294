#pragma once

#include <optional>
#include <vector>

#include "sks/int_matrix.hpp"

namespace sks {

/// Smith normal form U * M * V = S with U, V unimodular and S diagonal,
/// divisors[i] | divisors[i+1], all divisors positive.
struct SmithForm {
    IntMatrix u, s, v;
    std::vector<mpz_class> divisors;
};

/// Pivot = minimal nonzero |entry|, alternating row/column reduction.
/// Works for rectangular matrices; throws "rank zero" on the zero matrix.
SmithForm snf(const IntMatrix& m);

/// One integral solution of A * x = b, if any.
std::optional<std::vector<mpz_class>> solve_linear(const IntMatrix& a, const std::vector<mpz_class>& b);

/// Column-style Hermite form: H = C * W with W unimodular, H lower
/// triangular with positive diagonal. Requires det(C) != 0.
IntMatrix hermite_normal_form(const IntMatrix& c, IntMatrix* w = nullptr);

} // namespace sks
