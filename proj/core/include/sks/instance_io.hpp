#pragma once

#include <string>

#include "sks/structure.hpp"

namespace sks {

/// Parse error carrying the line/column of the offending token.
class ParseError : public InputError {
public:
    ParseError(int line, int col, const std::string& what)
        : InputError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                     ": " + what),
          line(line), col(col) {}
    int line, col;
};

/// Instance files are plain text: `n <dim>`, then the integer matrices
/// row by row under the keys `c`, `qdoubled`, `tdoubled` (half-integral
/// inputs are always given as their doublings).
struct KsInstance {
    IntMatrix c;
    HalfIntegralSym q, t;
};
KsInstance parse_ks_instance(const std::string& text);

/// Keys: p, s, n, adoubled ((n-s) x s), b1doubled ((n-s) x (n-s)), b2 (s x s).
struct GaussInstance {
    i64 p = 0;
    int s = 0, n = 0;
    IntMatrix a2;
    HalfIntegralSym b1;
    IntMatrix b2;
};
GaussInstance parse_gauss_instance(const std::string& text);

/// Keys: kind, p, k, then the matrices the kind needs (t, q, d) or the
/// scalars a, b, c for the quadratic congruence.
struct CountSpec {
    EquationKind kind;
    CountInstance inst;
};
CountSpec parse_count_instance(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace sks
