#include "sks/instance_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace sks {

namespace {

struct Token {
    std::string text;
    int line, col;
};

std::vector<std::vector<Token>> tokenize(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    std::istringstream is(text);
    std::string line;
    int ln = 0;
    while (std::getline(is, line)) {
        ++ln;
        std::vector<Token> toks;
        size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) { ++i; continue; }
            if (line[i] == '#') break;
            size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            toks.push_back({line.substr(i, j - i), ln, static_cast<int>(i + 1)});
            i = j;
        }
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    return lines;
}

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

struct Parser {
    std::vector<std::vector<Token>> lines;
    size_t pos = 0;

    bool done() const { return pos >= lines.size(); }
    const std::vector<Token>& peek() const { return lines[pos]; }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.col, msg); }

    std::string expect_key() {
        if (done()) throw ParseError(static_cast<int>(lines.size()) + 1, 1, "unexpected end of input");
        const Token& t = peek().front();
        if (is_integer(t.text)) fail(t, "expected a field name");
        return t.text;
    }

    i64 key_scalar(const std::string& key) {
        const auto& l = peek();
        if (l.size() != 2 || !is_integer(l[1].text)) fail(l.front(), "expected '" + key + " <integer>'");
        ++pos;
        return std::stoll(l[1].text);
    }

    IntMatrix matrix(int rows, int cols) {
        ++pos; // consume the key line
        IntMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i) {
            if (done()) throw ParseError(static_cast<int>(lines.size()) + 1, 1, "matrix row missing");
            const auto& l = peek();
            if (static_cast<int>(l.size()) != cols) fail(l.front(), "expected " + std::to_string(cols) + " entries");
            for (int j = 0; j < cols; ++j) {
                if (!is_integer(l[static_cast<size_t>(j)].text)) fail(l[static_cast<size_t>(j)], "expected an integer");
                m.at(i, j) = mpz_class(l[static_cast<size_t>(j)].text);
            }
            ++pos;
        }
        return m;
    }
};

} // namespace

KsInstance parse_ks_instance(const std::string& text) {
    Parser ps{tokenize(text)};
    int n = -1;
    IntMatrix c;
    bool have_c = false, have_q = false, have_t = false;
    HalfIntegralSym q, t;
    while (!ps.done()) {
        std::string key = ps.expect_key();
        const Token& kt = ps.peek().front();
        if (key == "n") {
            n = static_cast<int>(ps.key_scalar("n"));
            if (n <= 0) ps.fail(kt, "n must be positive");
        } else if (key == "c" || key == "qdoubled" || key == "tdoubled") {
            if (n < 0) ps.fail(kt, "n must come before matrices");
            IntMatrix m = ps.matrix(n, n);
            if (key == "c") { c = m; have_c = true; }
            else if (key == "qdoubled") {
                try { q = HalfIntegralSym(m); } catch (const InputError& e) { ps.fail(kt, e.what()); }
                have_q = true;
            } else {
                try { t = HalfIntegralSym(m); } catch (const InputError& e) { ps.fail(kt, e.what()); }
                have_t = true;
            }
        } else {
            ps.fail(kt, "unknown field '" + key + "'");
        }
    }
    if (n < 0) throw ParseError(1, 1, "missing field 'n'");
    if (!have_c) throw ParseError(1, 1, "missing field 'c'");
    if (!have_q) q = HalfIntegralSym::zero(n);
    if (!have_t) t = HalfIntegralSym::zero(n);
    return {c, q, t};
}

GaussInstance parse_gauss_instance(const std::string& text) {
    Parser ps{tokenize(text)};
    GaussInstance g;
    bool have_a = false, have_b1 = false, have_b2 = false;
    while (!ps.done()) {
        std::string key = ps.expect_key();
        const Token& kt = ps.peek().front();
        if (key == "p") g.p = ps.key_scalar("p");
        else if (key == "s") g.s = static_cast<int>(ps.key_scalar("s"));
        else if (key == "n") g.n = static_cast<int>(ps.key_scalar("n"));
        else if (key == "adoubled") {
            if (g.n <= 0 || g.s <= 0 || g.s >= g.n) ps.fail(kt, "p, s, n must come first with 0 < s < n");
            g.a2 = ps.matrix(g.n - g.s, g.s);
            have_a = true;
        } else if (key == "b1doubled") {
            if (g.n <= 0 || g.s <= 0 || g.s >= g.n) ps.fail(kt, "p, s, n must come first with 0 < s < n");
            try { g.b1 = HalfIntegralSym(ps.matrix(g.n - g.s, g.n - g.s)); }
            catch (const InputError& e) { ps.fail(kt, e.what()); }
            have_b1 = true;
        } else if (key == "b2") {
            if (g.s <= 0) ps.fail(kt, "p, s, n must come first");
            g.b2 = ps.matrix(g.s, g.s);
            have_b2 = true;
        } else ps.fail(kt, "unknown field '" + key + "'");
    }
    if (g.p < 2 || !have_a || !have_b1 || !have_b2) throw ParseError(1, 1, "gauss instance needs p, s, n, adoubled, b1doubled, b2");
    return g;
}

CountSpec parse_count_instance(const std::string& text) {
    Parser ps{tokenize(text)};
    CountSpec spec;
    static const std::map<std::string, EquationKind> kinds = {
        {"uq", EquationKind::UQ_eq_T},
        {"symuq", EquationKind::SymUQ_eq_T},
        {"udut", EquationKind::UDUt_eq_T},
        {"symudu", EquationKind::SymUDU_eq_T},
        {"qut_uqt", EquationKind::QUt_plus_UQt_eq_T},
        {"quad2", EquationKind::QuadScalarMod2},
    };
    bool have_kind = false;
    std::map<std::string, std::pair<int, int>> dims; // key -> rows, cols (filled lazily)
    while (!ps.done()) {
        std::string key = ps.expect_key();
        const Token& kt = ps.peek().front();
        if (key == "kind") {
            const auto& l = ps.peek();
            if (l.size() != 2) ps.fail(kt, "expected 'kind <name>'");
            auto it = kinds.find(l[1].text);
            if (it == kinds.end()) ps.fail(l[1], "unknown kind '" + l[1].text + "'");
            spec.kind = it->second;
            have_kind = true;
            ++ps.pos;
        } else if (key == "p") spec.inst.p = ps.key_scalar("p");
        else if (key == "k") spec.inst.k = static_cast<int>(ps.key_scalar("k"));
        else if (key == "a") spec.inst.a = ps.key_scalar("a");
        else if (key == "b") spec.inst.b = ps.key_scalar("b");
        else if (key == "cc") spec.inst.c = ps.key_scalar("cc");
        else if (key == "t" || key == "q" || key == "d") {
            const auto& l = ps.peek();
            if (l.size() != 3 || !is_integer(l[1].text) || !is_integer(l[2].text))
                ps.fail(kt, "expected '" + key + " <rows> <cols>' then the rows");
            int r = std::stoi(l[1].text), cdim = std::stoi(l[2].text);
            IntMatrix m = ps.matrix(r, cdim);
            if (key == "t") spec.inst.t = m;
            else if (key == "q") spec.inst.q = m;
            else spec.inst.d = m;
        } else ps.fail(kt, "unknown field '" + key + "'");
    }
    if (!have_kind || spec.inst.p < 2 || spec.inst.k < 1)
        throw ParseError(1, 1, "count instance needs kind, p, k");
    return spec;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot open file: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write file: " + path);
    os << content;
}

} // namespace sks
