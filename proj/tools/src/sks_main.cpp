#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <thread>

#include "sks/verify_suites.hpp"

using namespace sks;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBudget = 3;

int default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

IntMatrix parse_inline_matrix(const std::string& text) {
    // rows separated by ';', entries by spaces or commas
    std::vector<std::vector<mpz_class>> rows;
    std::string row;
    std::istringstream is(text);
    while (std::getline(is, row, ';')) {
        for (auto& ch : row)
            if (ch == ',') ch = ' ';
        std::istringstream rs(row);
        std::vector<mpz_class> vals;
        std::string tok;
        while (rs >> tok) vals.emplace_back(tok);
        if (!vals.empty()) rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw InputError("empty matrix");
    IntMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw InputError("ragged matrix");
        for (size_t j = 0; j < rows[i].size(); ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return m;
}

int cmd_compute(const std::string& path, int workers, i64 budget) {
    KsInstance inst = parse_ks_instance(read_file(path));
    if (det_exact(inst.c) == 0) {
        std::cerr << "singular modulus\n";
        return kExitInputError;
    }
    PhaseSum k = ks(inst.q, inst.t, inst.c, workers, budget);
    KsEvaluator ev(inst.c, budget);
    NormalizedInstance ni = normalize(inst.c, inst.q, inst.t);
    std::cout << "denominator " << k.denom() << "\n";
    std::cout << "terms " << k.mass() << "\n";
    std::cout << "nonzero_phases";
    int shown = 0;
    for (i64 i = 0; i < k.denom() && shown < 24; ++i)
        if (k.counts()[static_cast<size_t>(i)] != 0) {
            std::cout << " " << i << ":" << k.counts()[static_cast<size_t>(i)];
            ++shown;
        }
    std::cout << "\n";
    auto v = k.value();
    std::printf("value %.12g %+.12gi\n", v.real(), v.imag());
    std::printf("magnitude %.12g\n", k.magnitude());
    std::cout << "classes " << ev.class_count() << "\n";
    std::cout << "trivial_bound " << trivial_bound(ni.c).get_str() << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite, i64 budget) {
    std::vector<std::string> names = suite.empty() || suite == "all" ? suite_names() : std::vector<std::string>{suite};
    bool all_ok = true;
    for (const auto& name : names) {
        SuiteResult r = run_suite(name, budget);
        std::printf("%-16s %s  (%ld checks)%s%s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.checked,
                    r.detail.empty() ? "" : "  ", r.detail.c_str());
        all_ok = all_ok && r.passed;
    }
    return all_ok ? kExitOk : kExitVerifyFailed;
}

SweepSpec sweep_spec_from_json(const json& j) {
    SweepSpec spec;
    auto need = [&](const char* field) {
        if (!j.contains(field)) throw InputError(std::string("config field missing: /") + field);
        return j.at(field);
    };
    try {
        spec.n = need("n").get<int>();
    } catch (const json::exception&) {
        throw InputError("config field invalid: /n (expected integer)");
    }
    try {
        spec.primes = need("primes").get<std::vector<i64>>();
    } catch (const json::exception&) {
        throw InputError("config field invalid: /primes (expected integer array)");
    }
    try {
        spec.sigmas = need("sigmas").get<std::vector<std::vector<int>>>();
    } catch (const json::exception&) {
        throw InputError("config field invalid: /sigmas (expected array of integer arrays)");
    }
    for (size_t i = 0; i < spec.sigmas.size(); ++i)
        if (static_cast<int>(spec.sigmas[i].size()) != spec.n)
            throw InputError("config field invalid: /sigmas/" + std::to_string(i) + " (length must equal n)");
    try {
        spec.radius = need("radius").get<int>();
    } catch (const json::exception&) {
        throw InputError("config field invalid: /radius (expected integer)");
    }
    try {
        spec.bounds = need("bounds").get<std::vector<std::string>>();
    } catch (const json::exception&) {
        throw InputError("config field invalid: /bounds (expected string array)");
    }
    if (j.contains("epsilon")) {
        try {
            spec.eps = j.at("epsilon").get<double>();
        } catch (const json::exception&) {
            throw InputError("config field invalid: /epsilon (expected number)");
        }
    }
    return spec;
}

int cmd_sweep(const std::string& config_path, int workers, i64 budget, double epsilon, bool eps_set,
              const std::string& out_path) {
    json j;
    try {
        j = json::parse(read_file(config_path));
    } catch (const json::exception& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return kExitInputError;
    }
    SweepSpec spec = sweep_spec_from_json(j);
    spec.workers = workers;
    spec.budget = budget;
    if (eps_set) spec.eps = epsilon;
    auto rows = ratio_report(spec);
    emit(out_path, sweep_csv(spec, rows));
    return kExitOk;
}

int cmd_equi(const std::string& c0_text, i64 m_from, i64 m_to, const std::string& m_list, int radius,
             int workers, i64 budget, const std::string& out_path) {
    IntMatrix c0 = parse_inline_matrix(c0_text);
    if (det_exact(c0) == 0) {
        std::cerr << "singular modulus\n";
        return kExitInputError;
    }
    if (radius < 1) {
        std::cerr << "empty frequency box\n";
        return kExitInputError;
    }
    std::vector<i64> ms;
    if (!m_list.empty()) {
        std::istringstream is(m_list);
        std::string tok;
        while (std::getline(is, tok, ',')) ms.push_back(std::stoll(tok));
    } else {
        for (i64 m = m_from; m <= m_to; ++m) ms.push_back(m);
    }
    if (ms.empty()) {
        std::cerr << "empty m range\n";
        return kExitInputError;
    }
    auto rows = decay_experiment(c0, ms, radius, workers, budget);
    emit(out_path, decay_csv(c0, radius, rows));
    return kExitOk;
}

int cmd_gauss(const std::string& path, i64 budget) {
    GaussInstance g = parse_gauss_instance(read_file(path));
    PhaseSum sum = gauss_G(g.a2, g.b1, g.b2, g.p, budget);
    auto v = sum.value();
    std::printf("value %.12g %+.12gi\n", v.real(), v.imag());
    std::printf("magnitude %.12g\n", sum.magnitude());
    int s = g.s, ns = g.n - g.s;
    std::printf("unit_regime_bound %.12g\n", std::pow(static_cast<double>(g.p), s * ns / 2.0));
    std::printf("generic_regime_bound %.12g\n", std::pow(static_cast<double>(g.p), s * (ns - 0.5)));
    return kExitOk;
}

int cmd_count(const std::string& path, i64 budget) {
    CountSpec spec = parse_count_instance(read_file(path));
    EquationCount ec = count_solutions(spec.kind, spec.inst, budget);
    std::cout << "instance " << ec.instance << "\n";
    std::cout << "count " << ec.count << "\n";
    std::printf("bound %.12g\n", ec.bound);
    if (ec.bound_alt > 0) std::printf("bound_alt %.12g\n", ec.bound_alt);
    std::printf("ratio %.12g\n", ec.bound > 0 ? static_cast<double>(ec.count) / ec.bound : 0.0);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symplectic Kloosterman sums: evaluation, identity suites, bound sweeps"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    int workers = default_workers();
    i64 budget = kDefaultBudget;
    app.add_option("--workers", workers, "worker threads (results are identical for any value)");
    app.add_option("--budget", budget, "max enumeration candidates per operation");

    std::string in_path, out_path, suite = "all", config_path, c0_text = "1", m_list;
    i64 m_from = 2, m_to = 9;
    int radius = 2;
    double epsilon = 0.0;

    auto* compute = app.add_subcommand("compute", "evaluate one instance file exactly");
    compute->add_option("instance", in_path, "instance file")->required();

    auto* verify = app.add_subcommand("verify", "run a named identity suite");
    verify->add_option("--suite", suite, "snf|factorization|symmetry|taylor|blockdecomp|common_divisor|char_sums|gauss|counts|p2|all");

    auto* sweep = app.add_subcommand("sweep", "bound-ratio sweep from a JSON config");
    sweep->add_option("config", config_path, "JSON config")->required();
    sweep->add_option("--out", out_path, "output CSV path (stdout if omitted)");
    auto* eps_opt = sweep->add_option("--epsilon", epsilon, "epsilon for the composite-modulus bound (overrides the config)");

    auto* equi = app.add_subcommand("equi", "equidistribution decay experiment");
    equi->add_option("--c0", c0_text, "base modulus, rows separated by ';' (default 1x1 identity)");
    equi->add_option("--m-from", m_from, "first multiplier");
    equi->add_option("--m-to", m_to, "last multiplier");
    equi->add_option("--m-list", m_list, "comma-separated multipliers (overrides the range)");
    equi->add_option("--radius", radius, "frequency box radius");
    equi->add_option("--out", out_path, "output CSV path");
    equi->add_option("--epsilon", epsilon, "unused here; accepted for config uniformity");

    auto* gauss = app.add_subcommand("gauss", "evaluate a matrix Gauss sum instance");
    gauss->add_option("instance", in_path, "gauss instance file")->required();

    auto* count = app.add_subcommand("count", "exhaustive solution count for a matrix equation");
    count->add_option("instance", in_path, "count instance file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) return cmd_compute(in_path, workers, budget);
        if (verify->parsed()) return cmd_verify(suite, budget);
        if (sweep->parsed()) return cmd_sweep(config_path, workers, budget, epsilon, eps_opt->count() > 0, out_path);
        if (equi->parsed()) return cmd_equi(c0_text, m_from, m_to, m_list, radius, workers, budget, out_path);
        if (gauss->parsed()) return cmd_gauss(in_path, budget);
        if (count->parsed()) return cmd_count(in_path, budget);
    } catch (const BudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        return kExitBudget;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInputError;
    } catch (const InputError& e) {
        std::cerr << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}
