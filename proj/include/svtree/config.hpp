#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "svtree/backward.hpp"
#include "svtree/lattice.hpp"
#include "svtree/model.hpp"
#include "svtree/oracles.hpp"
#include "svtree/payoff.hpp"
#include "svtree/simulate.hpp"

namespace svtree {

enum class Engine { Backward, TreeMC, EulerMC, ClosedForm };

// One pricing request, assembled from a flat key=value file plus command-line
// overrides. Everything is validated in finalize(), which names the offending
// field on failure.
struct RunConfig {
    std::map<std::string, std::string> kv;

    void set(const std::string& key, const std::string& value) { kv[key] = value; }

    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw std::invalid_argument("config: expected key=value, got '" + line +
                                                "'");
                continue;
            }
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }

    std::string render() const {
        std::ostringstream os;
        for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
        return os.str();
    }
};

// Fully validated request ready to dispatch.
struct ResolvedRun {
    HestonParams params;
    PayoffSpec payoff;
    Engine engine;
    TruncationMode truncation = TruncationMode::Prob;
    int n = 200;
    long long paths = 100000;
    std::uint64_t seed = 0;
    int workers = 0;
    std::optional<std::string> out_path;
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::invalid_argument("config field '" + key + "': not a number: '" + v + "'");
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::invalid_argument("config field '" + key + "': not an integer: '" + v + "'");
    }
}

}  // namespace detail

inline ResolvedRun resolve_config(const RunConfig& cfg) {
    static const std::map<std::string, int> known = {
        {"s0", 0},     {"v0", 0},     {"sqrt_v0", 0}, {"r", 0},      {"kappa", 0},
        {"theta", 0},  {"eta", 0},    {"rho", 0},   {"kind", 0},     {"exercise", 0},
        {"strike", 0}, {"maturity", 0}, {"engine", 0}, {"n", 0},     {"paths", 0},
        {"seed", 0},   {"truncation", 0}, {"out", 0}, {"workers", 0},
    };
    for (const auto& [k, v] : cfg.kv)
        if (!known.count(k)) throw std::invalid_argument("config field '" + k + "' is unknown");

    auto need = [&](const std::string& key) -> const std::string& {
        const auto it = cfg.kv.find(key);
        if (it == cfg.kv.end())
            throw std::invalid_argument("config field '" + key + "' is required");
        return it->second;
    };
    auto get_or = [&](const std::string& key, const std::string& dflt) {
        const auto it = cfg.kv.find(key);
        return it == cfg.kv.end() ? dflt : it->second;
    };

    const double s0 = detail::parse_double("s0", need("s0"));
    double v0;
    if (cfg.kv.count("v0")) {
        v0 = detail::parse_double("v0", need("v0"));
        if (cfg.kv.count("sqrt_v0"))
            throw std::invalid_argument("config: give either 'v0' or 'sqrt_v0', not both");
    } else {
        const double sv = detail::parse_double("sqrt_v0", need("sqrt_v0"));
        v0 = sv * sv;
    }
    const HestonParams params(s0, v0, detail::parse_double("r", need("r")),
                              detail::parse_double("kappa", need("kappa")),
                              detail::parse_double("theta", need("theta")),
                              detail::parse_double("eta", need("eta")),
                              detail::parse_double("rho", need("rho")));

    const std::string kind_s = get_or("kind", "put");
    PayoffKind kind;
    if (kind_s == "put") kind = PayoffKind::Put;
    else if (kind_s == "call") kind = PayoffKind::Call;
    else if (kind_s == "lookback-put") kind = PayoffKind::LookbackFixedStrikePut;
    else if (kind_s == "lookback-call") kind = PayoffKind::LookbackFixedStrikeCall;
    else if (kind_s == "asian-geometric") kind = PayoffKind::AsianGeometricCall;
    else if (kind_s == "asian-arithmetic") kind = PayoffKind::AsianArithmeticCall;
    else throw std::invalid_argument("config field 'kind': unknown payoff '" + kind_s + "'");

    const std::string ex_s = get_or("exercise", "european");
    Exercise exercise;
    if (ex_s == "european") exercise = Exercise::European;
    else if (ex_s == "american") exercise = Exercise::American;
    else throw std::invalid_argument("config field 'exercise': '" + ex_s + "'");

    const PayoffSpec payoff(kind, exercise, detail::parse_double("strike", need("strike")),
                            detail::parse_double("maturity", need("maturity")));

    const std::string engine_s = get_or("engine", "backward");
    Engine engine;
    if (engine_s == "backward") engine = Engine::Backward;
    else if (engine_s == "tree-mc") engine = Engine::TreeMC;
    else if (engine_s == "euler-mc") engine = Engine::EulerMC;
    else if (engine_s == "closed-form") engine = Engine::ClosedForm;
    else throw std::invalid_argument("config field 'engine': unknown engine '" + engine_s + "'");

    const std::string trunc_s = get_or("truncation", "prob");
    TruncationMode truncation;
    if (trunc_s == "prob") truncation = TruncationMode::Prob;
    else if (trunc_s == "alpha") truncation = TruncationMode::Alpha;
    else throw std::invalid_argument("config field 'truncation': '" + trunc_s + "'");

    ResolvedRun run{params, payoff, engine, truncation};
    run.n = static_cast<int>(detail::parse_int("n", get_or("n", "200")));
    run.paths = detail::parse_int("paths", get_or("paths", "100000"));
    run.seed = static_cast<std::uint64_t>(detail::parse_int("seed", get_or("seed", "0")));
    run.workers = static_cast<int>(detail::parse_int("workers", get_or("workers", "0")));
    if (cfg.kv.count("out")) run.out_path = cfg.kv.at("out");
    if (run.n < 1) throw std::invalid_argument("config field 'n' must be >= 1");

    // engine/payoff compatibility
    switch (engine) {
        case Engine::ClosedForm:
            if (!is_vanilla(kind) || exercise != Exercise::European)
                throw std::invalid_argument(
                    "config field 'engine': closed-form prices European vanillas only");
            break;
        case Engine::Backward:
            if (is_asian(kind))
                throw std::invalid_argument(
                    "config field 'engine': backward recursion does not price Asian payoffs; "
                    "use tree-mc");
            if (kind == PayoffKind::LookbackFixedStrikeCall)
                throw std::invalid_argument(
                    "config field 'engine': the augmented recursion covers the lookback put; "
                    "use tree-mc for the call");
            break;
        case Engine::TreeMC:
        case Engine::EulerMC:
            if (exercise != Exercise::European)
                throw std::invalid_argument(
                    "config field 'exercise': simulation engines are European-only");
            break;
    }
    return run;
}

// Dispatch a resolved request to the right engine.
inline PriceEstimate run_price(const ResolvedRun& run) {
    McOptions mc;
    mc.num_workers = run.workers;
    switch (run.engine) {
        case Engine::ClosedForm:
            return exact_estimate(heston_closed_form(run.payoff, run.params));
        case Engine::Backward: {
            const GridSpec g(run.params, run.payoff.maturity, run.n, run.truncation);
            return is_lookback(run.payoff.kind)
                       ? price_lookback_backward(run.payoff, g, run.params)
                       : price_vanilla(run.payoff, g, run.params);
        }
        case Engine::TreeMC: {
            const GridSpec g(run.params, run.payoff.maturity, run.n, run.truncation);
            return simulate_price(run.payoff, g, run.params, run.paths, run.seed, mc);
        }
        case Engine::EulerMC:
            return euler_mc(run.payoff, run.params, run.n, run.paths, run.seed, mc);
    }
    throw std::logic_error("run_price: unreachable");
}

}  // namespace svtree
