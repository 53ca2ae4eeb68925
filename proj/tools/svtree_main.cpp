// Command-line front end: `price` for one contract, `table` to regenerate a
// benchmark table as CSV, `check` to run the acceptance suite.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "svtree/acceptance.hpp"
#include "svtree/config.hpp"
#include "svtree/csv.hpp"
#include "svtree/harness.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> sets;
    std::string engine, truncation, out;
    int n = -1;
    long long paths = -1;
    long long seed = -1;
};

void apply_flags(svtree::RunConfig& cfg, const CommonFlags& f) {
    if (!f.config_path.empty()) cfg.load_file(f.config_path);
    for (const auto& kv : f.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!f.engine.empty()) cfg.set("engine", f.engine);
    if (!f.truncation.empty()) cfg.set("truncation", f.truncation);
    if (!f.out.empty()) cfg.set("out", f.out);
    if (f.n >= 0) cfg.set("n", std::to_string(f.n));
    if (f.paths >= 0) cfg.set("paths", std::to_string(f.paths));
    if (f.seed >= 0) cfg.set("seed", std::to_string(f.seed));
}

int do_price(const CommonFlags& flags) {
    svtree::RunConfig cfg;
    apply_flags(cfg, flags);
    const auto run = svtree::resolve_config(cfg);
    const auto est = svtree::run_price(run);

    std::printf("price %.6f\n", est.price);
    if (est.std_error) std::printf("std_error %.6f\n", *est.std_error);
    if (est.ci95) std::printf("ci95 [%.6f, %.6f]\n", est.ci95->first, est.ci95->second);
    if (est.num_paths) std::printf("paths %lld\n", *est.num_paths);

    if (run.out_path) {
        std::ofstream out(*run.out_path);
        if (!out) throw std::invalid_argument("cannot open output file '" + *run.out_path + "'");
        svtree::CsvRow row;
        row.s0 = run.params.s0;
        row.sqrt_v0 = std::sqrt(run.params.v0);
        row.maturity = run.payoff.maturity;
        row.strike = run.payoff.strike;
        row.rho = run.params.rho;
        row.engine = flags.engine.empty() ? cfg.kv.count("engine") ? cfg.kv.at("engine")
                                                                   : "backward"
                                          : flags.engine;
        row.n = run.n;
        if (est.num_paths) row.paths = *est.num_paths;
        row.est = est;
        out << svtree::csv_header() << '\n' << svtree::csv_line(row) << '\n';
    }
    return 0;
}

int do_table(int table_id, const std::string& scale_s, const std::string& out_path,
             long long seed) {
    using namespace svtree::harness;
    const Scale scale = scale_s == "full" ? Scale::Full : Scale::Desk;
    RunSettings rs;
    if (seed >= 0) rs.seed = static_cast<std::uint64_t>(seed);
    const TableRun run = reproduce_table(table_id, scale, rs);

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
        write_csv(run, out);
    } else {
        write_csv(run, std::cout);
    }
    std::fprintf(stderr, "table %d (%s): %s -> %s\n", table_id,
                 scale == Scale::Full ? "full" : "desk", run.summary.c_str(),
                 run.pass ? "PASS" : "FAIL");
    return run.pass ? 0 : 1;
}

int do_check(const std::string& scale_s, long long seed) {
    using namespace svtree::harness;
    const Scale scale = scale_s == "full" ? Scale::Full : Scale::Desk;
    RunSettings rs;
    if (seed >= 0) rs.seed = static_cast<std::uint64_t>(seed);
    const auto results = run_acceptance(scale, rs, &std::cout);
    int failures = 0;
    for (const auto& r : results) failures += r.pass ? 0 : 1;
    std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recombinant-tree pricing for the Heston model"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string scale = "desk";
    std::string table_out;
    int table_id = 1;
    long long cmd_seed = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path, "flat key=value configuration file");
        cmd->add_option("--set", flags.sets, "override one configuration key (key=value)");
        cmd->add_option("--engine", flags.engine)
            ->check(CLI::IsMember({"backward", "tree-mc", "euler-mc", "closed-form"}));
        cmd->add_option("--n", flags.n, "time steps");
        cmd->add_option("--paths", flags.paths, "Monte-Carlo paths");
        cmd->add_option("--seed", flags.seed, "Monte-Carlo seed");
        cmd->add_option("--truncation", flags.truncation)
            ->check(CLI::IsMember({"alpha", "prob"}));
        cmd->add_option("--out", flags.out, "CSV output path");
    };

    auto* price = app.add_subcommand("price", "price one contract");
    add_common(price);

    auto* table = app.add_subcommand("table", "regenerate one benchmark table");
    table->add_option("id", table_id, "table id (1..9)")->required()->check(CLI::Range(1, 9));
    table->add_option("--scale", scale)->check(CLI::IsMember({"full", "desk"}));
    table->add_option("--out", table_out, "CSV output path");
    table->add_option("--seed", cmd_seed, "Monte-Carlo seed");

    auto* check = app.add_subcommand("check", "run the acceptance suite");
    check->add_option("--scale", scale)->check(CLI::IsMember({"full", "desk"}));
    check->add_option("--seed", cmd_seed, "Monte-Carlo seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (price->parsed()) return do_price(flags);
        if (table->parsed()) return do_table(table_id, scale, table_out, cmd_seed);
        if (check->parsed()) return do_check(scale, cmd_seed);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
