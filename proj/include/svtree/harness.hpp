#pragma once

// Benchmark-table reproduction and the acceptance checks behind `svtree check`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "svtree/backward.hpp"
#include "svtree/benchmarks.hpp"
#include "svtree/csv.hpp"
#include "svtree/oracles.hpp"
#include "svtree/simulate.hpp"
#include "svtree/testing.hpp"

namespace svtree::harness {

enum class Scale { Full, Desk };

struct RunSettings {
    std::uint64_t seed = 0;
    McOptions mc;
};

struct TableCell {
    CsvRow row;
    bool pass = true;
};

struct TableRun {
    int table_id = 0;
    Scale scale = Scale::Full;
    std::vector<TableCell> cells;
    bool pass = true;
    std::string summary;
};

namespace detail {

inline double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

inline double pct(double value, double reference) {
    return 100.0 * (value - reference) / reference;
}

inline std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

inline bool intervals_overlap(double a_lo, double a_hi, double b_lo, double b_hi) {
    return a_lo <= b_hi && b_lo <= a_hi;
}

}  // namespace detail

// ---- table reproduction ----------------------------------------------------

inline TableRun reproduce_vanilla_table(int id, Scale scale) {
    const bool puts = id == 1;
    const auto& rows = puts ? bench::kEuropeanPuts : bench::kEuropeanCalls;
    const std::vector<int> ns = scale == Scale::Full ? std::vector<int>{200, 350, 500}
                                                     : std::vector<int>{200};
    TableRun run{id, scale, {}, true, ""};
    double worst = 0.0;
    for (const auto& r : rows) {
        const auto params = bench::vanilla_model(r.s0, r.sqrt_v0);
        const PayoffSpec po(puts ? PayoffKind::Put : PayoffKind::Call, Exercise::European,
                            100.0, r.maturity);
        for (int n : ns) {
            const GridSpec g(params, r.maturity, n, TruncationMode::Prob);
            const double price = price_vanilla(po, g, params).price;
            const double err = detail::pct(price, r.reference);
            // loose gate for the coarsest call column where tiny prices make
            // percentages noisy; the published worst cell there is 1.13%
            const double tol = (id == 2 && n == 200) ? 1.5 : 0.6;
            TableCell cell;
            cell.row = CsvRow{id,     r.s0,          r.sqrt_v0, r.maturity, 100.0, -0.7,
                              "backward", n,         {},        exact_estimate(price),
                              r.reference, err};
            cell.pass = std::abs(err) <= tol;
            run.pass &= cell.pass;
            if (n >= 350 || id == 1) worst = std::max(worst, std::abs(err));
            run.cells.push_back(std::move(cell));
        }
    }
    run.summary = detail::fmt("max |error%%| %.3f (gate 0.6, call column at n=200 gated 1.5)",
                              worst);
    return run;
}

inline TableRun reproduce_american_table(Scale scale) {
    TableRun run{3, scale, {}, true, ""};
    double worst = 0.0, sum = 0.0;
    for (const auto& r : bench::kAmericanPuts) {
        const auto params = bench::vanilla_model(r.s0, r.sqrt_v0, r.rho);
        const PayoffSpec po(PayoffKind::Put, Exercise::American, 100.0, r.maturity);
        const GridSpec g(params, r.maturity, 250, TruncationMode::Prob);
        const double price = price_vanilla(po, g, params).price;
        const double err = detail::pct(price, r.reference);
        worst = std::max(worst, std::abs(err));
        sum += std::abs(err);
        TableCell cell;
        cell.row = CsvRow{3,     r.s0,       r.sqrt_v0, r.maturity, 100.0, r.rho,
                          "backward", 250,   {},        exact_estimate(price),
                          r.reference, err};
        cell.pass = std::abs(err) <= 0.35;
        run.pass &= cell.pass;
        run.cells.push_back(std::move(cell));
    }
    const double mean = sum / bench::kAmericanPuts.size();
    run.pass &= mean <= 0.2;
    run.summary = detail::fmt("max |diff%%| %.3f (gate 0.35), mean %.3f (gate 0.20)", worst,
                              mean);
    return run;
}

inline TableRun reproduce_fd_table(int id, Scale scale) {
    const auto& bench_row = bench::kFdAmericanPuts[id == 4 ? 0 : 1];
    const std::vector<int> ns = scale == Scale::Full ? std::vector<int>{150, 250, 350}
                                                     : std::vector<int>{350};
    TableRun run{id, scale, {}, true, ""};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double s0 = 8.0 + i;
        const auto params = bench::fd_model(s0, bench_row.sqrt_v0);
        const PayoffSpec po(PayoffKind::Put, Exercise::American, 10.0, 0.25);
        for (int n : ns) {
            const GridSpec g(params, 0.25, n, TruncationMode::Prob);
            const double price = price_vanilla(po, g, params).price;
            const double dev = price - bench_row.reference[i];
            TableCell cell;
            cell.row = CsvRow{id,     s0,          bench_row.sqrt_v0, 0.25, 10.0, 0.1,
                              "backward", n,       {},   exact_estimate(price),
                              bench_row.reference[i], detail::pct(price, bench_row.reference[i])};
            cell.pass = n != 350 || std::abs(dev) <= 0.01;
            if (n == 350) worst = std::max(worst, std::abs(dev));
            run.pass &= cell.pass;
            run.cells.push_back(std::move(cell));
        }
    }
    run.summary = detail::fmt("max |price - reference| %.4f at n=350 (gate 0.01)", worst);
    return run;
}

inline TableRun reproduce_asian_table(int id, Scale scale, const RunSettings& rs) {
    // id 6 gates on the semi-closed value lying inside our interval; id 7 on
    // our interval overlapping the published one
    const long long paths = scale == Scale::Full ? 100000 : 10000;
    TableRun run{id, scale, {}, true, ""};
    const auto params = bench::asian_model();
    int misses = 0;
    for (const auto& r : bench::kGeometricAsians) {
        const PayoffSpec po(PayoffKind::AsianGeometricCall, Exercise::European, r.strike,
                            r.maturity);
        const GridSpec g(params, r.maturity, 300, TruncationMode::Prob);
        // same pinned seed offset as the acceptance criterion
        const auto est = simulate_price(po, g, params, paths, rs.seed + 2, rs.mc);
        const bool ok = id == 6 ? (est.ci95->first <= r.reference &&
                                   r.reference <= est.ci95->second)
                                : detail::intervals_overlap(est.ci95->first, est.ci95->second,
                                                            r.ci_lo, r.ci_hi);
        misses += ok ? 0 : 1;
        TableCell cell;
        cell.row = CsvRow{id,      100.0, 0.3,  r.maturity, r.strike, -0.64,
                          "tree-mc", 300, paths, est,       r.reference,
                          detail::pct(est.price, r.reference)};
        cell.pass = ok;
        run.pass &= ok;
        run.cells.push_back(std::move(cell));
    }
    run.summary = std::to_string(35 - misses) + " of 35 intervals " +
                  (id == 6 ? "contain the semi-closed value" : "overlap the published interval");
    return run;
}

inline TableRun reproduce_arithmetic_table(Scale scale, const RunSettings& rs) {
    const long long paths = scale == Scale::Full ? 1000000 : 100000;
    TableRun run{8, scale, {}, true, ""};
    const auto params = bench::arithmetic_model();
    int misses = 0;
    for (const auto& r : bench::kArithmeticAsians) {
        const PayoffSpec po(PayoffKind::AsianArithmeticCall, Exercise::European, r.strike, 1.0);
        const GridSpec g(params, 1.0, 300, TruncationMode::Prob);
        const auto est = simulate_price(po, g, params, paths, rs.seed, rs.mc);
        // the reference column is itself Monte-Carlo; gate on our interval
        // touching a half-percent band around it
        const bool ok = detail::intervals_overlap(est.ci95->first, est.ci95->second,
                                                  r.reference * 0.995, r.reference * 1.005);
        misses += ok ? 0 : 1;
        TableCell cell;
        cell.row = CsvRow{8,      50.0,  0.1,  1.0,  r.strike, 0.5,
                          "tree-mc", 300, paths, est, r.reference,
                          detail::pct(est.price, r.reference)};
        cell.pass = ok;
        run.pass &= ok;
        run.cells.push_back(std::move(cell));
    }
    run.summary = std::to_string(13 - misses) + " of 13 intervals reach the half-percent reference band";
    return run;
}

inline TableRun reproduce_lookback_table(Scale scale, const RunSettings& rs) {
    const int n = scale == Scale::Full ? 3000 : 500;
    const long long paths = scale == Scale::Full ? 100000 : 10000;
    TableRun run{9, scale, {}, true, ""};
    const auto params = bench::lookback_model();
    double worst = 0.0;
    int misses = 0;
    for (const auto& r : bench::kLookbackCalls) {
        const PayoffSpec po(PayoffKind::LookbackFixedStrikeCall, Exercise::European, r.strike,
                            r.maturity);
        const GridSpec g(params, r.maturity, n, TruncationMode::Prob);
        const auto tree = simulate_price(po, g, params, paths, rs.seed, rs.mc);
        bool ok = true;
        if (scale == Scale::Full) {
            const double err = detail::pct(tree.price, r.euler_price);
            worst = std::max(worst, std::abs(err));
            ok = std::abs(err) <= 1.5;
        }
        const auto euler = euler_mc(po, params, n, paths, rs.seed + 1, rs.mc);
        if (scale == Scale::Desk)
            ok = detail::intervals_overlap(tree.ci95->first, tree.ci95->second,
                                           euler.ci95->first, euler.ci95->second);
        misses += ok ? 0 : 1;
        TableCell tc;
        tc.row = CsvRow{9,      100.0, 0.4,  r.maturity, r.strike, -0.7,
                        "tree-mc", n, paths, tree,      r.euler_price,
                        detail::pct(tree.price, r.euler_price)};
        tc.pass = ok;
        run.pass &= ok;
        run.cells.push_back(std::move(tc));
        TableCell ec;
        ec.row = CsvRow{9,       100.0, 0.4,  r.maturity, r.strike, -0.7,
                        "euler-mc", n, paths, euler,     r.euler_price,
                        detail::pct(euler.price, r.euler_price)};
        run.cells.push_back(std::move(ec));
    }
    run.summary = scale == Scale::Full
                      ? detail::fmt("max |diff%%| vs published Euler %.3f (gate 1.5)", worst)
                      : std::to_string(35 - misses) +
                            " of 35 tree intervals overlap the fresh Euler intervals";
    return run;
}

inline TableRun reproduce_table(int table_id, Scale scale, const RunSettings& rs = {}) {
    switch (table_id) {
        case 1:
        case 2: return reproduce_vanilla_table(table_id, scale);
        case 3: return reproduce_american_table(scale);
        case 4:
        case 5: return reproduce_fd_table(table_id, scale);
        case 6:
        case 7: return reproduce_asian_table(table_id, scale, rs);
        case 8: return reproduce_arithmetic_table(scale, rs);
        case 9: return reproduce_lookback_table(scale, rs);
        default: throw std::invalid_argument("reproduce_table: table id must be 1..9");
    }
}

inline void write_csv(const TableRun& run, std::ostream& os) {
    os << csv_header() << '\n';
    for (const auto& cell : run.cells) os << csv_line(cell.row) << '\n';
}

}  // namespace svtree::harness
