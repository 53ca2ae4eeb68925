#pragma once

#include <cstdio>
#include <optional>
#include <string>

#include "svtree/payoff.hpp"

namespace svtree {

// One output row of the pricing tools. Absent fields render as empty cells;
// the column order is fixed and a header is always written.
struct CsvRow {
    std::optional<int> table_id;
    std::optional<double> s0;
    std::optional<double> sqrt_v0;
    std::optional<double> maturity;
    std::optional<double> strike;
    std::optional<double> rho;
    std::string engine;
    std::optional<int> n;
    std::optional<long long> paths;
    PriceEstimate est;
    std::optional<double> reference;
    std::optional<double> error_pct;
};

inline const char* csv_header() {
    return "table_id,S0,sqrt_v0,T,K,rho,engine,n,paths,price,std_err,ci_lo,ci_hi,"
           "reference,error_pct,price_full";
}

namespace detail {
inline std::string fmt4(std::optional<double> v) {
    if (!v) return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return buf;
}
inline std::string fmtg(std::optional<double> v) {
    if (!v) return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", *v);
    return buf;
}
}  // namespace detail

inline std::string csv_line(const CsvRow& r) {
    using detail::fmt4;
    using detail::fmtg;
    std::string out;
    auto add = [&out](const std::string& field) {
        out += field;
        out += ',';
    };
    add(r.table_id ? std::to_string(*r.table_id) : "");
    add(fmtg(r.s0));
    add(fmtg(r.sqrt_v0));
    add(fmtg(r.maturity));
    add(fmtg(r.strike));
    add(fmtg(r.rho));
    add(r.engine);
    add(r.n ? std::to_string(*r.n) : "");
    add(r.paths ? std::to_string(*r.paths) : "");
    add(fmt4(r.est.price));
    add(fmt4(r.est.std_error ? std::optional<double>(*r.est.std_error) : std::nullopt));
    add(fmt4(r.est.ci95 ? std::optional<double>(r.est.ci95->first) : std::nullopt));
    add(fmt4(r.est.ci95 ? std::optional<double>(r.est.ci95->second) : std::nullopt));
    add(fmt4(r.reference));
    add(fmt4(r.error_pct));
    char full[64];
    std::snprintf(full, sizeof full, "%.17g", r.est.price);
    out += full;
    return out;
}

}  // namespace svtree
