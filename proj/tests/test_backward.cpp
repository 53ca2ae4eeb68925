#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <tuple>

#include "oracle_helpers.hpp"
#include "svtree/backward.hpp"

using namespace svtree;

namespace {

HestonParams table1_params(double s0, double sqrt_v0 = 0.2) {
    return HestonParams(s0, sqrt_v0 * sqrt_v0, 0.05, 3.0, 0.04, 0.1, -0.7);
}

// reference dynamic program straight off the node API, memoized on the chain
// state; slow but direct
double slow_dpp(const PayoffSpec& po, const GridSpec& g, const HestonParams& p) {
    std::map<std::tuple<int, int, int, int, int>, double> memo;
    const double disc = std::exp(-p.r * g.h);
    std::function<double(ChainState)> value = [&](ChainState s) -> double {
        const auto key = std::make_tuple(s.k, s.l, s.m, s.xi_x, s.xi_y);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const double stock = std::exp(x_hat(s, g, p));
        const double intrinsic = po.kind == PayoffKind::Put
                                     ? std::max(po.strike - stock, 0.0)
                                     : std::max(stock - po.strike, 0.0);
        double v;
        if (s.k == g.n) {
            v = intrinsic;
        } else {
            double cont = 0.0;
            for (const auto& [st, w] : successors(s, g, p)) cont += w * value(st);
            v = disc * cont;
            if (po.exercise == Exercise::American && intrinsic > v) v = intrinsic;
        }
        memo[key] = v;
        return v;
    };
    return value(ChainState{0, 0, 0, 0, 0});
}

}  // namespace

TEST_CASE("engine matches the node-level dynamic program", "[backward]") {
    const auto p = table1_params(100.0, 0.3);
    for (TruncationMode mode : {TruncationMode::Prob, TruncationMode::Alpha}) {
        const GridSpec g(p, 0.25, 12, mode);
        for (Exercise ex : {Exercise::European, Exercise::American}) {
            for (PayoffKind kind : {PayoffKind::Put, PayoffKind::Call}) {
                const PayoffSpec po(kind, ex, 100.0, 0.25);
                const double fast = price_vanilla(po, g, p).price;
                const double slow = slow_dpp(po, g, p);
                CHECK(fast == Catch::Approx(slow).margin(1e-12));
            }
        }
    }
}

TEST_CASE("European price equals full path enumeration", "[backward][oracle]") {
    for (int n : {1, 2, 5, 8}) {
        for (TruncationMode mode : {TruncationMode::Prob, TruncationMode::Alpha}) {
            const auto p = table1_params(100.0);
            const GridSpec g(p, 0.0833, n, mode);
            const testref::WalkPricer ref(p, 0.0833, n, mode);
            for (PayoffKind kind : {PayoffKind::Put, PayoffKind::Call}) {
                const PayoffSpec po(kind, Exercise::European, 100.0, 0.0833);
                const double tree = price_vanilla(po, g, p).price;
                const double brute = ref.enumerate_european(po);
                CHECK(tree == Catch::Approx(brute).margin(1e-12));
            }
        }
    }
}

TEST_CASE("American price equals exhaustive stopping-rule search", "[backward][oracle]") {
    for (int n : {1, 2, 4, 6}) {
        const auto p = table1_params(100.0, 0.4);
        const GridSpec g(p, 0.25, n, TruncationMode::Prob);
        const testref::WalkPricer ref(p, 0.25, n, TruncationMode::Prob);
        const PayoffSpec po(PayoffKind::Put, Exercise::American, 105.0, 0.25);
        const double tree = price_vanilla(po, g, p).price;
        const double brute = ref.enumerate_american(po);
        CHECK(tree == Catch::Approx(brute).margin(1e-12));
    }
}

TEST_CASE("one-step tree prices the four-branch expectation by hand", "[backward]") {
    const auto p = table1_params(100.0);
    const double T = 0.0833;
    const GridSpec g(p, T, 1, TruncationMode::Prob);
    const PayoffSpec put(PayoffKind::Put, Exercise::European, 100.0, T);

    // with n=1 both increments act once: price = e^{-rT} sum over 4 leaves
    const ChainState root{0, 0, 0, 0, 0};
    const auto succ = successors(root, g, p);
    double expect = 0.0;
    for (const auto& [st, w] : succ)
        expect += w * std::max(100.0 - std::exp(x_hat(st, g, p)), 0.0);
    expect *= std::exp(-p.r * T);
    CHECK(price_vanilla(put, g, p).price == Catch::Approx(expect).margin(1e-13));
}

TEST_CASE("put-call parity holds at every tested step count", "[backward]") {
    for (TruncationMode mode : {TruncationMode::Prob, TruncationMode::Alpha}) {
        for (double sqrt_v0 : {0.2, 0.3, 0.4}) {
            for (double T : {0.0833, 0.5}) {
                const auto p = table1_params(105.0, sqrt_v0);
                const PayoffSpec put(PayoffKind::Put, Exercise::European, 100.0, T);
                const PayoffSpec call(PayoffKind::Call, Exercise::European, 100.0, T);
                for (int n : {10, 50, 200}) {
                    const GridSpec g(p, T, n, mode);
                    const auto v = price_vanilla_batch({put, call}, g, p);
                    const double gap = v[0] + p.s0 - v[1] - 100.0 * std::exp(-p.r * T);
                    CHECK(std::abs(gap) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("European put reproduces the reference table cell", "[backward][regression]") {
    const auto p = table1_params(90.0, 0.2);
    const GridSpec g(p, 0.0833, 500, TruncationMode::Prob);
    const PayoffSpec put(PayoffKind::Put, Exercise::European, 100.0, 0.0833);
    const PayoffSpec call(PayoffKind::Call, Exercise::European, 100.0, 0.0833);
    const auto v = price_vanilla_batch({put, call}, g, p);
    CHECK(v[0] == Catch::Approx(9.6533).epsilon(1e-3));
    CHECK(v[1] == Catch::Approx(0.0691).margin(5e-4));
}

TEST_CASE("European call reproduces the reference table cell", "[backward][regression]") {
    const auto p = table1_params(100.0, 0.2);
    const GridSpec g(p, 0.0833, 500, TruncationMode::Prob);
    const PayoffSpec call(PayoffKind::Call, Exercise::European, 100.0, 0.0833);
    CHECK(price_vanilla(call, g, p).price == Catch::Approx(2.5122).epsilon(1e-3));
}

TEST_CASE("American put reproduces the reference table cells", "[backward][regression]") {
    // S0=100, rho=-0.7, sqrt(v0)=0.2, T=1 month
    {
        const auto p = table1_params(100.0, 0.2);
        const GridSpec g(p, 0.0833, 250, TruncationMode::Prob);
        const PayoffSpec am(PayoffKind::Put, Exercise::American, 100.0, 0.0833);
        CHECK(price_vanilla(am, g, p).price == Catch::Approx(2.1249).epsilon(1.5e-3));
    }
    // S0=110, rho=-0.1, sqrt(v0)=0.4, T=0.5
    {
        const HestonParams p(110.0, 0.16, 0.05, 3.0, 0.04, 0.1, -0.1);
        const GridSpec g(p, 0.5, 250, TruncationMode::Prob);
        const PayoffSpec am(PayoffKind::Put, Exercise::American, 100.0, 0.5);
        CHECK(price_vanilla(am, g, p).price == Catch::Approx(4.5554).epsilon(1.5e-3));
    }
}

TEST_CASE("American dominates European and deep puts exercise immediately", "[backward]") {
    const auto p = table1_params(90.0, 0.2);
    const GridSpec g(p, 0.0833, 100, TruncationMode::Prob);
    const PayoffSpec eu(PayoffKind::Put, Exercise::European, 100.0, 0.0833);
    const PayoffSpec am(PayoffKind::Put, Exercise::American, 100.0, 0.0833);
    const double veu = price_vanilla(eu, g, p).price;
    const double vam = price_vanilla(am, g, p).price;
    CHECK(vam >= veu);
    CHECK(vam >= 10.0);  // immediate exercise value K - S0
}

TEST_CASE("price is monotone in spot and strike", "[backward]") {
    double prev = 1e300;
    for (double s0 : {90.0, 95.0, 100.0, 105.0, 110.0}) {
        const auto p = table1_params(s0, 0.3);
        const GridSpec g(p, 0.25, 60, TruncationMode::Prob);
        const double v =
            price_vanilla(PayoffSpec(PayoffKind::Put, Exercise::European, 100.0, 0.25), g, p)
                .price;
        CHECK(v <= prev);
        prev = v;
    }
    const auto p = table1_params(100.0, 0.3);
    const GridSpec g(p, 0.25, 60, TruncationMode::Prob);
    double prev_k = 0.0;
    for (double strike : {80.0, 90.0, 100.0, 110.0}) {
        const double v =
            price_vanilla(PayoffSpec(PayoffKind::Put, Exercise::European, strike, 0.25), g, p)
                .price;
        CHECK(v >= prev_k);
        prev_k = v;
    }
}

TEST_CASE("unsupported payoffs and resource limits are rejected", "[backward]") {
    const auto p = table1_params(100.0);
    const GridSpec g(p, 0.0833, 20, TruncationMode::Prob);
    CHECK_THROWS_AS(
        price_vanilla(PayoffSpec(PayoffKind::AsianGeometricCall, Exercise::European, 100, 0.0833),
                      g, p),
        std::invalid_argument);
    CHECK_THROWS_AS(
        price_vanilla(PayoffSpec(PayoffKind::LookbackFixedStrikePut, Exercise::European, 100,
                                 0.0833),
                      g, p),
        std::invalid_argument);

    BackwardOptions tight;
    tight.memory_budget_bytes = 1024;
    CHECK_THROWS_AS(price_vanilla(PayoffSpec(PayoffKind::Put, Exercise::European, 100, 0.0833),
                                  g, p, tight),
                    resource_error);
}
