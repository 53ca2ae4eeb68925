#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracle_helpers.hpp"
#include "svtree/backward.hpp"
#include "svtree/rng.hpp"

using namespace svtree;

namespace {
HestonParams table9_params(double s0 = 100.0) {
    return HestonParams(s0, 0.16, 0.05, 3.0, 0.04, 0.1, -0.7);
}
}  // namespace

TEST_CASE("lookback put equals full path enumeration", "[lookback][oracle]") {
    const auto p = table9_params();
    for (int n : {1, 2, 4, 8}) {
        for (TruncationMode mode : {TruncationMode::Prob, TruncationMode::Alpha}) {
            const GridSpec g(p, 0.2, n, mode);
            const testref::WalkPricer ref(p, 0.2, n, mode);
            const PayoffSpec po(PayoffKind::LookbackFixedStrikePut, Exercise::European, 100.0,
                                0.2);
            const double tree = price_lookback_backward(po, g, p).price;
            const double brute = ref.enumerate_european(po);
            CHECK(tree == Catch::Approx(brute).margin(1e-12));
        }
    }
}

TEST_CASE("two-step lookback put enumerates sixteen leaves", "[lookback][oracle]") {
    const auto p = table9_params();
    const GridSpec g(p, 0.2, 2, TruncationMode::Prob);
    const testref::WalkPricer ref(p, 0.2, 2, TruncationMode::Prob);
    const PayoffSpec po(PayoffKind::LookbackFixedStrikePut, Exercise::European, 100.0, 0.2);
    CHECK(price_lookback_backward(po, g, p).price ==
          Catch::Approx(ref.enumerate_european(po)).margin(1e-13));
}

TEST_CASE("strike below the lowest reachable minimum prices to zero", "[lookback]") {
    const auto p = table9_params();
    const GridSpec g(p, 0.2, 1, TruncationMode::Prob);
    // at n=1 the minimum is at worst S0 e^{-dx}; any strike below that is dead
    const double floor_stock = p.s0 * std::exp(-g.dx);
    const PayoffSpec dead(PayoffKind::LookbackFixedStrikePut, Exercise::European,
                          floor_stock * 0.999, 0.2);
    CHECK(price_lookback_backward(dead, g, p).price == 0.0);
}

TEST_CASE("running minimum stays within the walk bounds on sampled paths", "[lookback]") {
    const auto p = table9_params();
    const GridSpec g(p, 0.2, 20, TruncationMode::Prob);
    Philox4x32 rng(7, 0);
    for (int path = 0; path < 2000; ++path) {
        ChainState s{0, 0, 0, 0, 0};
        int walk = 0, zmin = 0;
        for (int k = 0; k < g.n; ++k) {
            const auto [pu, qu] = transition_probs(s, g, p);
            const int sx = rng.next_uniform() < pu ? 1 : -1;
            const int sy = rng.next_uniform() < qu ? 1 : -1;
            s = ChainState{s.k + 1, s.l + (sx > 0), s.m + (sy > 0), sx, sy};
            walk += sx;
            zmin = std::min(zmin, walk);
            CHECK(zmin <= 0);
            CHECK(zmin >= -s.k);
            CHECK(zmin <= walk);
        }
    }
}

TEST_CASE("American lookback dominates European", "[lookback]") {
    const auto p = table9_params();
    const GridSpec g(p, 0.2, 40, TruncationMode::Prob);
    const PayoffSpec eu(PayoffKind::LookbackFixedStrikePut, Exercise::European, 105.0, 0.2);
    const PayoffSpec am(PayoffKind::LookbackFixedStrikePut, Exercise::American, 105.0, 0.2);
    const double veu = price_lookback_backward(eu, g, p).price;
    const double vam = price_lookback_backward(am, g, p).price;
    CHECK(vam >= veu - 1e-12);
    CHECK(veu > 0.0);
}

TEST_CASE("lookback recursion rejects other kinds and fine grids", "[lookback]") {
    const auto p = table9_params();
    const GridSpec g(p, 0.2, 10, TruncationMode::Prob);
    CHECK_THROWS_AS(price_lookback_backward(PayoffSpec(PayoffKind::LookbackFixedStrikeCall,
                                                       Exercise::European, 100.0, 0.2),
                                            g, p),
                    std::invalid_argument);
    CHECK_THROWS_AS(price_lookback_backward(PayoffSpec(PayoffKind::Put, Exercise::European,
                                                       100.0, 0.2),
                                            g, p),
                    std::invalid_argument);
    const GridSpec fine(p, 0.2, 300, TruncationMode::Prob);
    CHECK_THROWS_AS(price_lookback_backward(PayoffSpec(PayoffKind::LookbackFixedStrikePut,
                                                       Exercise::European, 100.0, 0.2),
                                            fine, p),
                    resource_error);
}
