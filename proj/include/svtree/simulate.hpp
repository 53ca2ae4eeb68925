#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "svtree/backward.hpp"
#include "svtree/lattice.hpp"
#include "svtree/model.hpp"
#include "svtree/payoff.hpp"
#include "svtree/rng.hpp"

namespace svtree {

// Running path functionals on the chain. The extremes are tracked in integer
// grid units of the uncorrected walk; the averages sample the corrected
// log-price.
struct PathAccumulator {
    int running_min_x = 0;
    int running_max_x = 0;
    double sum_log_s = 0.0;
    double sum_s = 0.0;
    long long count = 0;

    void start(double x0) {
        running_min_x = 0;
        running_max_x = 0;
        sum_log_s = x0;
        sum_s = std::exp(x0);
        count = 1;
    }

    void observe(int walk, double xhat) {
        if (walk < running_min_x) running_min_x = walk;
        if (walk > running_max_x) running_max_x = walk;
        sum_log_s += xhat;
        sum_s += std::exp(xhat);
        ++count;
    }
};

struct McOptions {
    int num_workers = 0;            // 0: pick from hardware
    std::size_t block_size = 8192;  // merge unit; fixed so shard count cannot matter
};

namespace detail {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw > 4 ? 4 : hw);
}

// One path of the chain, sampled with the same transition probabilities the
// backward sweep uses. Returns the undiscounted payoff.
inline double sample_path_payoff(const PayoffSpec& payoff, const GridSpec& grid,
                                 const HestonParams& params, std::uint64_t seed,
                                 std::uint64_t path_index) {
    Philox4x32 rng(seed, path_index);
    const int n = grid.n;
    const double dx = grid.dx;
    const double erh = std::exp(params.r * grid.h);
    const double emdx = std::exp(-dx);
    const double qscale =
        std::sqrt(grid.h) / (2.0 * std::sqrt(params.eta * (1.0 - params.rho * params.rho)));
    const double c0 = params.kappa * params.theta / params.eta - params.rho * params.r;
    const double c1 = 0.5 * (params.rho * params.eta - 2.0 * params.kappa);

    int k = 0, l = 0, m = 0, sx = 0, sy = 0;
    double a_in = 0.0;
    double w_cur = 1.0;  // exp(dx * a_in)
    double xhat = grid.x0;

    PathAccumulator acc;
    acc.start(grid.x0);

    while (k < n) {
        const double vraw =
            grid.vraw0 + (2 * m - k) * grid.dy + params.rho * (2 * l - k) * grid.dx;
        const double a_out = correction_from_sigma2(std::max(vraw, 0.0), grid.a_floor,
                                                    grid.truncation);
        const double eu = std::exp(dx * (1.0 + a_out));
        const double ed = 1.0 / eu;
        const double f = (sx > 0) ? w_cur : (sx < 0 ? 1.0 / w_cur : 1.0);
        const double p = detail::clamp01((erh * f - ed) / (eu - ed));
        const double q =
            detail::clamp01(0.5 + (0.5 * a_in * sy + qscale * (c0 + c1 * vraw)) / (1.0 + a_out));
        const double u1 = rng.next_uniform();
        const double u2 = rng.next_uniform();
        sx = (u1 < p) ? 1 : -1;
        sy = (u2 < q) ? 1 : -1;
        ++k;
        if (sx > 0) ++l;
        if (sy > 0) ++m;
        xhat = grid.x_at(k, l) + dx * a_out * sx;
        acc.observe(2 * l - k, xhat);
        a_in = a_out;
        w_cur = eu * emdx;
    }

    const double strike = payoff.strike;
    switch (payoff.kind) {
        case PayoffKind::Put:
            return std::max(strike - std::exp(xhat), 0.0);
        case PayoffKind::Call:
            return std::max(std::exp(xhat) - strike, 0.0);
        case PayoffKind::LookbackFixedStrikePut:
            return std::max(strike - params.s0 * std::exp(dx * acc.running_min_x), 0.0);
        case PayoffKind::LookbackFixedStrikeCall:
            return std::max(params.s0 * std::exp(dx * acc.running_max_x) - strike, 0.0);
        case PayoffKind::AsianGeometricCall:
            return std::max(std::exp(acc.sum_log_s / (n + 1)) - strike, 0.0);
        case PayoffKind::AsianArithmeticCall:
            return std::max(acc.sum_s / (n + 1) - strike, 0.0);
    }
    return 0.0;
}

struct BlockSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};

template <class PayoffFn>
PriceEstimate run_blocked_mc(PayoffFn&& path_payoff, long long num_paths, double discount,
                             const McOptions& opts) {
    const std::size_t bs = opts.block_size == 0 ? 8192 : opts.block_size;
    const std::size_t nblocks = (static_cast<std::size_t>(num_paths) + bs - 1) / bs;
    std::vector<BlockSums> blocks(nblocks);
    std::atomic<std::size_t> next_block{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= nblocks) return;
            const std::uint64_t lo = b * bs;
            const std::uint64_t hi =
                std::min<std::uint64_t>(lo + bs, static_cast<std::uint64_t>(num_paths));
            BlockSums s;
            for (std::uint64_t j = lo; j < hi; ++j) {
                const double pay = path_payoff(j);
                s.sum += pay;
                s.sum_sq += pay * pay;
            }
            blocks[b] = s;
        }
    };

    const int workers = std::min<int>(resolve_workers(opts.num_workers),
                                      static_cast<int>(nblocks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // fixed-order reduction over blocks: the estimate is bit-identical for any
    // worker count
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& b : blocks) {
        sum += b.sum;
        sum_sq += b.sum_sq;
    }
    const double nn = static_cast<double>(num_paths);
    const double mean = sum / nn;
    const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
    const double se = std::sqrt(var / nn);
    return mc_estimate(discount * mean, discount * se, num_paths);
}

}  // namespace detail

// Monte-Carlo on the chain itself: forward-samples the four-tuple process and
// prices European-style path-dependent payoffs from the accumulated
// functionals. Deterministic in (seed, num_paths) regardless of sharding.
inline PriceEstimate simulate_price(const PayoffSpec& payoff, const GridSpec& grid,
                                    const HestonParams& params, long long num_paths,
                                    std::uint64_t seed, const McOptions& opts = {}) {
    if (payoff.exercise != Exercise::European)
        throw std::invalid_argument("simulate_price: only European-style payoffs");
    if (num_paths < 100)
        throw std::invalid_argument("simulate_price: num_paths must be >= 100");
    const double discount = std::exp(-params.r * grid.maturity);
    return detail::run_blocked_mc(
        [&](std::uint64_t j) {
            return detail::sample_path_payoff(payoff, grid, params, seed, j);
        },
        num_paths, discount, opts);
}

struct CrossCheckReport {
    double backward_price = 0.0;
    PriceEstimate mc;
    bool within_3se = false;
};

// Prices a European vanilla with both engines and flags agreement at three
// standard errors.
inline CrossCheckReport check_vs_backward(const PayoffSpec& payoff, const GridSpec& grid,
                                          const HestonParams& params, long long num_paths,
                                          std::uint64_t seed, const McOptions& opts = {}) {
    if (!is_vanilla(payoff.kind) || payoff.exercise != Exercise::European)
        throw std::invalid_argument("check_vs_backward: needs a European vanilla");
    CrossCheckReport rep;
    rep.backward_price = price_vanilla(payoff, grid, params).price;
    rep.mc = simulate_price(payoff, grid, params, num_paths, seed, opts);
    rep.within_3se = std::abs(rep.backward_price - rep.mc.price) <= 3.0 * *rep.mc.std_error;
    return rep;
}

}  // namespace svtree
