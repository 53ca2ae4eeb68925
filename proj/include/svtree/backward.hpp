#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "svtree/lattice.hpp"
#include "svtree/model.hpp"
#include "svtree/payoff.hpp"

namespace svtree {

struct BackwardOptions {
    std::size_t memory_budget_bytes = std::size_t(2) << 30;
    int lookback_step_cap = 200;  // the augmented state makes the sweep O(n^4)
};

namespace detail {

inline double vanilla_intrinsic(PayoffKind kind, double stock, double strike) {
    const double d = (kind == PayoffKind::Put) ? strike - stock : stock - strike;
    return d > 0.0 ? d : 0.0;
}

// Probability of an up x-move from cached layer tables. `f` is
// exp(dx * alpha_in * xi_x), already resolved for the node's increment sign.
inline double p_from_cache(const LayerCache& cur, std::size_t ic, double erh, double f,
                           TruncationMode mode) {
    const double raw = (erh * f - cur.e_dn[ic]) * cur.inv_den[ic];
    return mode == TruncationMode::Prob ? clamp01(raw) : raw;
}

inline double q_from_cache(const LayerCache& cur, std::size_t ic, double a_in, int sy) {
    return clamp01(0.5 + (0.5 * a_in * sy + cur.qdrift[ic]) * cur.inv_psi[ic]);
}

}  // namespace detail

// Prices several vanilla contracts on one sweep of the same chain. All
// payoffs share the grid's maturity; only strike/kind/exercise vary. Layer
// values are indexed [(l * (t+1) + m) * 4 + (ix * 2 + iy)] with ix, iy the
// 0/1 encoding of the last increments.
inline std::vector<double> price_vanilla_batch(const std::vector<PayoffSpec>& payoffs,
                                               const GridSpec& grid, const HestonParams& params,
                                               const BackwardOptions& opts = {}) {
    const int n = grid.n;
    const std::size_t nb = payoffs.size();
    for (const auto& po : payoffs) {
        if (!is_vanilla(po.kind))
            throw std::invalid_argument(
                "price_vanilla: only puts and calls; path-dependent payoffs go through "
                "the lookback recursion or the path simulator");
    }
    if (nb == 0) return {};

    const std::size_t layer_sz = std::size_t(n + 1) * (n + 1) * 4;
    const std::size_t need = layer_sz * 2 * nb * sizeof(double) +
                             std::size_t(n + 1) * (n + 1) * 10 * 2 * sizeof(double);
    if (need > opts.memory_budget_bytes)
        throw resource_error("price_vanilla: layer storage exceeds memory budget at n=" +
                             std::to_string(n));

    const double erh = std::exp(params.r * grid.h);
    const double disc = std::exp(-params.r * grid.h);
    const TruncationMode mode = grid.truncation;

    // per-payoff value planes, rolled between two buffers
    std::vector<std::vector<double>> next(nb), curv(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        next[b].assign(layer_sz, 0.0);
        curv[b].assign(layer_sz, 0.0);
    }

    LayerCache cache_cur, cache_prev;  // layers t and t-1 of the sweep origin
    cache_cur.build(n == 1 ? 0 : n - 1, grid, params);
    if (n >= 2) cache_prev.build(n - 2, grid, params);

    // stock multipliers exp(x(t, l)) for one layer
    std::vector<double> sx(std::size_t(n) + 1);
    auto fill_sx = [&](int t) {
        for (int l = 0; l <= t; ++l) sx[l] = std::exp(grid.x_at(t, l));
    };

    // terminal layer: stock = exp(x) * exp(dx * alpha_in * xi), alpha_in from layer n-1
    fill_sx(n);
    {
        const LayerCache& prev = cache_cur;  // holds layer n-1
        const int t = n;
        for (int ix = 0; ix <= 1; ++ix)
            for (int iy = 0; iy <= 1; ++iy)
                for (int l = ix; l <= t - 1 + ix; ++l)
                    for (int m = iy; m <= t - 1 + iy; ++m) {
                        const std::size_t ip = prev.at(l - ix, m - iy);
                        const double f = ix ? prev.w_up[ip] : prev.w_dn[ip];
                        const double stock = sx[l] * f;
                        const std::size_t v =
                            (std::size_t(l) * (t + 1) + m) * 4 + std::size_t(ix) * 2 + iy;
                        for (std::size_t b = 0; b < nb; ++b)
                            next[b][v] = detail::vanilla_intrinsic(payoffs[b].kind, stock,
                                                                   payoffs[b].strike);
                    }
    }

    // interior sweep, layer t = n-1 .. 1
    for (int t = n - 1; t >= 1; --t) {
        // cache_cur currently holds layer t, cache_prev layer t-1
        fill_sx(t);
        bool any_american = false;
        for (const auto& po : payoffs) any_american |= po.exercise == Exercise::American;
        const int tp1 = t + 1;
        for (int ix = 0; ix <= 1; ++ix)
            for (int iy = 0; iy <= 1; ++iy) {
                const int sy = 2 * iy - 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (t > 96)
#endif
                for (int l = ix; l <= t - 1 + ix; ++l) {
                    for (int m = iy; m <= t - 1 + iy; ++m) {
                        const std::size_t ic = cache_cur.at(l, m);
                        const std::size_t ip = cache_prev.at(l - ix, m - iy);
                        const double a_in = cache_prev.g[ip];
                        const double f = ix ? cache_prev.w_up[ip] : cache_prev.w_dn[ip];
                        const double p = detail::p_from_cache(cache_cur, ic, erh, f, mode);
                        const double q = detail::q_from_cache(cache_cur, ic, a_in, sy);
                        const std::size_t v00 = (std::size_t(l) * (tp1 + 1) + m) * 4;
                        const std::size_t v01 = (std::size_t(l) * (tp1 + 1) + m + 1) * 4 + 1;
                        const std::size_t v10 = (std::size_t(l + 1) * (tp1 + 1) + m) * 4 + 2;
                        const std::size_t v11 = (std::size_t(l + 1) * (tp1 + 1) + m + 1) * 4 + 3;
                        const std::size_t vi =
                            (std::size_t(l) * (t + 1) + m) * 4 + std::size_t(ix) * 2 + iy;
                        const double stock = any_american ? sx[l] * f : 0.0;
                        for (std::size_t b = 0; b < nb; ++b) {
                            const auto& vn = next[b];
                            double cont = p * (q * vn[v11] + (1.0 - q) * vn[v10]) +
                                          (1.0 - p) * (q * vn[v01] + (1.0 - q) * vn[v00]);
                            double val = disc * cont;
                            if (payoffs[b].exercise == Exercise::American) {
                                const double ex = detail::vanilla_intrinsic(
                                    payoffs[b].kind, stock, payoffs[b].strike);
                                if (ex > val) val = ex;
                            }
                            curv[b][vi] = val;
                        }
                    }
                }
            }
        std::swap(next, curv);
        // roll caches: prev becomes current, rebuild prev for layer t-2
        std::swap(cache_cur, cache_prev);
        if (t >= 2) cache_prev.build(t - 2, grid, params);
    }

    // root step: alpha_in = 0 and xi = 0, so the correction factor is 1
    std::vector<double> out(nb);
    {
        const LayerCache& root = cache_cur;  // layer 0
        const std::size_t ic = root.at(0, 0);
        const double p = detail::p_from_cache(root, ic, erh, 1.0, mode);
        const double q = detail::q_from_cache(root, ic, 0.0, 1);
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& vn = next[b];
            const std::size_t v00 = 0;                      // (0,0,-1,-1)
            const std::size_t v01 = std::size_t(1) * 4 + 1; // (0,1,-1,+1)
            const std::size_t v10 = std::size_t(2) * 4 + 2; // (1,0,+1,-1)
            const std::size_t v11 = std::size_t(3) * 4 + 3; // (1,1,+1,+1)
            double cont = p * (q * vn[v11] + (1.0 - q) * vn[v10]) +
                          (1.0 - p) * (q * vn[v01] + (1.0 - q) * vn[v00]);
            double val = disc * cont;
            if (payoffs[b].exercise == Exercise::American) {
                const double ex =
                    detail::vanilla_intrinsic(payoffs[b].kind, params.s0, payoffs[b].strike);
                if (ex > val) val = ex;
            }
            out[b] = val;
        }
    }
    return out;
}

inline PriceEstimate price_vanilla(const PayoffSpec& payoff, const GridSpec& grid,
                                   const HestonParams& params, const BackwardOptions& opts = {}) {
    return exact_estimate(price_vanilla_batch({payoff}, grid, params, opts)[0]);
}

// Fixed-strike lookback put on the running minimum of the uncorrected walk.
// The state is augmented with the minimum depth iz = -min(sum xi^X) in
// {0, .., k}; a down-move deepens the minimum exactly when the walk sits on
// it. Values are indexed [((l*(t+1)+m)*(t+1)+iz)*4 + ix*2+iy].
inline PriceEstimate price_lookback_backward(const PayoffSpec& payoff, const GridSpec& grid,
                                             const HestonParams& params,
                                             const BackwardOptions& opts = {}) {
    if (payoff.kind != PayoffKind::LookbackFixedStrikePut)
        throw std::invalid_argument(
            "price_lookback_backward: only the fixed-strike lookback put has a grid-valued "
            "running minimum; other path-dependent payoffs go through the path simulator");
    const int n = grid.n;
    if (n > opts.lookback_step_cap)
        throw resource_error("price_lookback_backward: n exceeds the O(n^4) step cap (" +
                             std::to_string(opts.lookback_step_cap) +
                             "); use the path simulator for fine grids");
    const std::size_t layer_sz = std::size_t(n + 1) * (n + 1) * (n + 1) * 4;
    if (layer_sz * 2 * sizeof(double) > opts.memory_budget_bytes)
        throw resource_error("price_lookback_backward: layer storage exceeds memory budget");

    const double erh = std::exp(params.r * grid.h);
    const double disc = std::exp(-params.r * grid.h);
    const TruncationMode mode = grid.truncation;
    const double k_strike = payoff.strike;
    const bool american = payoff.exercise == Exercise::American;

    // intrinsic value as a function of the minimum depth
    std::vector<double> intr(std::size_t(n) + 1);
    for (int iz = 0; iz <= n; ++iz)
        intr[iz] = std::max(k_strike - params.s0 * std::exp(-grid.dx * iz), 0.0);

    std::vector<double> next(layer_sz, 0.0), curv(layer_sz, 0.0);
    auto vat = [](int t, int l, int m, int iz, int ix, int iy) {
        return ((std::size_t(l) * (t + 1) + m) * (t + 1) + iz) * 4 + std::size_t(ix) * 2 + iy;
    };

    // terminal layer
    for (int ix = 0; ix <= 1; ++ix)
        for (int iy = 0; iy <= 1; ++iy)
            for (int l = ix; l <= n - 1 + ix; ++l)
                for (int m = iy; m <= n - 1 + iy; ++m)
                    for (int iz = std::max(0, n - 2 * l); iz <= n - l; ++iz)
                        next[vat(n, l, m, iz, ix, iy)] = intr[iz];

    LayerCache cache_cur, cache_prev;
    cache_cur.build(n == 1 ? 0 : n - 1, grid, params);
    if (n >= 2) cache_prev.build(n - 2, grid, params);

    for (int t = n - 1; t >= 1; --t) {
        for (int ix = 0; ix <= 1; ++ix)
            for (int iy = 0; iy <= 1; ++iy) {
                const int sy = 2 * iy - 1;
                for (int l = ix; l <= t - 1 + ix; ++l)
                    for (int m = iy; m <= t - 1 + iy; ++m) {
                        const std::size_t ic = cache_cur.at(l, m);
                        const std::size_t ip = cache_prev.at(l - ix, m - iy);
                        const double a_in = cache_prev.g[ip];
                        const double f = ix ? cache_prev.w_up[ip] : cache_prev.w_dn[ip];
                        const double p = detail::p_from_cache(cache_cur, ic, erh, f, mode);
                        const double q = detail::q_from_cache(cache_cur, ic, a_in, sy);
                        for (int iz = std::max(0, t - 2 * l); iz <= t - l; ++iz) {
                            const int izd = iz + (iz == t - 2 * l ? 1 : 0);
                            const double cont =
                                p * (q * next[vat(t + 1, l + 1, m + 1, iz, 1, 1)] +
                                     (1.0 - q) * next[vat(t + 1, l + 1, m, iz, 1, 0)]) +
                                (1.0 - p) * (q * next[vat(t + 1, l, m + 1, izd, 0, 1)] +
                                             (1.0 - q) * next[vat(t + 1, l, m, izd, 0, 0)]);
                            double val = disc * cont;
                            if (american && intr[iz] > val) val = intr[iz];
                            curv[vat(t, l, m, iz, ix, iy)] = val;
                        }
                    }
            }
        std::swap(next, curv);
        std::swap(cache_cur, cache_prev);
        if (t >= 2) cache_prev.build(t - 2, grid, params);
    }

    const std::size_t ic = cache_cur.at(0, 0);
    const double p = detail::p_from_cache(cache_cur, ic, erh, 1.0, mode);
    const double q = detail::q_from_cache(cache_cur, ic, 0.0, 1);
    const double cont = p * (q * next[vat(1, 1, 1, 0, 1, 1)] +
                             (1.0 - q) * next[vat(1, 1, 0, 0, 1, 0)]) +
                        (1.0 - p) * (q * next[vat(1, 0, 1, 1, 0, 1)] +
                                     (1.0 - q) * next[vat(1, 0, 0, 1, 0, 0)]);
    double val = disc * cont;
    if (american && intr[0] > val) val = intr[0];
    return exact_estimate(val);
}

}  // namespace svtree
