#pragma once

// Reference implementations used for verification only: a path enumerator that
// re-derives every transition, walk value and payoff from the displayed
// formulas, independent of the engine code paths it is checked against.

#include <algorithm>
#include <cmath>
#include <functional>

#include "svtree/lattice.hpp"
#include "svtree/model.hpp"
#include "svtree/payoff.hpp"

namespace svtree::testing {


struct WalkPricer {
    svtree::HestonParams params;
    double maturity;
    int n;
    svtree::TruncationMode mode;

    double h, dx, dy, x0, y0, a_floor;

    WalkPricer(const svtree::HestonParams& p, double T, int steps, svtree::TruncationMode md)
        : params(p), maturity(T), n(steps), mode(md) {
        h = T / n;
        dx = std::sqrt(p.eta * h);
        dy = std::sqrt(p.eta * (1.0 - p.rho * p.rho) * h);
        x0 = std::log(p.s0);
        y0 = p.v0 / p.eta - p.rho * x0;
        a_floor = (p.kappa * p.theta / p.eta + std::abs(p.rho) * p.r) *
                  std::sqrt(h / (p.eta * (1.0 - p.rho * p.rho)));
    }

    double sigma2(int k, int wx, int wy) const {
        const double x = x0 + dx * wx;
        const double y = y0 + dy * wy;
        return std::max(y + params.rho * x, 0.0);
    }

    double mu_y(int k, int wx, int wy) const {
        const double x = x0 + dx * wx;
        const double y = y0 + dy * wy;
        return params.kappa * params.theta / params.eta - params.rho * params.r +
               0.5 * (params.rho * params.eta - 2.0 * params.kappa) * (y + params.rho * x);
    }

    double alpha_of(double s2) const {
        const double base = (mode == svtree::TruncationMode::Alpha) ? std::max(a_floor, s2) : s2;
        return 0.5 * (base - 1.0);
    }

    // alpha-hat entering the state after k steps with walk sums (wx, wy) and
    // last increments (sx, sy)
    double alpha_in(int k, int wx, int wy, int sx, int sy) const {
        if (k == 0) return 0.0;
        return alpha_of(sigma2(k - 1, wx - sx, wy - sy));
    }

    double p_up(int k, int wx, int wy, int sx, int sy) const {
        const double a_next = alpha_of(sigma2(k, wx, wy));
        const double a_cur = alpha_in(k, wx, wy, sx, sy);
        const double num = std::exp(params.r * h + dx * a_cur * sx) -
                           std::exp(-dx * (1.0 + a_next));
        const double den = std::exp(dx * (1.0 + a_next)) - std::exp(-dx * (1.0 + a_next));
        double p = num / den;
        if (mode == svtree::TruncationMode::Prob) p = std::clamp(p, 0.0, 1.0);
        return p;
    }

    double q_up(int k, int wx, int wy, int sx, int sy) const {
        const double a_next = alpha_of(sigma2(k, wx, wy));
        const double a_cur = alpha_in(k, wx, wy, sx, sy);
        const double q = 0.5 + a_cur * sy / (2.0 * (1.0 + a_next)) +
                         std::sqrt(h) * mu_y(k, wx, wy) /
                             (2.0 * std::sqrt(params.eta * (1.0 - params.rho * params.rho)) *
                              (1.0 + a_next));
        return std::clamp(q, 0.0, 1.0);
    }

    double x_hat(int k, int wx, int wy, int sx, int sy) const {
        return x0 + dx * wx + dx * alpha_in(k, wx, wy, sx, sy) * sx;
    }

    double leaf_payoff(const svtree::PayoffSpec& po, double xhat_n, int min_wx, int max_wx,
                       double sum_log, double sum_s) const {
        switch (po.kind) {
            case svtree::PayoffKind::Put:
                return std::max(po.strike - std::exp(xhat_n), 0.0);
            case svtree::PayoffKind::Call:
                return std::max(std::exp(xhat_n) - po.strike, 0.0);
            case svtree::PayoffKind::LookbackFixedStrikePut:
                return std::max(po.strike - params.s0 * std::exp(dx * min_wx), 0.0);
            case svtree::PayoffKind::LookbackFixedStrikeCall:
                return std::max(params.s0 * std::exp(dx * max_wx) - po.strike, 0.0);
            case svtree::PayoffKind::AsianGeometricCall:
                return std::max(std::exp(sum_log / (n + 1)) - po.strike, 0.0);
            case svtree::PayoffKind::AsianArithmeticCall:
                return std::max(sum_s / (n + 1) - po.strike, 0.0);
        }
        return 0.0;
    }

    // expectation of the discounted payoff over all 4^n increment sequences
    double enumerate_european(const svtree::PayoffSpec& po) const {
        double total = 0.0;
        std::function<void(int, int, int, int, int, double, double, int, int, double, double)>
            rec = [&](int k, int wx, int wy, int sx, int sy, double prob, double xhat,
                      int min_wx, int max_wx, double sum_log, double sum_s) {
                if (k == n) {
                    total += prob * leaf_payoff(po, xhat, min_wx, max_wx, sum_log, sum_s);
                    return;
                }
                const double p = p_up(k, wx, wy, sx, sy);
                const double q = q_up(k, wx, wy, sx, sy);
                for (int ex : {-1, 1})
                    for (int ey : {-1, 1}) {
                        const double w = (ex > 0 ? p : 1.0 - p) * (ey > 0 ? q : 1.0 - q);
                        const int wx2 = wx + ex, wy2 = wy + ey;
                        const double xh = x_hat(k + 1, wx2, wy2, ex, ey);
                        rec(k + 1, wx2, wy2, ex, ey, prob * w, xh, std::min(min_wx, wx2),
                            std::max(max_wx, wx2), sum_log + xh, sum_s + std::exp(xh));
                    }
            };
        rec(0, 0, 0, 0, 0, 1.0, x0, 0, 0, x0, params.s0);
        return std::exp(-params.r * maturity) * total;
    }

    // optimal stopping over all rules measurable w.r.t. the path prefix
    double enumerate_american(const svtree::PayoffSpec& po) const {
        const double disc = std::exp(-params.r * h);
        std::function<double(int, int, int, int, int)> value = [&](int k, int wx, int wy, int sx,
                                                                   int sy) {
            const double xh = x_hat(k, wx, wy, sx, sy);
            const double intrinsic = po.kind == svtree::PayoffKind::Put
                                         ? std::max(po.strike - std::exp(xh), 0.0)
                                         : std::max(std::exp(xh) - po.strike, 0.0);
            if (k == n) return intrinsic;
            const double p = p_up(k, wx, wy, sx, sy);
            const double q = q_up(k, wx, wy, sx, sy);
            double cont = 0.0;
            for (int ex : {-1, 1})
                for (int ey : {-1, 1}) {
                    const double w = (ex > 0 ? p : 1.0 - p) * (ey > 0 ? q : 1.0 - q);
                    if (w > 0.0) cont += w * value(k + 1, wx + ex, wy + ey, ex, ey);
                }
            return std::max(intrinsic, disc * cont);
        };
        return value(0, 0, 0, 0, 0);
    }
};


}  // namespace svtree::testing
