#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "svtree/model.hpp"
#include "svtree/payoff.hpp"
#include "svtree/rng.hpp"
#include "svtree/simulate.hpp"

namespace svtree {

struct QuadratureConfig {
    double upper_limit = 200.0;  // integration truncation in frequency space
    double abs_tol = 1e-8;
    int max_evals = 250000;

    QuadratureConfig() = default;
    QuadratureConfig(double upper, double tol, int evals)
        : upper_limit(upper), abs_tol(tol), max_evals(evals) {
        if (!(upper_limit > 0.0)) throw std::invalid_argument("QuadratureConfig: upper_limit > 0");
        if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: abs_tol > 0");
        if (max_evals < 15) throw std::invalid_argument("QuadratureConfig: max_evals too small");
    }
};

namespace detail {

// Characteristic-function factor for P_j, written in the branch-cut-stable
// form: the ratio (beta - d) / (beta + d) keeps the complex logarithm on the
// principal branch for all maturities, unlike the textbook grouping.
inline std::complex<double> heston_cf_term(double phi, int j, double maturity,
                                           const HestonParams& p) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> iphi = i * phi;
    const double uj = (j == 1) ? 0.5 : -0.5;
    const double bj = (j == 1) ? p.kappa - p.rho * p.eta : p.kappa;
    const double a = p.kappa * p.theta;
    const double eta2 = p.eta * p.eta;

    const std::complex<double> beta = bj - p.rho * p.eta * iphi;
    const std::complex<double> d = std::sqrt(beta * beta - eta2 * (2.0 * uj * iphi - phi * phi));
    const std::complex<double> c = (beta - d) / (beta + d);
    const std::complex<double> edt = std::exp(-d * maturity);

    const std::complex<double> big_d = (beta - d) / eta2 * (1.0 - edt) / (1.0 - c * edt);
    const std::complex<double> big_c =
        p.r * iphi * maturity +
        a / eta2 * ((beta - d) * maturity - 2.0 * std::log((1.0 - c * edt) / (1.0 - c)));

    return std::exp(big_c + big_d * p.v0 + iphi * std::log(p.s0));
}

inline double heston_probability(int j, double strike, double maturity, const HestonParams& p,
                                 const QuadratureConfig& quad) {
    const double log_k = std::log(strike);
    auto integrand = [&](double phi) {
        const std::complex<double> i(0.0, 1.0);
        const std::complex<double> val =
            std::exp(-i * phi * log_k) * heston_cf_term(phi, j, maturity, p) / (i * phi);
        return val.real();
    };
    using boost::math::quadrature::gauss_kronrod;
    int depth = 0;
    for (int evals = 15; evals * 2 <= quad.max_evals && depth < 17; ++depth) evals *= 2;
    double err = 0.0;
    const double integral =
        gauss_kronrod<double, 15>::integrate(integrand, 0.0, quad.upper_limit, depth,
                                             quad.abs_tol * 1e-3, &err);
    if (!(err <= quad.abs_tol) || !std::isfinite(integral))
        throw numerical_error("heston_closed_form: quadrature error estimate " +
                              std::to_string(err) + " above tolerance " +
                              std::to_string(quad.abs_tol));
    return 0.5 + integral / 3.14159265358979323846264338327950288;
}

}  // namespace detail

// Semi-closed European price under Heston: call = S0 P1 - K e^{-rT} P2; the
// put follows by parity, which the representation satisfies identically.
inline double heston_closed_form(const PayoffSpec& payoff, const HestonParams& params,
                                 const QuadratureConfig& quad = {}) {
    if (!is_vanilla(payoff.kind) || payoff.exercise != Exercise::European)
        throw std::invalid_argument("heston_closed_form: European vanillas only");
    const double p1 = detail::heston_probability(1, payoff.strike, payoff.maturity, params, quad);
    const double p2 = detail::heston_probability(2, payoff.strike, payoff.maturity, params, quad);
    const double df = std::exp(-params.r * payoff.maturity);
    const double call = params.s0 * p1 - payoff.strike * df * p2;
    if (payoff.kind == PayoffKind::Call) return call;
    return call - params.s0 + payoff.strike * df;
}

// Euler scheme on (ln S, v) with full truncation: v^+ feeds both the drift and
// the diffusion, so the variance path may dip below zero but never propagates
// a negative value. Path functionals mirror the tree simulator.
inline PriceEstimate euler_mc(const PayoffSpec& payoff, const HestonParams& params, int steps,
                              long long num_paths, std::uint64_t seed,
                              const McOptions& opts = {}) {
    if (payoff.exercise != Exercise::European)
        throw std::invalid_argument("euler_mc: only European-style payoffs");
    if (steps < 1) throw std::invalid_argument("euler_mc: steps must be >= 1");
    if (num_paths < 100) throw std::invalid_argument("euler_mc: num_paths must be >= 100");

    const double maturity = payoff.maturity;
    const double dt = maturity / steps;
    const double sdt = std::sqrt(dt);
    const double rho_c = std::sqrt(1.0 - params.rho * params.rho);
    const double discount = std::exp(-params.r * maturity);
    const double strike = payoff.strike;

    auto path_payoff = [&](std::uint64_t j) {
        GaussianStream gauss(seed, j);
        double x = std::log(params.s0);
        double v = params.v0;
        double min_x = x, max_x = x;
        double sum_log = x, sum_s = params.s0;
        for (int i = 0; i < steps; ++i) {
            const double vp = v > 0.0 ? v : 0.0;
            const double svp = std::sqrt(vp);
            const double zw = gauss.next();
            const double zb = gauss.next();
            const double zv = params.rho * zw + rho_c * zb;
            x += (params.r - 0.5 * vp) * dt + svp * sdt * zw;
            v += params.kappa * (params.theta - vp) * dt + params.eta * svp * sdt * zv;
            if (x < min_x) min_x = x;
            if (x > max_x) max_x = x;
            sum_log += x;
            sum_s += std::exp(x);
        }
        switch (payoff.kind) {
            case PayoffKind::Put: return std::max(strike - std::exp(x), 0.0);
            case PayoffKind::Call: return std::max(std::exp(x) - strike, 0.0);
            case PayoffKind::LookbackFixedStrikePut:
                return std::max(strike - std::exp(min_x), 0.0);
            case PayoffKind::LookbackFixedStrikeCall:
                return std::max(std::exp(max_x) - strike, 0.0);
            case PayoffKind::AsianGeometricCall:
                return std::max(std::exp(sum_log / (steps + 1)) - strike, 0.0);
            case PayoffKind::AsianArithmeticCall:
                return std::max(sum_s / (steps + 1) - strike, 0.0);
        }
        return 0.0;
    };

    return detail::run_blocked_mc(path_payoff, num_paths, discount, opts);
}

}  // namespace svtree
