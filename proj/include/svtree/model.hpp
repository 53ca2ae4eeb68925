#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace svtree {

// Heston dynamics under the risk-neutral measure:
//   dS = S (r dt + sqrt(v) dW),   dv = kappa (theta - v) dt + eta sqrt(v) dW~,
// with corr(W, W~) = rho. Parameters are validated once at construction;
// everything downstream may assume they are usable.
struct HestonParams {
    double s0;     // initial stock price
    double v0;     // initial variance
    double r;      // risk-free rate
    double kappa;  // mean-reversion speed
    double theta;  // long-run variance
    double eta;    // vol of vol
    double rho;    // correlation, in (-1, 1)

    HestonParams(double s0_, double v0_, double r_, double kappa_,
                 double theta_, double eta_, double rho_)
        : s0(s0_), v0(v0_), r(r_), kappa(kappa_), theta(theta_), eta(eta_), rho(rho_) {
        auto req = [](bool ok, const char* what) {
            if (!ok) throw std::invalid_argument(std::string("HestonParams: ") + what);
        };
        req(s0 > 0.0, "s0 must be > 0");
        req(v0 > 0.0, "v0 must be > 0");
        req(r > 0.0, "r must be > 0");
        req(kappa > 0.0, "kappa must be > 0");
        req(theta > 0.0, "theta must be > 0");
        req(eta > 0.0, "eta must be > 0");
        req(rho > -1.0 && rho < 1.0, "rho must lie in (-1, 1)");
        req(2.0 * kappa * theta >= eta * eta,
            "Feller condition 2*kappa*theta >= eta^2 violated");
    }
};

// Transformed coordinates x = ln S, y = v/eta - rho x. In these variables the
// two driving Brownian motions are independent and both diffusion coefficients
// carry the same local factor sigma(x,y) = sqrt((y + rho x)^+).
struct TransformedPoint {
    double x;
    double y;
};

inline TransformedPoint to_transformed(double s, double nu, const HestonParams& p) {
    if (!(s > 0.0)) throw std::domain_error("to_transformed: price must be > 0");
    const double x = std::log(s);
    return {x, nu / p.eta - p.rho * x};
}

inline std::pair<double, double> to_original(const TransformedPoint& pt, const HestonParams& p) {
    const double s = std::exp(pt.x);
    const double nu = p.eta * (pt.y + p.rho * pt.x);
    return {s, nu};
}

// y + rho x; equals v/eta whenever the variance is positive.
inline double variance_factor_raw(const TransformedPoint& pt, const HestonParams& p) {
    return pt.y + p.rho * pt.x;
}

// Squared diffusion factor sigma^2 = (y + rho x)^+. The positive-part clamp is
// the only domain guard; all coefficient functions are total.
inline double sigma2(const TransformedPoint& pt, const HestonParams& p) {
    return std::max(variance_factor_raw(pt, p), 0.0);
}

inline double mu_x(const TransformedPoint& pt, const HestonParams& p) {
    return p.r - 0.5 * p.eta * variance_factor_raw(pt, p);
}

inline double mu_y(const TransformedPoint& pt, const HestonParams& p) {
    return p.kappa * p.theta / p.eta - p.rho * p.r +
           0.5 * (p.rho * p.eta - 2.0 * p.kappa) * variance_factor_raw(pt, p);
}

// Truncation floor A_n for the predictable correction. Shrinks like sqrt(h),
// so the floored correction stays within the o(h) margin of the construction.
inline double a_n(int n, double maturity, const HestonParams& p) {
    if (n < 1) throw std::invalid_argument("a_n: n must be >= 1");
    if (!(maturity > 0.0)) throw std::invalid_argument("a_n: maturity must be > 0");
    const double h = maturity / n;
    return (p.kappa * p.theta / p.eta + std::abs(p.rho) * p.r) *
           std::sqrt(h / (p.eta * (1.0 - p.rho * p.rho)));
}

}  // namespace svtree
