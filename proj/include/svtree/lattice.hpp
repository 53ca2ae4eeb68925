#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "svtree/model.hpp"

namespace svtree {

// How the correction process is kept compatible with probabilities in [0,1].
// Alpha floors sigma^2 at A_n inside the correction (the provable variant);
// Prob leaves the correction untruncated and clamps p instead (the variant
// the reference tables were produced with).
enum class TruncationMode { Alpha, Prob };

struct GridSpec {
    int n = 1;                // number of time steps
    double maturity = 0.0;    // T
    double h = 0.0;           // T / n
    double dx = 0.0;          // sqrt(eta h)
    double dy = 0.0;          // sqrt(eta (1 - rho^2) h)
    double x0 = 0.0;
    double y0 = 0.0;
    double vraw0 = 0.0;       // y0 + rho x0 == v0/eta, cached for grid arithmetic
    double a_floor = 0.0;     // A_n
    TruncationMode truncation = TruncationMode::Prob;

    GridSpec() = default;

    GridSpec(const HestonParams& p, double maturity_, int n_,
             TruncationMode mode = TruncationMode::Prob)
        : n(n_), maturity(maturity_), truncation(mode) {
        if (n < 1) throw std::invalid_argument("GridSpec: n must be >= 1");
        if (!(maturity > 0.0)) throw std::invalid_argument("GridSpec: maturity must be > 0");
        h = maturity / n;
        dx = std::sqrt(p.eta * h);
        dy = std::sqrt(p.eta * (1.0 - p.rho * p.rho) * h);
        const TransformedPoint start = to_transformed(p.s0, p.v0, p);
        x0 = start.x;
        y0 = start.y;
        vraw0 = y0 + p.rho * x0;
        a_floor = a_n(n, maturity, p);
    }

    // Grid coordinates are always derived from the integer levels so that
    // equal nodes compare bitwise-equal.
    double x_at(int k, int l) const { return x0 + (2 * l - k) * dx; }
    double y_at(int k, int m) const { return y0 + (2 * m - k) * dy; }
};

// One node of the four-tuple chain (X_k, Y_k, xi^X_k, xi^Y_k). Levels l and m
// count up-moves; the increments are -1/+1 and 0 only at the root.
struct ChainState {
    int k = 0;
    int l = 0;
    int m = 0;
    int xi_x = 0;
    int xi_y = 0;
};

struct TransitionProbs {
    double p;  // P(next xi^X = +1)
    double q;  // P(next xi^Y = +1)
};

inline bool state_valid(const ChainState& s, const GridSpec& grid) {
    if (s.k < 0 || s.k > grid.n) return false;
    if (s.l < 0 || s.l > s.k || s.m < 0 || s.m > s.k) return false;
    if (s.k == 0) return s.xi_x == 0 && s.xi_y == 0;
    if (s.xi_x != -1 && s.xi_x != 1) return false;
    if (s.xi_y != -1 && s.xi_y != 1) return false;
    // stepping back along the recorded increments must land on the previous layer
    const int lp = s.l - (s.xi_x > 0 ? 1 : 0);
    const int mp = s.m - (s.xi_y > 0 ? 1 : 0);
    return lp >= 0 && lp <= s.k - 1 && mp >= 0 && mp <= s.k - 1;
}

// y + rho x at integer grid levels, evaluated the same way in the node API and
// in the vectorized engines.
inline double variance_factor_raw_at(int k, int l, int m, const GridSpec& grid,
                                     const HestonParams& p) {
    return grid.vraw0 + (2 * m - k) * grid.dy + p.rho * (2 * l - k) * grid.dx;
}

inline double sigma2_at(int k, int l, int m, const GridSpec& grid, const HestonParams& p) {
    return std::max(variance_factor_raw_at(k, l, m, grid, p), 0.0);
}

inline double mu_y_at(int k, int l, int m, const GridSpec& grid, const HestonParams& p) {
    return p.kappa * p.theta / p.eta - p.rho * p.r +
           0.5 * (p.rho * p.eta - 2.0 * p.kappa) * variance_factor_raw_at(k, l, m, grid, p);
}

// Correction value from a local squared diffusion factor.
inline double correction_from_sigma2(double s2, double a_floor, TruncationMode mode) {
    const double base = (mode == TruncationMode::Alpha) ? std::max(a_floor, s2) : s2;
    return 0.5 * (base - 1.0);
}

// alpha-hat for the step leaving `s`: a function of the node itself.
inline double alpha(const ChainState& s, const GridSpec& grid, const HestonParams& p) {
    return correction_from_sigma2(sigma2_at(s.k, s.l, s.m, grid, p), grid.a_floor,
                                  grid.truncation);
}

// alpha-hat of the step that produced `s`; zero at the root by definition.
inline double alpha_into(const ChainState& s, const GridSpec& grid, const HestonParams& p) {
    if (s.k == 0) return 0.0;
    const int lp = s.l - (s.xi_x > 0 ? 1 : 0);
    const int mp = s.m - (s.xi_y > 0 ? 1 : 0);
    return correction_from_sigma2(sigma2_at(s.k - 1, lp, mp, grid, p), grid.a_floor,
                                  grid.truncation);
}

// Corrected log-price X-hat = X + dx * alpha_in * xi_x; equals x0 at the root.
inline double x_hat(const ChainState& s, const GridSpec& grid, const HestonParams& p) {
    return grid.x_at(s.k, s.l) + grid.dx * alpha_into(s, grid, p) * s.xi_x;
}

// Corrected volatility factor; the correction process is shared with X-hat.
inline double y_hat(const ChainState& s, const GridSpec& grid, const HestonParams& p) {
    return grid.y_at(s.k, s.m) + grid.dy * alpha_into(s, grid, p) * s.xi_y;
}

namespace detail {
inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }
}

// Probability that the next x-increment is +1, chosen so the discounted
// exp(X-hat) is a one-step martingale. In Prob mode the ratio is clamped into
// [0,1]; in Alpha mode the floor A_n is what keeps it there for large n.
inline double p_up_x(const ChainState& s, const GridSpec& grid, const HestonParams& p) {
    if (s.k >= grid.n) throw std::invalid_argument("p_up_x: state has no successors");
    const double a_next = alpha(s, grid, p);
    const double a_cur = alpha_into(s, grid, p);
    const double up = std::exp(grid.dx * (1.0 + a_next));
    const double dn = 1.0 / up;
    const double num = std::exp(p.r * grid.h + grid.dx * a_cur * s.xi_x) - dn;
    const double den = up - dn;
    if (!(den > 0.0)) throw std::logic_error("p_up_x: degenerate branch spread");
    const double raw = num / den;
    return grid.truncation == TruncationMode::Prob ? detail::clamp01(raw) : raw;
}

// Probability that the next y-increment is +1. The clamp into [0,1] is part of
// the definition in both modes.
inline double p_up_y(const ChainState& s, const GridSpec& grid, const HestonParams& p) {
    if (s.k >= grid.n) throw std::invalid_argument("p_up_y: state has no successors");
    const double a_next = alpha(s, grid, p);
    const double a_cur = alpha_into(s, grid, p);
    const double psi = 1.0 + a_next;
    const double drift = std::sqrt(grid.h) * mu_y_at(s.k, s.l, s.m, grid, p) /
                         (2.0 * std::sqrt(p.eta * (1.0 - p.rho * p.rho)));
    return detail::clamp01(0.5 + (0.5 * a_cur * s.xi_y + drift) / psi);
}

inline TransitionProbs transition_probs(const ChainState& s, const GridSpec& grid,
                                        const HestonParams& p) {
    return {p_up_x(s, grid, p), p_up_y(s, grid, p)};
}

// The four successors with their joint probabilities; the increments are
// conditionally independent, so the joint law is the product law.
inline std::array<std::pair<ChainState, double>, 4>
successors(const ChainState& s, const GridSpec& grid, const HestonParams& p) {
    if (s.k >= grid.n) throw std::invalid_argument("successors: state is terminal");
    const auto [pu, qu] = transition_probs(s, grid, p);
    std::array<std::pair<ChainState, double>, 4> out;
    int idx = 0;
    for (int i = 0; i <= 1; ++i) {
        for (int j = 0; j <= 1; ++j) {
            const double w = (i ? pu : 1.0 - pu) * (j ? qu : 1.0 - qu);
            out[idx++] = {ChainState{s.k + 1, s.l + i, s.m + j, 2 * i - 1, 2 * j - 1}, w};
        }
    }
    return out;
}

// Per-layer tables shared by the backward sweeps and the path simulator. All
// entries are functions of the (l, m) levels of one time layer.
struct LayerCache {
    int t = -1;
    int stride = 0;  // t + 1
    std::vector<double> g;       // correction value
    std::vector<double> e_up;    // exp(dx (1 + g))
    std::vector<double> e_dn;    // 1 / e_up
    std::vector<double> inv_den; // 1 / (e_up - e_dn)
    std::vector<double> w_up;    // exp(dx g)
    std::vector<double> w_dn;    // 1 / w_up
    std::vector<double> inv_psi; // 1 / (1 + g)
    std::vector<double> qdrift;  // sqrt(h) mu_y / (2 sqrt(eta (1 - rho^2)))

    void build(int layer, const GridSpec& grid, const HestonParams& p) {
        t = layer;
        stride = layer + 1;
        const std::size_t sz = static_cast<std::size_t>(stride) * stride;
        g.resize(sz); e_up.resize(sz); e_dn.resize(sz); inv_den.resize(sz);
        w_up.resize(sz); w_dn.resize(sz); inv_psi.resize(sz); qdrift.resize(sz);
        const double qscale = std::sqrt(grid.h) / (2.0 * std::sqrt(p.eta * (1.0 - p.rho * p.rho)));
        const double c0 = p.kappa * p.theta / p.eta - p.rho * p.r;
        const double c1 = 0.5 * (p.rho * p.eta - 2.0 * p.kappa);
        const double emdx = std::exp(-grid.dx);
        for (int l = 0; l <= layer; ++l) {
            const double xpart = p.rho * (2 * l - layer) * grid.dx;
            for (int m = 0; m <= layer; ++m) {
                const double vraw = grid.vraw0 + (2 * m - layer) * grid.dy + xpart;
                const double gc = correction_from_sigma2(std::max(vraw, 0.0), grid.a_floor,
                                                         grid.truncation);
                const std::size_t i = static_cast<std::size_t>(l) * stride + m;
                g[i] = gc;
                const double eu = std::exp(grid.dx * (1.0 + gc));
                e_up[i] = eu;
                e_dn[i] = 1.0 / eu;
                inv_den[i] = 1.0 / (eu - e_dn[i]);
                w_up[i] = eu * emdx;
                w_dn[i] = 1.0 / w_up[i];
                inv_psi[i] = 1.0 / (1.0 + gc);
                qdrift[i] = qscale * (c0 + c1 * vraw);
            }
        }
    }

    std::size_t at(int l, int m) const { return static_cast<std::size_t>(l) * stride + m; }
};

}  // namespace svtree
