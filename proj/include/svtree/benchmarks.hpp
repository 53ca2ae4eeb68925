#pragma once

// Published reference grids for the benchmark harness: vanilla prices against
// the semi-closed solution, American puts against control-variate and finite
// difference values, and Monte-Carlo exotics with their confidence intervals.

#include <array>

#include "svtree/model.hpp"

namespace svtree::bench {

// ---- European vanillas: K = 100, r = 0.05, eta = 0.1, kappa = 3, theta =
// 0.04, rho = -0.7; reference is the semi-closed solution column -------------

struct VanillaRow {
    double s0;
    double sqrt_v0;
    double maturity;
    double reference;
};

inline constexpr std::array<VanillaRow, 45> kEuropeanPuts{{
    {90, 0.2, 0.0833, 9.6533},   {95, 0.2, 0.0833, 5.2074},   {100, 0.2, 0.0833, 2.0971},
    {105, 0.2, 0.0833, 0.6053},  {110, 0.2, 0.0833, 0.1265},  {90, 0.3, 0.0833, 9.9905},
    {95, 0.3, 0.0833, 6.0155},   {100, 0.3, 0.0833, 3.1302},  {105, 0.3, 0.0833, 1.3967},
    {110, 0.3, 0.0833, 0.5367},  {90, 0.4, 0.0833, 10.5668},  {95, 0.4, 0.0833, 6.9335},
    {100, 0.4, 0.0833, 4.1852},  {105, 0.4, 0.0833, 2.3222},  {110, 0.4, 0.0833, 1.1882},
    {90, 0.2, 0.25, 9.5698},     {95, 0.2, 0.25, 5.9692},     {100, 0.2, 0.25, 3.3770},
    {105, 0.2, 0.25, 1.7410},    {110, 0.2, 0.25, 0.8259},    {90, 0.3, 0.25, 10.5893},
    {95, 0.3, 0.25, 7.3316},     {100, 0.3, 0.25, 4.8310},    {105, 0.3, 0.25, 3.0388},
    {110, 0.3, 0.25, 1.8325},    {90, 0.4, 0.25, 11.8287},    {95, 0.4, 0.25, 8.8035},
    {100, 0.4, 0.25, 6.3735},    {105, 0.4, 0.25, 4.4976},    {110, 0.4, 0.25, 3.1011},
    {90, 0.2, 0.5, 9.7572},      {95, 0.2, 0.5, 6.7199},      {100, 0.2, 0.5, 4.4312},
    {105, 0.2, 0.5, 2.8107},     {110, 0.2, 0.5, 1.7240},     {90, 0.3, 0.5, 11.0807},
    {95, 0.3, 0.5, 8.2363},      {100, 0.3, 0.5, 5.9763},     {105, 0.3, 0.5, 4.2443},
    {110, 0.3, 0.5, 2.9582},     {90, 0.4, 0.5, 12.6171},     {95, 0.4, 0.5, 9.9223},
    {100, 0.4, 0.5, 7.6965},     {105, 0.4, 0.5, 5.8978},     {110, 0.4, 0.5, 4.4716},
}};

inline constexpr std::array<VanillaRow, 45> kEuropeanCalls{{
    {90, 0.2, 0.0833, 0.0691},   {95, 0.2, 0.0833, 0.6232},   {100, 0.2, 0.0833, 2.5129},
    {105, 0.2, 0.0833, 6.0211},  {110, 0.2, 0.0833, 10.5423}, {90, 0.3, 0.0833, 0.4063},
    {95, 0.3, 0.0833, 1.4313},   {100, 0.3, 0.0833, 3.5460},  {105, 0.3, 0.0833, 6.8125},
    {110, 0.3, 0.0833, 10.9525}, {90, 0.4, 0.0833, 0.9826},   {95, 0.4, 0.0833, 2.3493},
    {100, 0.4, 0.0833, 4.6010},  {105, 0.4, 0.0833, 7.7380},  {110, 0.4, 0.0833, 11.6040},
    {90, 0.2, 0.25, 0.8120},     {95, 0.2, 0.25, 2.2114},     {100, 0.2, 0.25, 4.6192},
    {105, 0.2, 0.25, 7.9832},    {110, 0.2, 0.25, 12.0682},   {90, 0.3, 0.25, 1.8316},
    {95, 0.3, 0.25, 3.5738},     {100, 0.3, 0.25, 6.0732},    {105, 0.3, 0.25, 9.2810},
    {110, 0.3, 0.25, 13.0747},   {90, 0.4, 0.25, 3.0709},     {95, 0.4, 0.25, 5.0457},
    {100, 0.4, 0.25, 7.6157},    {105, 0.4, 0.25, 10.7399},   {110, 0.4, 0.25, 14.3433},
    {90, 0.2, 0.5, 2.2262},      {95, 0.2, 0.5, 4.1889},      {100, 0.2, 0.5, 6.9002},
    {105, 0.2, 0.5, 10.2797},    {110, 0.2, 0.5, 14.1930},    {90, 0.3, 0.5, 3.5497},
    {95, 0.3, 0.5, 5.7053},      {100, 0.3, 0.5, 8.4453},     {105, 0.3, 0.5, 11.7133},
    {110, 0.3, 0.5, 15.4272},    {90, 0.4, 0.5, 5.0861},      {95, 0.4, 0.5, 7.3913},
    {100, 0.4, 0.5, 10.1655},    {105, 0.4, 0.5, 13.3668},    {110, 0.4, 0.5, 16.9406},
}};

inline HestonParams vanilla_model(double s0, double sqrt_v0, double rho = -0.7) {
    return HestonParams(s0, sqrt_v0 * sqrt_v0, 0.05, 3.0, 0.04, 0.1, rho);
}

// ---- American puts against the control-variate lattice (N = 200) ----------

struct AmericanRow {
    double s0;
    double rho;
    double sqrt_v0;
    double maturity;
    double reference;  // control-variate price
};

inline constexpr std::array<AmericanRow, 36> kAmericanPuts{{
    {90, -0.1, 0.2, 0.0833, 10.0000},  {100, -0.1, 0.2, 0.0833, 2.1254},
    {110, -0.1, 0.2, 0.0833, 0.1091},  {90, -0.7, 0.2, 0.0833, 9.9997},
    {100, -0.7, 0.2, 0.0833, 2.1267},  {110, -0.7, 0.2, 0.0833, 0.1274},
    {90, -0.1, 0.4, 0.0833, 10.7100},  {100, -0.1, 0.4, 0.0833, 4.2158},
    {110, -0.1, 0.4, 0.0833, 1.1667},  {90, -0.7, 0.4, 0.0833, 10.6804},
    {100, -0.7, 0.4, 0.0833, 4.2140},  {110, -0.7, 0.4, 0.0833, 1.1939},
    {90, -0.1, 0.2, 0.25, 10.1706},    {100, -0.1, 0.2, 0.25, 3.4747},
    {110, -0.1, 0.2, 0.25, 0.7736},    {90, -0.7, 0.2, 0.25, 10.1206},
    {100, -0.7, 0.2, 0.25, 3.4807},    {110, -0.7, 0.2, 0.25, 0.8416},
    {90, -0.1, 0.4, 0.25, 12.1819},    {100, -0.1, 0.4, 0.25, 6.4964},
    {110, -0.1, 0.4, 0.25, 3.0914},    {90, -0.7, 0.4, 0.25, 12.1122},
    {100, -0.7, 0.4, 0.25, 6.4899},    {110, -0.7, 0.4, 0.25, 3.1456},
    {90, -0.1, 0.2, 0.5, 10.6478},     {100, -0.1, 0.2, 0.5, 4.6473},
    {110, -0.1, 0.2, 0.5, 1.6832},     {90, -0.7, 0.2, 0.5, 10.5637},
    {100, -0.7, 0.2, 0.5, 4.6636},     {110, -0.7, 0.2, 0.5, 1.7874},
    {90, -0.1, 0.4, 0.5, 13.3142},     {100, -0.1, 0.4, 0.5, 8.0083},
    {110, -0.1, 0.4, 0.5, 4.5454},     {90, -0.7, 0.4, 0.5, 13.2172},
    {100, -0.7, 0.4, 0.5, 7.9998},     {110, -0.7, 0.4, 0.5, 4.6201},
}};

// ---- American puts against fine-grid finite differences: K = 10, r = 0.1,
// eta = 0.9, kappa = 5, theta = 0.16, rho = 0.1, T = 0.25 --------------------

struct FdBenchmark {
    double sqrt_v0;
    std::array<double, 5> reference;  // S0 = 8, 9, 10, 11, 12
};

inline constexpr std::array<FdBenchmark, 2> kFdAmericanPuts{{
    {0.25, {2.0000, 1.1076, 0.5200, 0.2137, 0.0820}},
    {0.50, {2.0784, 1.3336, 0.7960, 0.4483, 0.2428}},
}};

inline HestonParams fd_model(double s0, double sqrt_v0) {
    return HestonParams(s0, sqrt_v0 * sqrt_v0, 0.1, 5.0, 0.16, 0.9, 0.1);
}

// ---- geometric Asian calls: S0 = 100, v0 = 0.09, r = 0.05, kappa = 1.15,
// theta = 0.348, rho = -0.64, eta = 0.39; reference is the semi-closed
// solution, the intervals are the published 1e5-path confidence bounds -------

struct AsianRow {
    double maturity;
    double strike;
    double reference;
    double ci_lo;
    double ci_hi;
};

inline constexpr std::array<AsianRow, 35> kGeometricAsians{{
    {0.2, 90, 10.6571, 10.6135, 10.7060},  {0.2, 95, 6.5871, 6.5609, 6.6402},
    {0.2, 100, 3.4478, 3.4397, 3.5001},    {0.2, 105, 1.4552, 1.4501, 1.4894},
    {0.2, 110, 0.4724, 0.4623, 0.4838},    {0.4, 90, 11.7112, 11.6678, 11.7941},
    {0.4, 95, 8.0894, 8.0438, 8.1538},     {0.4, 100, 5.1616, 5.1027, 5.1932},
    {0.4, 105, 3.0018, 3.0065, 3.0764},    {0.4, 110, 1.5715, 1.5308, 1.5803},
    {0.5, 90, 12.2329, 12.2270, 12.3679},  {0.5, 95, 8.7553, 8.7094, 8.8328},
    {0.5, 100, 5.8971, 5.8516, 5.9556},    {0.5, 105, 3.7072, 3.6735, 3.7566},
    {0.5, 110, 2.1589, 2.1305, 2.1938},    {1.0, 90, 14.5779, 14.4642, 14.6650},
    {1.0, 95, 11.5551, 11.5367, 11.7208},  {1.0, 100, 8.9457, 8.8888, 9.0528},
    {1.0, 105, 6.7559, 6.7282, 6.8724},    {1.0, 110, 4.9722, 4.9538, 5.0784},
    {1.5, 90, 16.5030, 16.2635, 16.5144},  {1.5, 95, 13.7625, 13.6150, 13.8498},
    {1.5, 100, 11.3374, 11.2523, 11.4676}, {1.5, 105, 9.2245, 9.1503, 9.3471},
    {1.5, 110, 7.4122, 7.3457, 7.5226},    {2.0, 90, 18.0914, 17.9261, 18.2253},
    {2.0, 95, 15.5640, 15.4721, 15.7544},  {2.0, 100, 13.2933, 13.2303, 13.4945},
    {2.0, 105, 11.2728, 11.1626, 11.4084}, {2.0, 110, 9.4921, 9.3113, 9.5373},
    {3.0, 90, 20.5102, 20.4610, 20.8436},  {3.0, 95, 18.3060, 18.2156, 18.5814},
    {3.0, 100, 16.2895, 16.0417, 16.3885}, {3.0, 105, 14.4531, 14.3343, 14.6656},
    {3.0, 110, 12.7882, 12.4514, 12.7617},
}};

inline HestonParams asian_model() {
    return HestonParams(100.0, 0.09, 0.05, 1.15, 0.348, 0.39, -0.64);
}

// ---- arithmetic Asian calls: S0 = 50, v0 = 0.01, r = 0.05, kappa = 2,
// theta = 0.01, rho = 0.5, eta = 0.1; reference is the 1e8-path MC column ----

struct ArithmeticRow {
    double strike;
    double reference;
};

inline constexpr std::array<ArithmeticRow, 13> kArithmeticAsians{{
    {44, 6.92},  {45, 5.97},  {46, 5.03}, {47, 4.11}, {48, 3.245}, {49, 2.46}, {50, 1.79},
    {51, 1.25},  {52, 0.84},  {53, 0.54}, {54, 0.34}, {55, 0.21},  {56, 0.125},
}};

inline HestonParams arithmetic_model() {
    return HestonParams(50.0, 0.01, 0.05, 2.0, 0.01, 0.1, 0.5);
}

// ---- fixed-strike lookback calls: S0 = 100, v0 = 0.16, r = 0.05, kappa = 3,
// theta = 0.04, rho = -0.7, eta = 0.1; reference is the direct Euler run with
// its confidence interval (3000 steps, 1e5 paths) ----------------------------

struct LookbackRow {
    double maturity;
    double strike;
    double euler_price;
    double euler_lo;
    double euler_hi;
};

inline constexpr std::array<LookbackRow, 35> kLookbackCalls{{
    {0.2, 90, 23.4527, 23.3844, 23.5210},  {0.2, 95, 18.5511, 18.4827, 18.6196},
    {0.2, 100, 13.5145, 13.4464, 13.5825}, {0.2, 105, 9.2629, 9.1987, 9.3272},
    {0.2, 110, 6.0746, 6.0185, 6.1306},    {0.4, 90, 27.7252, 27.6333, 27.8172},
    {0.4, 95, 22.7931, 22.7015, 22.8846},  {0.4, 100, 17.8937, 17.8017, 17.9857},
    {0.4, 105, 13.5301, 13.4415, 13.6187}, {0.4, 110, 10.0038, 9.9224, 10.0852},
    {0.5, 90, 29.1737, 29.0738, 29.2735},  {0.5, 95, 24.2728, 24.1733, 24.3722},
    {0.5, 100, 19.4547, 19.3542, 19.5552}, {0.5, 105, 15.1074, 15.0099, 15.2049},
    {0.5, 110, 11.4637, 11.3730, 11.5544}, {1.0, 90, 34.1211, 33.9910, 34.2511},
    {1.0, 95, 29.4579, 29.3273, 29.5886},  {1.0, 100, 24.6878, 24.5573, 24.8184},
    {1.0, 105, 20.1960, 20.0686, 20.3234}, {1.0, 110, 16.5429, 16.4206, 16.6652},
    {1.5, 90, 37.6113, 37.4587, 37.7640},  {1.5, 95, 33.2861, 33.1314, 33.4408},
    {1.5, 100, 28.5915, 28.4380, 28.7451}, {1.5, 105, 24.2427, 24.0913, 24.3941},
    {1.5, 110, 20.4593, 20.3131, 20.6054}, {2.0, 90, 41.0722, 40.8963, 41.2481},
    {2.0, 95, 36.6204, 36.4454, 36.7953},  {2.0, 100, 31.9362, 31.7612, 32.1112},
    {2.0, 105, 27.8954, 27.7220, 28.0688}, {2.0, 110, 24.0406, 23.8719, 24.2093},
    {3.0, 90, 47.0043, 46.7881, 47.2205},  {3.0, 95, 42.6606, 42.4453, 42.8759},
    {3.0, 100, 38.6746, 38.4588, 38.8903}, {3.0, 105, 34.5038, 34.2898, 34.7177},
    {3.0, 110, 30.7339, 30.5229, 30.9449},
}};

inline HestonParams lookback_model() {
    return HestonParams(100.0, 0.16, 0.05, 3.0, 0.04, 0.1, -0.7);
}

}  // namespace svtree::bench
