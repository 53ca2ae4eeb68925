#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

namespace svtree {

// Numerical procedure failed to reach its accuracy target.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request exceeds a configured memory or step budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PayoffKind {
    Put,
    Call,
    LookbackFixedStrikePut,
    LookbackFixedStrikeCall,
    AsianGeometricCall,
    AsianArithmeticCall,
};

enum class Exercise { European, American };

inline bool is_vanilla(PayoffKind k) {
    return k == PayoffKind::Put || k == PayoffKind::Call;
}

inline bool is_asian(PayoffKind k) {
    return k == PayoffKind::AsianGeometricCall || k == PayoffKind::AsianArithmeticCall;
}

inline bool is_lookback(PayoffKind k) {
    return k == PayoffKind::LookbackFixedStrikePut || k == PayoffKind::LookbackFixedStrikeCall;
}

struct PayoffSpec {
    PayoffKind kind = PayoffKind::Put;
    Exercise exercise = Exercise::European;
    double strike = 0.0;
    double maturity = 0.0;

    PayoffSpec() = default;
    PayoffSpec(PayoffKind kind_, Exercise ex_, double strike_, double maturity_)
        : kind(kind_), exercise(ex_), strike(strike_), maturity(maturity_) {
        if (!(strike > 0.0)) throw std::invalid_argument("PayoffSpec: strike must be > 0");
        if (!(maturity > 0.0)) throw std::invalid_argument("PayoffSpec: maturity must be > 0");
    }
};

struct PriceEstimate {
    double price = 0.0;
    std::optional<double> std_error;                    // absent for deterministic engines
    std::optional<std::pair<double, double>> ci95;      // price +- 1.96 std_error
    std::optional<long long> num_paths;
};

inline PriceEstimate exact_estimate(double price) { return PriceEstimate{price, {}, {}, {}}; }

inline PriceEstimate mc_estimate(double price, double std_error, long long num_paths) {
    PriceEstimate e;
    e.price = price;
    e.std_error = std_error;
    e.ci95 = std::make_pair(price - 1.96 * std_error, price + 1.96 * std_error);
    e.num_paths = num_paths;
    return e;
}

}  // namespace svtree
