// Deterministic synthetic price series for the market-data tests.
#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "tunnelgate/marketdata.hpp"

namespace tunnelgate::testing {

inline marketdata::Date day_after(marketdata::Date start, int offset) {
    return marketdata::Date{std::chrono::sys_days{start} + std::chrono::days{offset}};
}

/// Bars whose closes are `closes`; open is the previous close and the wicks
/// sit 0.1% outside the body.
inline marketdata::PriceSeries series_from_closes(const std::vector<double>& closes, std::string symbol = "SYN") {
    using namespace std::chrono;
    marketdata::PriceSeries s{std::move(symbol), {}};
    const marketdata::Date start{year{2013}, month{1}, day{1}};
    for (std::size_t i = 0; i < closes.size(); ++i) {
        const double c = closes[i];
        const double o = i == 0 ? c : closes[i - 1];
        s.bars.push_back({day_after(start, static_cast<int>(i)), o, std::max(o, c) * 1.001,
                          std::min(o, c) * 0.999, c, 1000.0});
    }
    return s;
}

/// Step a so that `returns` alternating log returns +a,-a,... have annualized
/// sample standard deviation `sigma`.
inline double alternating_step(double sigma, std::size_t returns) {
    const double n = static_cast<double>(returns);
    const double factor = returns % 2 == 0 ? n / (n - 1.0) : (n + 1.0) / n;
    return sigma / std::sqrt(marketdata::kTradingDaysPerYear) / std::sqrt(factor);
}

/// Appends `count` alternating log returns (starting upward) of step `a`.
inline void append_alternating(std::vector<double>& closes, double a, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) closes.push_back(closes.back() * std::exp(i % 2 == 0 ? a : -a));
}

/// Calm-after-storm series: 39 + lead returns at sigma_before, then
/// short_returns at sigma_after. The drop lands on index `drop_index()`.
struct VolFall {
    double sigma_before;
    double sigma_after;
    std::size_t lead = 20;
    std::size_t long_returns = 39;
    std::size_t short_returns = 9;

    std::vector<double> closes() const {
        std::vector<double> c{100.0};
        append_alternating(c, alternating_step(sigma_before, long_returns), lead + long_returns);
        append_alternating(c, alternating_step(sigma_after, short_returns), short_returns);
        return c;
    }
    std::size_t drop_index() const { return lead + long_returns + short_returns; }
};

} // namespace tunnelgate::testing
