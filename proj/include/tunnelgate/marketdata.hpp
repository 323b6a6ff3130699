/**
 * @file marketdata.hpp
 * @brief OHLC ingestion, realized volatility, range and volatility-drop detection,
 *        and breakout report rows
 *
 * CSV layout: header `date,open,high,low,close,volume`, ISO dates, one bar per
 * line in any order. Rows are sorted on load and duplicate dates rejected.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tunnelgate/barrier.hpp"
#include "tunnelgate/error.hpp"
#include "tunnelgate/model.hpp"

namespace tunnelgate::marketdata {

using Date = std::chrono::year_month_day;

inline constexpr double kTradingDaysPerYear = 252.0;

struct Bar {
    Date date;
    double open;
    double high;
    double low;
    double close;
    double volume;
};

struct PriceSeries {
    std::string symbol;
    std::vector<Bar> bars;

    std::size_t size() const noexcept { return bars.size(); }
    bool empty() const noexcept { return bars.empty(); }
};

struct RangeDetection {
    double support;
    double resistance;
    std::size_t first; ///< first bar index of the window
    std::size_t last;  ///< last bar index of the window (inclusive)
    double flatness;   ///< 1 = no drift across the band, 0 = drift spans it

    double width() const noexcept { return resistance - support; }
};

struct VolatilityDrop {
    double sigma_before;
    double sigma_after;
    double ratio;
    std::size_t at; ///< bar index closing the short window
};

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::optional<Date> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    auto digits = [](std::string_view part, auto& value) {
        if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return false;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        return ec == std::errc{} && ptr == part.data() + part.size();
    };
    if (!digits(s.substr(0, 4), y) || !digits(s.substr(5, 2), m) || !digits(s.substr(8, 2), d))
        return std::nullopt;
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

inline std::optional<double> parse_decimal(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

/// Sample standard deviation of log returns, annualized.
inline double realized_volatility(std::span<const double> closes) {
    const std::size_t n = closes.size() - 1;
    std::vector<double> returns(n);
    for (std::size_t i = 0; i < n; ++i) returns[i] = std::log(closes[i + 1] / closes[i]);
    double mean = 0.0;
    for (double x : returns) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : returns) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(n - 1)) * std::sqrt(kTradingDaysPerYear);
}

inline std::vector<double> closes_of(const PriceSeries& series) {
    std::vector<double> closes(series.size());
    std::transform(series.bars.begin(), series.bars.end(), closes.begin(),
                   [](const Bar& b) { return b.close; });
    return closes;
}

/// Linear-interpolated quantile of an unsorted sample.
inline double quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

} // namespace detail

/// Parses CSV text; `symbol` labels the resulting series.
inline PriceSeries parse_csv(std::string_view text, std::string symbol = {}) {
    PriceSeries series{std::move(symbol), {}};
    std::vector<std::size_t> line_of;
    std::size_t line_no = 0;
    bool header_seen = false;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (detail::trim(line).empty()) continue;

        const auto fields = detail::split(line, ',');
        if (!header_seen) {
            static constexpr std::string_view expected[] = {"date", "open", "high", "low", "close", "volume"};
            bool ok = fields.size() == 6;
            for (std::size_t i = 0; ok && i < 6; ++i) ok = fields[i] == expected[i];
            if (!ok) throw DataError("expected header date,open,high,low,close,volume", line_no);
            header_seen = true;
            continue;
        }
        if (fields.size() != 6)
            throw DataError("expected 6 fields, found " + std::to_string(fields.size()), line_no);

        const auto date = detail::parse_date(fields[0]);
        if (!date) throw DataError("invalid date '" + std::string(fields[0]) + "'", line_no);
        static constexpr const char* names[] = {"open", "high", "low", "close", "volume"};
        double v[5];
        for (std::size_t i = 0; i < 5; ++i) {
            const auto parsed = detail::parse_decimal(fields[i + 1]);
            if (!parsed)
                throw DataError(std::string("invalid ") + names[i] + " '" + std::string(fields[i + 1]) + "'", line_no);
            v[i] = *parsed;
        }
        const Bar bar{*date, v[0], v[1], v[2], v[3], v[4]};
        const std::string where = "bar " + format_date(bar.date) + ": ";
        if (!(bar.open > 0.0 && bar.high > 0.0 && bar.low > 0.0 && bar.close > 0.0))
            throw DataError(where + "prices must be > 0", line_no);
        if (bar.volume < 0.0) throw DataError(where + "volume must be >= 0", line_no);
        if (bar.low > bar.high) throw DataError(where + "low exceeds high", line_no);
        if (bar.low > std::min(bar.open, bar.close)) throw DataError(where + "low above open/close", line_no);
        if (bar.high < std::max(bar.open, bar.close)) throw DataError(where + "high below open/close", line_no);
        series.bars.push_back(bar);
        line_of.push_back(line_no);
    }
    if (!header_seen) throw DataError("missing header", 0);
    if (series.bars.empty()) throw DataError("no bars after header", 0);

    std::vector<std::size_t> order(series.bars.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return series.bars[a].date < series.bars[b].date;
    });
    std::vector<Bar> sorted;
    sorted.reserve(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && series.bars[order[k]].date == series.bars[order[k - 1]].date)
            throw DataError("duplicate date " + format_date(series.bars[order[k]].date),
                            line_of[order[k]]);
        sorted.push_back(series.bars[order[k]]);
    }
    series.bars = std::move(sorted);
    return series;
}

inline PriceSeries load_csv(const std::string& path, std::string symbol = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file", 0, path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (symbol.empty()) {
        const auto slash = path.find_last_of("/\\");
        symbol = path.substr(slash == std::string::npos ? 0 : slash + 1);
        if (const auto dot = symbol.rfind('.'); dot != std::string::npos && dot > 0) symbol.resize(dot);
    }
    try {
        return parse_csv(buf.str(), std::move(symbol));
    } catch (const DataError& e) {
        throw DataError(e.message(), e.line(), path);
    }
}

/// Annualized close-to-close volatility over the trailing `window` closes
/// (window - 1 log returns).
inline double estimate_volatility(const PriceSeries& series, std::size_t window) {
    if (window < 3) throw InsufficientData("volatility window must cover at least 3 closes");
    if (series.size() < window)
        throw InsufficientData("series has " + std::to_string(series.size()) +
                               " bars, window needs " + std::to_string(window));
    const auto closes = detail::closes_of(series);
    return detail::realized_volatility(std::span(closes).last(window));
}

struct RangeOptions {
    std::size_t window = 40;
    double lower_quantile = 0.05;
    double upper_quantile = 0.95;
    double min_flatness = 0.5;
};

inline std::optional<RangeDetection> detect_range(const PriceSeries& series, const RangeOptions& opts = {}) {
    if (opts.window < 5) throw InsufficientData("range window must be >= 5");
    if (series.size() < opts.window) throw InsufficientData("series shorter than range window");
    if (!(opts.lower_quantile >= 0.0 && opts.lower_quantile < opts.upper_quantile && opts.upper_quantile <= 1.0))
        throw InvalidParameter("band quantiles must satisfy 0 <= lower < upper <= 1");

    const std::size_t first = series.size() - opts.window;
    std::vector<double> lows, highs, closes;
    for (std::size_t i = first; i < series.size(); ++i) {
        lows.push_back(series.bars[i].low);
        highs.push_back(series.bars[i].high);
        closes.push_back(series.bars[i].close);
    }
    const double support = detail::quantile(lows, opts.lower_quantile);
    const double resistance = detail::quantile(highs, opts.upper_quantile);
    if (!(resistance > support)) return std::nullopt;

    const double n = static_cast<double>(opts.window);
    const double x_mean = (n - 1.0) / 2.0;
    double y_mean = 0.0;
    for (double c : closes) y_mean += c;
    y_mean /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        const double dx = static_cast<double>(i) - x_mean;
        sxy += dx * (closes[i] - y_mean);
        sxx += dx * dx;
    }
    const double slope = sxy / sxx;
    const double flatness = std::clamp(1.0 - std::abs(slope) * n / (resistance - support), 0.0, 1.0);
    if (flatness < opts.min_flatness) return std::nullopt;
    return RangeDetection{support, resistance, first, series.size() - 1, flatness};
}

struct VolDropOptions {
    std::size_t long_window = 40;
    std::size_t short_window = 10;
    double ratio_threshold = 0.75;
};

/// Every bar whose short-window volatility has fallen to at most
/// `ratio_threshold` of the long-window volatility immediately before it.
inline std::vector<VolatilityDrop> detect_vol_drop(const PriceSeries& series, const VolDropOptions& opts = {}) {
    if (opts.short_window < 3) throw InsufficientData("short window must cover at least 3 closes");
    if (opts.long_window <= opts.short_window) throw InvalidParameter("long window must exceed short window");
    const std::size_t span_needed = opts.long_window + opts.short_window - 1;
    if (series.size() < span_needed)
        throw InsufficientData("series has " + std::to_string(series.size()) + " bars, need " +
                               std::to_string(span_needed));

    const auto closes = detail::closes_of(series);
    const std::span<const double> all(closes);
    std::vector<VolatilityDrop> drops;
    for (std::size_t at = span_needed - 1; at < closes.size(); ++at) {
        const std::size_t short_first = at + 1 - opts.short_window;
        const double after = detail::realized_volatility(all.subspan(short_first, opts.short_window));
        const double before =
            detail::realized_volatility(all.subspan(short_first + 1 - opts.long_window, opts.long_window));
        if (!(before > 0.0)) continue;
        const double ratio = after / before;
        if (ratio <= opts.ratio_threshold) drops.push_back({before, after, ratio, at});
    }
    return drops;
}

enum class ReportFlag { RangeBound, Critical, Trending, NoRange };

inline std::string_view to_string(ReportFlag flag) {
    switch (flag) {
    case ReportFlag::RangeBound: return "range_bound";
    case ReportFlag::Critical: return "critical";
    case ReportFlag::Trending: return "trending";
    case ReportFlag::NoRange: return "no_range";
    }
    return "unknown";
}

/// One row shaped like the empirical breakout table.
struct BreakoutReport {
    std::string symbol;
    Date from;
    Date to;
    double r;
    double sigma;
    std::optional<double> price_at_resistance;
    std::optional<double> price_at_support;
    std::optional<double> k;
    std::optional<double> d;
    std::optional<double> t;
    std::optional<double> vol_fall_before;
    std::optional<double> vol_fall_after;
    ReportFlag flag;
};

inline BreakoutReport build_report(const PriceSeries& series, double r, const RangeDetection& detection,
                                   const std::optional<VolatilityDrop>& drop, double sigma) {
    const MarketParams params(r, sigma);
    const RangeBound range(detection.support, detection.resistance);
    const BarrierGeometry geo = barrier_geometry(params, range);

    BreakoutReport row{series.symbol,
                       series.bars.at(detection.first).date,
                       series.bars.at(detection.last).date,
                       r,
                       sigma,
                       detection.resistance,
                       detection.support,
                       range.width(),
                       geo.d,
                       std::nullopt,
                       std::nullopt,
                       std::nullopt,
                       ReportFlag::RangeBound};
    switch (classify_regime(compute_lambda(params), geo)) {
    case Regime::RangeBound: row.flag = ReportFlag::RangeBound; break;
    case Regime::Critical: row.flag = ReportFlag::Critical; break;
    case Regime::Trending: row.flag = ReportFlag::Trending; break;
    }
    try {
        row.t = transmission_wkb(params, range).t_wkb;
    } catch (const AboveBarrier&) {
        row.t.reset();
    }
    if (drop) {
        row.vol_fall_before = drop->sigma_before;
        row.vol_fall_after = drop->sigma_after;
    }
    return row;
}

/// Row for a series whose trailing window shows no range.
inline BreakoutReport no_range_report(const PriceSeries& series, double r, double sigma, std::size_t window) {
    const std::size_t first = series.size() > window ? series.size() - window : 0;
    return {series.symbol, series.bars.at(first).date, series.bars.back().date, r, sigma,
            std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
            std::nullopt, std::nullopt, ReportFlag::NoRange};
}

} // namespace tunnelgate::marketdata
