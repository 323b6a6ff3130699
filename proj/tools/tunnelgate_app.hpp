/**
 * @file tunnelgate_app.hpp
 * @brief Command-line front end: argument handling, config, output formats
 *
 * Exit codes: 0 success, 1 verification failure, 2 usage/parameter/input
 * error, 3 regime error (lambda * K^2 >= 1).
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tunnelgate/barrier.hpp"
#include "tunnelgate/marketdata.hpp"
#include "tunnelgate/model.hpp"
#include "tunnelgate/spectral.hpp"
#include "tunnelgate/verify.hpp"

namespace tunnelgate::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kRegime = 3 };

enum class OutputFormat { Table, Csv, Json };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "table") return OutputFormat::Table;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw InvalidParameter("unknown format '" + s + "' (expected table, csv or json)");
}

struct RunConfig {
    double r = 0.03;
    OutputFormat format = OutputFormat::Table;
    marketdata::RangeOptions range;
    marketdata::VolDropOptions drop;
    double quad_tol = 1e-10;
    double regime_tol = kDefaultCriticalTolerance;

    void validate() const {
        if (!(r > 0.0)) throw InvalidParameter("config: r must be > 0");
        if (range.window < 5) throw InvalidParameter("config: range_window must be >= 5");
        if (!(range.lower_quantile >= 0.0 && range.lower_quantile < range.upper_quantile &&
              range.upper_quantile <= 1.0))
            throw InvalidParameter("config: quantiles must satisfy 0 <= lower < upper <= 1");
        if (!(range.min_flatness >= 0.0 && range.min_flatness <= 1.0))
            throw InvalidParameter("config: min_flatness must be in [0, 1]");
        if (drop.short_window < 3 || drop.long_window <= drop.short_window)
            throw InvalidParameter("config: need long_window > short_window >= 3");
        if (!(drop.ratio_threshold > 0.0 && drop.ratio_threshold < 1.0))
            throw InvalidParameter("config: drop_ratio must be in (0, 1)");
        if (!(quad_tol > 0.0)) throw InvalidParameter("config: quad_tol must be > 0");
        if (!(regime_tol >= 0.0)) throw InvalidParameter("config: regime_tol must be >= 0");
    }
};

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw InvalidParameter("config: top level must be an object");
    RunConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "r") cfg.r = value.get<double>();
            else if (key == "format") cfg.format = parse_format(value.get<std::string>());
            else if (key == "range_window") cfg.range.window = value.get<std::size_t>();
            else if (key == "lower_quantile") cfg.range.lower_quantile = value.get<double>();
            else if (key == "upper_quantile") cfg.range.upper_quantile = value.get<double>();
            else if (key == "min_flatness") cfg.range.min_flatness = value.get<double>();
            else if (key == "long_window") cfg.drop.long_window = value.get<std::size_t>();
            else if (key == "short_window") cfg.drop.short_window = value.get<std::size_t>();
            else if (key == "drop_ratio") cfg.drop.ratio_threshold = value.get<double>();
            else if (key == "quad_tol") cfg.quad_tol = value.get<double>();
            else if (key == "regime_tol") cfg.regime_tol = value.get<double>();
            else throw InvalidParameter("config: unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot read config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// ---------------------------------------------------------------------------
// Tabular output

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double v, int significant) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, v);
    return buf;
}

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string cell_text(const Cell& c, int significant) {
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, double>) return format_double(v, significant);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else return v;
        },
        c);
}

inline nlohmann::json table_to_json(const Table& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) obj[table.columns[i]] = nullptr;
                    else obj[table.columns[i]] = v;
                },
                row[i]);
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

inline void render(const Table& table, OutputFormat format, std::ostream& out) {
    switch (format) {
    case OutputFormat::Json:
        out << table_to_json(table).dump(2) << '\n';
        return;
    case OutputFormat::Csv:
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            out << (i ? "," : "") << table.columns[i];
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i], 10);
            out << '\n';
        }
        return;
    case OutputFormat::Table: {
        std::vector<std::vector<std::string>> text;
        std::vector<std::size_t> width(table.columns.size());
        for (std::size_t i = 0; i < table.columns.size(); ++i) width[i] = table.columns[i].size();
        for (const auto& row : table.rows) {
            auto& line = text.emplace_back();
            for (std::size_t i = 0; i < row.size(); ++i) {
                line.push_back(cell_text(row[i], 6));
                width[i] = std::max(width[i], line.back().size());
            }
        }
        auto emit = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out << "  ";
                out << std::string(width[i] - cells[i].size(), ' ') << cells[i];
            }
            out << '\n';
        };
        emit(table.columns);
        for (const auto& line : text) emit(line);
        return;
    }
    }
}

// ---------------------------------------------------------------------------
// Commands

inline Table lambda_table(const MarketParams& p) {
    return {{"r", "sigma", "lambda"}, {{p.r(), p.sigma(), compute_lambda(p).value}}};
}

inline Table decay_table(const MarketParams& p, double t) {
    return {{"r", "sigma", "t", "decay"}, {{p.r(), p.sigma(), t, time_decay(p, t)}}};
}

inline Table geometry_table(const MarketParams& p, const RangeBound& range, double regime_tol) {
    const Lambda lambda = compute_lambda(p);
    const BarrierGeometry geo = barrier_geometry(p, range);
    return {{"r", "sigma", "K", "lambda", "v0", "s_r", "d", "strike_bound", "regime"},
            {{p.r(), p.sigma(), range.width(), lambda.value, geo.v0, geo.s_r, geo.d,
              strike_bound(lambda), std::string(to_string(classify_regime(lambda, geo, regime_tol)))}}};
}

inline Table transmit_table(const MarketParams& p, const RangeBound& range) {
    const TransmissionResult tr = transmission_wkb(p, range);
    const Lambda lambda = compute_lambda(p);
    const BarrierGeometry geo = barrier_geometry(p, range);
    const WaveNumbers wn = wave_numbers(p, lambda, geo.v0);
    return {{"r", "sigma", "K", "lambda", "k", "q", "d", "wkb_exponent", "T_wkb", "T_exact", "T_thick"},
            {{p.r(), p.sigma(), range.width(), lambda.value, wn.k, wn.q, geo.d, tr.wkb_exponent, tr.t_wkb,
              tr.t_exact, tr.t_thick}}};
}

inline Table modes_table(const MarketParams& p, double width, int count, std::optional<double> at) {
    Table t{{"n", "K", "amplitude", "eigenvalue"}, {}};
    if (at) t.columns.push_back("value_at_" + format_double(*at, 6));
    for (int n = 1; n <= count; ++n) {
        const StationaryMode mode(n, width);
        std::vector<Cell> row{static_cast<long long>(n), width, mode.amplitude(), mode_eigenvalue(p, mode)};
        if (at) row.emplace_back(mode_value(mode, *at));
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Sweep of T and d over the two standard parameter grids.
inline Table sweep_table(const std::string& which, double strike) {
    std::vector<std::pair<double, double>> grid;
    if (which == "table1") {
        for (double r : {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07}) grid.emplace_back(r, 0.53);
    } else if (which == "table2") {
        for (double s : {0.43, 0.53, 0.63, 0.73, 0.83, 0.93, 0.97}) grid.emplace_back(0.05, s);
    } else {
        throw InvalidParameter("unknown table '" + which + "' (expected table1 or table2)");
    }
    Table t{{"r", "sigma", "K", "T", "T_percent", "d", "d_rounded"}, {}};
    const RangeBound range = RangeBound::from_width(strike);
    for (const auto& [r, sigma] : grid) {
        const MarketParams p(r, sigma);
        const BarrierGeometry geo = barrier_geometry(p, range);
        Cell tcell, tpct;
        try {
            const double tw = transmission_wkb(p, range).t_wkb;
            tcell = tw;
            tpct = fixed(100.0 * tw, 2);
        } catch (const AboveBarrier&) {
        }
        t.rows.push_back({r, sigma, strike, tcell, tpct, geo.d, fixed(geo.d, 2)});
    }
    return t;
}

inline Table report_table(const std::vector<marketdata::BreakoutReport>& reports) {
    Table t{{"symbol", "date", "r", "sigma", "price_at_resistance", "price_at_support", "K", "d", "T",
             "vol_fall_before", "vol_fall_after", "regime"},
            {}};
    auto opt = [](const std::optional<double>& v) -> Cell { return v ? Cell{*v} : Cell{}; };
    for (const auto& rep : reports) {
        t.rows.push_back({rep.symbol, marketdata::format_date(rep.from) + "/" + marketdata::format_date(rep.to),
                          rep.r, rep.sigma, opt(rep.price_at_resistance), opt(rep.price_at_support), opt(rep.k),
                          opt(rep.d), opt(rep.t), opt(rep.vol_fall_before), opt(rep.vol_fall_after),
                          std::string(to_string(rep.flag))});
    }
    return t;
}

inline marketdata::BreakoutReport analyze_series(const marketdata::PriceSeries& series, const RunConfig& cfg,
                                                 std::optional<double> sigma_override) {
    using namespace marketdata;
    const auto detection = detect_range(series, cfg.range);
    const double sigma = sigma_override ? *sigma_override : estimate_volatility(series, cfg.range.window);
    if (!detection) return no_range_report(series, cfg.r, sigma, cfg.range.window);

    std::optional<VolatilityDrop> chosen;
    if (series.size() >= cfg.drop.long_window + cfg.drop.short_window - 1) {
        for (const auto& drop : detect_vol_drop(series, cfg.drop)) {
            if (drop.at < detection->first || drop.at > detection->last) continue;
            if (!chosen || drop.ratio <= chosen->ratio) chosen = drop;
        }
    }
    return build_report(series, cfg.r, *detection, chosen, sigma);
}

inline std::vector<std::string> collect_inputs(const std::vector<std::string>& args) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    for (const auto& a : args) {
        std::error_code ec;
        if (fs::is_directory(a, ec)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(a, ec))
                if (entry.is_regular_file() && entry.path().extension() == ".csv")
                    found.push_back(entry.path().string());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(a);
        }
    }
    return files;
}

struct ScanOutcome {
    std::optional<marketdata::BreakoutReport> report;
    std::string error;
};

inline int cmd_scan(const std::vector<std::string>& inputs, const RunConfig& cfg,
                    std::optional<double> sigma_override, std::ostream& out, std::ostream& err) {
    const auto files = collect_inputs(inputs);
    if (files.empty()) {
        err << "error: no input files\n";
        return kUsage;
    }
    std::vector<std::future<ScanOutcome>> jobs;
    for (const auto& path : files) {
        jobs.push_back(std::async(std::launch::async, [&cfg, sigma_override, path]() -> ScanOutcome {
            try {
                return {analyze_series(marketdata::load_csv(path), cfg, sigma_override), {}};
            } catch (const DataError& e) {
                return {std::nullopt, e.what()};
            } catch (const Error& e) {
                return {std::nullopt, path + ": " + e.what()};
            }
        }));
    }
    std::vector<marketdata::BreakoutReport> reports;
    for (auto& job : jobs) {
        ScanOutcome outcome = job.get();
        if (outcome.report) reports.push_back(std::move(*outcome.report));
        else err << "error: " << outcome.error << '\n';
    }
    if (reports.empty()) return kUsage;
    render(report_table(reports), cfg.format, out);
    return kOk;
}

struct VerifyOptions {
    std::size_t samples = 100;
    std::uint64_t seed = 20130207;
    bool negative_control = false;
};

struct RandomBarrier {
    double r;
    double sigma;
    double width;
};

/// Random (r, sigma, K) with lambda K^2 < 1.
inline std::vector<RandomBarrier> random_barriers(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rate(0.01, 0.15), vol(0.05, 2.0), frac(0.05, 0.995);
    std::vector<RandomBarrier> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = rate(rng);
        const double sigma = vol(rng);
        out.push_back({r, sigma, std::sqrt(sigma / r) * frac(rng)});
    }
    return out;
}

inline int cmd_verify(const RunConfig& cfg, const VerifyOptions& vo, std::ostream& out) {
    struct Check {
        std::string name;
        bool pass;
        std::string detail;
    };
    std::vector<Check> checks;
    nlohmann::json doc = nlohmann::json::object();

    {
        double worst = 0.0, worst_identity = 0.0;
        std::string failure;
        nlohmann::json samples = nlohmann::json::array();
        for (const auto& b : random_barriers(vo.samples, vo.seed)) {
            const MarketParams p(b.r, b.sigma);
            const RangeBound range = RangeBound::from_width(b.width);
            const Lambda lambda = compute_lambda(p);
            const BarrierGeometry geo = barrier_geometry(p, range);
            const WaveNumbers wn = wave_numbers(p, lambda, geo.v0);
            const double via_ratio = 1.0 / amplitude_ratio(wn.k, wn.q, geo.d);
            const double exact = transmission_exact(p, range);
            worst_identity = std::max(worst_identity, std::abs(exact - via_ratio) / exact);
            if (!failure.empty()) continue;
            try {
                const verify::QuadratureResult q = verify::wkb_exponent_quadrature(p, range, cfg.quad_tol);
                worst = std::max(worst, std::abs(q.value - wkb_exponent(p, range)));
                samples.push_back({{"r", b.r}, {"sigma", b.sigma}, {"K", b.width}, {"value", q.value},
                                   {"abs_error_estimate", q.abs_error_estimate}, {"evaluations", q.evaluations}});
            } catch (const ToleranceNotMet& e) {
                failure = std::string("tolerance-not-met: ") + e.what();
            }
        }
        const double bound = std::max(1e-8, 10.0 * cfg.quad_tol);
        const bool quad_ok = failure.empty() && worst <= bound;
        checks.push_back({"quadrature_vs_closed_form", quad_ok,
                          failure.empty() ? "max |diff| " + format_double(worst, 3) + " <= " + format_double(bound, 3)
                                          : failure});
        checks.push_back({"exact_vs_amplitude_ratio", worst_identity <= 1e-12,
                          "max rel diff " + format_double(worst_identity, 3)});
        doc["quadrature"] = samples;
    }

    auto report_json = [](const verify::ResidualReport& rep) {
        nlohmann::json j{{"spacings", rep.spacings},
                         {"max_abs_residual", rep.max_abs_residual},
                         {"l2_residual", rep.l2_residual}};
        j["convergence_order"] = rep.convergence_order ? nlohmann::json(*rep.convergence_order) : nlohmann::json();
        return j;
    };
    const MarketParams pde_params(0.03, 0.47);
    const Lambda lambda = compute_lambda(pde_params);
    try {
        const auto rep = verify::residual_convergence_study(pde_params, lambda, lambda);
        const double order = rep.convergence_order.value_or(0.0);
        checks.push_back({"pde_residual_convergence", order >= 1.9, "order " + format_double(order, 4)});
        doc["residual"] = report_json(rep);
        if (vo.negative_control) {
            const auto bad = verify::residual_convergence_study(pde_params, lambda, Lambda(2.0 * lambda.value));
            const double bad_order = bad.convergence_order.value_or(0.0);
            const bool stalls = bad_order < 0.5 && bad.max_abs_residual.back() > 1e-3;
            checks.push_back({"pde_residual_negative_control", stalls,
                              "order " + format_double(bad_order, 4) + ", finest residual " +
                                  format_double(bad.max_abs_residual.back(), 3) + " (non-convergence expected)"});
            doc["negative_control"] = report_json(bad);
        }
    } catch (const Error& e) {
        checks.push_back({"pde_residual_convergence", false, e.what()});
    }

    bool all = true;
    for (const auto& c : checks) all = all && c.pass;
    if (cfg.format == OutputFormat::Json) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& c : checks) list.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        doc["checks"] = list;
        out << doc.dump(2) << '\n';
    } else {
        Table t{{"check", "status", "detail"}, {}};
        for (const auto& c : checks) t.rows.push_back({c.name, std::string(c.pass ? "pass" : "FAIL"), c.detail});
        render(t, cfg.format, out);
    }
    return all ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Range-bound option model: separation constant, barrier geometry, breakout probabilities"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format_flag, config_path;
    auto* format_opt = app.add_option("--format", format_flag, "Output format")
                           ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--config", config_path, "JSON config file (or TUNNELGATE_CONFIG)");

    std::optional<double> r, sigma, strike, support, resistance;
    double t = 0.0;
    auto add_market = [&](CLI::App* sub, bool need_sigma) {
        sub->add_option("--r", r, "Annualized risk-free rate")->check(CLI::PositiveNumber);
        auto* s = sub->add_option("--sigma", sigma, "Annualized volatility")->check(CLI::PositiveNumber);
        if (need_sigma) s->required();
    };
    auto add_range = [&](CLI::App* sub) {
        auto* k = sub->add_option("--strike", strike, "Box width K (strike at resistance)")->check(CLI::PositiveNumber);
        auto* lo = sub->add_option("--support", support, "Support price");
        auto* hi = sub->add_option("--resistance", resistance, "Resistance price");
        lo->needs(hi);
        hi->needs(lo);
        k->excludes(lo);
    };

    auto* c_lambda = app.add_subcommand("lambda", "Separation constant r/sigma");
    add_market(c_lambda, true);
    auto* c_decay = app.add_subcommand("decay", "Option time decay factor");
    add_market(c_decay, true);
    c_decay->add_option("--t", t, "Time in years")->check(CLI::NonNegativeNumber);
    auto* c_geometry = app.add_subcommand("geometry", "V0, exit price, penetration distance, regime");
    add_market(c_geometry, true);
    add_range(c_geometry);
    auto* c_transmit = app.add_subcommand("transmit", "Transmission coefficients");
    add_market(c_transmit, true);
    add_range(c_transmit);
    auto* c_modes = app.add_subcommand("modes", "Stationary box modes");
    add_market(c_modes, true);
    add_range(c_modes);
    int mode_count = 3;
    std::optional<double> mode_at;
    c_modes->add_option("--n", mode_count, "Number of modes")->check(CLI::PositiveNumber);
    c_modes->add_option("--at", mode_at, "Evaluate each mode at this offset from support");

    auto* c_tables = app.add_subcommand("tables", "Transmission/penetration sweeps");
    std::string which;
    double table_strike = 2.40;
    c_tables->add_option("which", which, "table1 or table2")->required()->check(CLI::IsMember({"table1", "table2"}));
    c_tables->add_option("--strike", table_strike, "Box width K")->check(CLI::PositiveNumber);

    auto* c_scan = app.add_subcommand("scan", "Breakout report rows from OHLC CSV files");
    std::vector<std::string> inputs;
    c_scan->add_option("inputs", inputs, "CSV files or directories")->required();
    add_market(c_scan, false);
    std::optional<std::size_t> range_window, long_window, short_window;
    std::optional<double> flatness, drop_ratio, lower_q, upper_q;
    c_scan->add_option("--range-window", range_window, "Bars in the trailing range window");
    c_scan->add_option("--lower-quantile", lower_q, "Support quantile of lows");
    c_scan->add_option("--upper-quantile", upper_q, "Resistance quantile of highs");
    c_scan->add_option("--min-flatness", flatness, "Minimum flatness score");
    c_scan->add_option("--long-window", long_window, "Volatility long window (closes)");
    c_scan->add_option("--short-window", short_window, "Volatility short window (closes)");
    c_scan->add_option("--drop-ratio", drop_ratio, "Short/long volatility ratio counted as a drop");

    auto* c_verify = app.add_subcommand("verify", "Run the numerical oracles");
    VerifyOptions vo;
    std::optional<double> quad_tol;
    c_verify->add_option("--quad-tol", quad_tol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
    c_verify->add_option("--samples", vo.samples, "Random parameter sets")->check(CLI::PositiveNumber);
    c_verify->add_option("--seed", vo.seed, "Sampling seed");
    c_verify->add_flag("--negative-control", vo.negative_control, "Also run the inconsistent time-factor check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        RunConfig cfg;
        if (config_path.empty())
            if (const char* env = std::getenv("TUNNELGATE_CONFIG"); env && *env) config_path = env;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (format_opt->count()) cfg.format = parse_format(format_flag);
        if (r) cfg.r = *r;
        if (range_window) cfg.range.window = *range_window;
        if (lower_q) cfg.range.lower_quantile = *lower_q;
        if (upper_q) cfg.range.upper_quantile = *upper_q;
        if (flatness) cfg.range.min_flatness = *flatness;
        if (long_window) cfg.drop.long_window = *long_window;
        if (short_window) cfg.drop.short_window = *short_window;
        if (drop_ratio) cfg.drop.ratio_threshold = *drop_ratio;
        if (quad_tol) cfg.quad_tol = *quad_tol;
        cfg.validate();

        auto range = [&]() -> RangeBound {
            if (strike) return RangeBound::from_width(*strike);
            if (support && resistance) return RangeBound(*support, *resistance);
            throw InvalidParameter("--strike or --support/--resistance is required");
        };

        if (c_scan->parsed()) return cmd_scan(inputs, cfg, sigma, out, err);
        if (c_verify->parsed()) return cmd_verify(cfg, vo, out);
        if (c_tables->parsed()) {
            render(sweep_table(which, table_strike), cfg.format, out);
            return kOk;
        }

        const MarketParams params(cfg.r, *sigma);
        if (c_lambda->parsed()) render(lambda_table(params), cfg.format, out);
        else if (c_decay->parsed()) render(decay_table(params, t), cfg.format, out);
        else if (c_geometry->parsed()) render(geometry_table(params, range(), cfg.regime_tol), cfg.format, out);
        else if (c_transmit->parsed()) render(transmit_table(params, range()), cfg.format, out);
        else if (c_modes->parsed()) render(modes_table(params, range().width(), mode_count, mode_at), cfg.format, out);
        return kOk;
    } catch (const AboveBarrier& e) {
        err << "regime error: " << e.what() << '\n';
        return kRegime;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

} // namespace tunnelgate::cli
