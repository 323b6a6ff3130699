#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tunnelgate_app.hpp"

using namespace tunnelgate;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::string kFixtures = TUNNELGATE_FIXTURES_DIR;
const std::string kGolden = TUNNELGATE_GOLDEN_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "tunnelgate");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / ("tunnelgate_" + name)) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("scalar subcommands", "[cli]") {
    auto r = invoke({"lambda", "--r", "0.03", "--sigma", "0.47", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "r,sigma,lambda\n0.03,0.47,0.06382978723\n");

    r = invoke({"decay", "--r", "0.03", "--sigma", "0.47", "--t", "1", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("0.9381646735"));

    r = invoke({"geometry", "--r", "0.03", "--sigma", "0.47", "--strike", "2.4", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("3.958114029,1.558114029,3.958114029,range_bound"));

    r = invoke({"geometry", "--r", "0.03", "--sigma", "0.47", "--support", "123.3", "--resistance", "127.2",
             "--format", "csv"});
    CHECK_THAT(r.out, ContainsSubstring(",3.9,"));
    CHECK_THAT(r.out, ContainsSubstring("0.05811402901"));
}

TEST_CASE("transmit and modes", "[cli]") {
    auto r = invoke({"transmit", "--r", "0.01", "--sigma", "0.53", "--strike", "2.4", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 1);
    CHECK(std::abs(j[0]["T_exact"].get<double>() - 0.731626289584885) < 1e-12);
    CHECK(std::abs(j[0]["wkb_exponent"].get<double>() - 0.318878796049502) < 1e-12);

    r = invoke({"modes", "--r", "0.03", "--sigma", "0.47", "--strike", "2.4", "--n", "2", "--at", "1.2",
             "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("n,K,amplitude,eigenvalue,value_at_1.2\n1,2.4,0.9128709292,11.10827896,0.9128709292\n"));
}

TEST_CASE("human table output", "[cli]") {
    const auto r = invoke({"lambda", "--r", "0.03", "--sigma", "0.47"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("lambda"));
    CHECK_THAT(r.out, ContainsSubstring("0.0638298"));
}

TEST_CASE("sweep tables match the golden files", "[cli]") {
    for (std::string which : {"table1", "table2"}) {
        const auto r = invoke({"tables", which, "--format", "csv"});
        CHECK(r.code == 0);
        CHECK(r.out == slurp(kGolden + "/" + which + ".csv"));
    }
}

TEST_CASE("JSON output round-trips", "[cli]") {
    for (std::vector<std::string> args : {std::vector<std::string>{"tables", "table2", "--format", "json"},
                                          {"geometry", "--r", "0.05", "--sigma", "0.5", "--strike", "3.3", "--format", "json"},
                                          {"scan", kFixtures, "--format", "json"}}) {
        const auto r = invoke(args);
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out).dump(2) + "\n" == r.out);
    }
}

TEST_CASE("exit codes", "[cli]") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"lambda", "--r", "0.03"}).code == 2);
    CHECK(invoke({"lambda", "--r", "0", "--sigma", "0.4"}).code == 2);
    CHECK(invoke({"lambda", "--r", "abc", "--sigma", "0.4"}).code == 2);
    CHECK(invoke({"geometry", "--r", "0.03", "--sigma", "0.47", "--strike", "0"}).code == 2);
    CHECK(invoke({"geometry", "--r", "0.03", "--sigma", "0.47"}).code == 2);
    CHECK(invoke({"decay", "--r", "0.03", "--sigma", "0.47", "--t", "-1"}).code == 2);
    CHECK(invoke({"tables", "table9"}).code == 2);
    CHECK(invoke({"lambda", "--r", "0.03", "--sigma", "0.4", "--format", "xml"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);

    const auto above = invoke({"transmit", "--r", "0.05", "--sigma", "0.5", "--strike", "3.3"});
    CHECK(above.code == 3);
    CHECK_THAT(above.err, ContainsSubstring("regime error"));
    // Geometry still reports a trending box.
    const auto geo = invoke({"geometry", "--r", "0.05", "--sigma", "0.5", "--strike", "3.3", "--format", "csv"});
    CHECK(geo.code == 0);
    CHECK_THAT(geo.out, ContainsSubstring("trending"));
}

TEST_CASE("scan over the fixture directory", "[cli][scan]") {
    const auto r = invoke({"scan", kFixtures, "--format", "json"});
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    std::map<std::string, nlohmann::json> rows;
    for (const auto& row : nlohmann::json::parse(r.out)) rows[row["symbol"].get<std::string>()] = row;
    REQUIRE(rows.size() == 6);

    const auto& lnkd = rows["lnkd_like"];
    CHECK(lnkd["date"] == "2013-03-02/2013-04-10");
    CHECK(lnkd["regime"] == "range_bound");
    CHECK(std::abs(lnkd["sigma"].get<double>() - 0.47) < 1e-9);
    CHECK(std::abs(lnkd["K"].get<double>() - 3.9) < 1e-9);
    CHECK(std::abs(lnkd["d"].get<double>() - 0.0581140290126) < 1e-8);
    CHECK(std::abs(lnkd["T"].get<double>() - 0.998674563407) < 1e-9);
    CHECK(lnkd["vol_fall_after"].get<double>() < lnkd["vol_fall_before"].get<double>());

    const auto& hum = rows["hum_like"];
    CHECK(std::abs(hum["d"].get<double>() - 0.0845502536643) < 1e-8);
    CHECK(std::abs(hum["T"].get<double>() - 0.99480347286) < 1e-9);

    CHECK(rows["wide_band"]["regime"] == "trending");
    CHECK(rows["wide_band"]["T"].is_null());
    CHECK(rows["price_trend"]["regime"] == "no_range");
    CHECK(rows["price_trend"]["K"].is_null());
}

TEST_CASE("scan with a volatility override", "[cli][scan]") {
    auto r = invoke({"scan", kFixtures + "/nflx_like.csv", "--sigma", "0.55", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("3.36,0.9217441929,0.9330721602"));
    r = invoke({"scan", kFixtures + "/goog_like.csv", "--sigma", "0.15", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("0.1360679775,0.9499443901"));
}

TEST_CASE("scan errors", "[cli][scan]") {
    TempDir dir("scan_errors");
    CHECK(invoke({"scan", dir.path.string()}).code == 2);

    const auto missing = invoke({"scan", "/nonexistent/none.csv"});
    CHECK(missing.code == 2);
    CHECK(missing.err == "error: /nonexistent/none.csv: cannot open file\n");

    std::ofstream(dir.path / "bad.csv") << "date,open,high,low,close,volume\n2013-01-01,1,2,1,x,0\n";
    const std::string bad = (dir.path / "bad.csv").string();
    const auto r = invoke({"scan", bad, kFixtures + "/lnkd_like.csv"});
    CHECK(r.code == 0);
    CHECK(r.err == "error: " + bad + ": line 2: invalid close 'x'\n");
    CHECK_THAT(r.out, ContainsSubstring("lnkd_like"));

    std::ofstream(dir.path / "short.csv") << "date,open,high,low,close,volume\n2013-01-01,1,2,1,1,0\n";
    const auto s = invoke({"scan", (dir.path / "short.csv").string()});
    CHECK(s.code == 2);
    CHECK_THAT(s.err, ContainsSubstring("short.csv: "));
}

TEST_CASE("config file and environment", "[cli][config]") {
    TempDir dir("config");
    const auto cfg = (dir.path / "cfg.json").string();
    std::ofstream(cfg) << R"({"r": 0.05, "format": "csv"})";
    auto r = invoke({"--config", cfg, "lambda", "--sigma", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out == "r,sigma,lambda\n0.05,0.5,0.1\n");
    // Flags win over the file.
    r = invoke({"--config", cfg, "lambda", "--sigma", "0.5", "--r", "0.02", "--format", "json"});
    CHECK(nlohmann::json::parse(r.out)[0]["r"].get<double>() == 0.02);

    ::setenv("TUNNELGATE_CONFIG", cfg.c_str(), 1);
    r = invoke({"lambda", "--sigma", "0.5"});
    ::unsetenv("TUNNELGATE_CONFIG");
    CHECK(r.out == "r,sigma,lambda\n0.05,0.5,0.1\n");

    std::ofstream(dir.path / "bad.json") << R"({"r": 0.05, "colour": 1})";
    r = invoke({"--config", (dir.path / "bad.json").string(), "lambda", "--sigma", "0.5"});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("unknown key 'colour'"));
    CHECK_THROWS_AS(cli::parse_config("[1]"), InvalidParameter);
    CHECK_THROWS_AS(cli::parse_config(R"({"short_window": 50})"), InvalidParameter);
    CHECK_THROWS_AS(cli::parse_config(R"({"r": "high"})"), InvalidParameter);
    CHECK_THROWS_AS(cli::parse_config("{"), InvalidParameter);
}

TEST_CASE("verify subcommand", "[cli][verify]") {
    auto r = invoke({"verify", "--negative-control", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["quadrature"].size() == 100);
    CHECK(j["checks"].size() == 4);
    for (const auto& c : j["checks"]) CHECK(c["pass"].get<bool>());
    CHECK(j["negative_control"]["convergence_order"].get<double>() < 0.5);

    r = invoke({"verify", "--quad-tol", "1e-15", "--samples", "5"});
    CHECK(r.code == 1);
    CHECK_THAT(r.out, ContainsSubstring("tolerance-not-met"));
}
