#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tunnelgate/model.hpp"

using namespace tunnelgate;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("separation constant", "[model]") {
    CHECK_THAT(compute_lambda(MarketParams(0.03, 0.47)).value, WithinRel(0.0638297872340426, 1e-14));
    CHECK_THAT(compute_lambda(MarketParams(0.01, 0.53)).value, WithinRel(0.0188679245283019, 1e-14));
}

TEST_CASE("market parameters are validated", "[model]") {
    CHECK_THROWS_AS(MarketParams(0.0, 0.3), InvalidParameter);
    CHECK_THROWS_AS(MarketParams(0.03, 0.0), InvalidParameter);
    CHECK_THROWS_AS(MarketParams(-0.01, 0.3), InvalidParameter);
    CHECK_THROWS_AS(MarketParams(0.03, NAN), InvalidParameter);
    CHECK_THROWS_AS(MarketParams(INFINITY, 0.3), InvalidParameter);
    CHECK_THROWS_AS(Lambda(0.0), InvalidParameter);
    CHECK_THROWS_AS(RangeBound(10.0, 10.0), InvalidParameter);
    CHECK_THROWS_AS(RangeBound(12.0, 10.0), InvalidParameter);
    CHECK_THROWS_AS(RangeBound::from_width(-1.0), InvalidParameter);
}

TEST_CASE("time decay", "[model]") {
    CHECK_THAT(time_decay(MarketParams(0.03, 0.47), 1.0), WithinRel(0.938164673545074, 1e-14));
    CHECK_THAT(time_decay(MarketParams(0.05, 0.53), 2.0), WithinRel(0.828052065708786, 1e-14));
    CHECK(time_decay(MarketParams(0.05, 0.53), 0.0) == 1.0);
    CHECK_THROWS_AS(time_decay(MarketParams(0.05, 0.53), -0.1), InvalidParameter);
}

TEST_CASE("barrier geometry of the worked example", "[model]") {
    const MarketParams p(0.03, 0.47);
    const BarrierGeometry geo = barrier_geometry(p, RangeBound::from_width(2.4));
    CHECK_THAT(geo.v0, WithinRel(1.0 / (2.4 * 2.4), 1e-15));
    CHECK_THAT(geo.s_r, WithinRel(3.95811402901264, 1e-13));
    CHECK_THAT(geo.d, WithinRel(1.55811402901264, 1e-13));
    CHECK(classify_regime(compute_lambda(p), geo) == Regime::RangeBound);
    CHECK(to_string(Regime::RangeBound) == "range_bound");
    CHECK_THROWS_AS(potential(0.0), DomainError);
    CHECK(potential(2.0) == 0.25);
}

TEST_CASE("geometry uses only the band width", "[model]") {
    const MarketParams p(0.03, 0.47);
    const auto a = barrier_geometry(p, RangeBound(123.3, 127.2));
    const auto b = barrier_geometry(p, RangeBound::from_width(127.2 - 123.3));
    CHECK(a.d == b.d);
    CHECK_THAT(a.d, WithinAbs(0.0581140290126, 1e-12));
}

TEST_CASE("strike bound", "[model]") {
    CHECK_THAT(strike_bound(Lambda(0.004)), WithinRel(15.8113883008419, 1e-14));
    CHECK_THAT(strike_bound(Lambda(10.0)), WithinRel(0.316227766016838, 1e-14));
}

TEST_CASE("regime classification", "[model]") {
    const MarketParams p(0.05, 0.5); // lambda = 0.1, critical width sqrt(10)
    const double critical = std::sqrt(10.0);
    const Lambda lambda = compute_lambda(p);
    CHECK(classify_regime(lambda, barrier_geometry(p, RangeBound::from_width(3.0))) == Regime::RangeBound);
    CHECK(classify_regime(lambda, barrier_geometry(p, RangeBound::from_width(critical))) == Regime::Critical);
    CHECK(classify_regime(lambda, barrier_geometry(p, RangeBound::from_width(3.3))) == Regime::Trending);
    CHECK(classify_regime(lambda, barrier_geometry(p, RangeBound::from_width(3.3)), 0.5) == Regime::Critical);
    CHECK_THROWS_AS(classify_regime(lambda, barrier_geometry(p, RangeBound::from_width(3.0)), -1.0),
                    InvalidParameter);
}

TEST_CASE("model properties over random parameters", "[model][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(0.001, 0.2), us(0.05, 2.0), uk(0.1, 20.0), ut(0.0, 5.0);
    for (int i = 0; i < 2000; ++i) {
        const MarketParams p(ur(rng), us(rng));
        const Lambda lambda = compute_lambda(p);
        INFO("r=" << p.r() << " sigma=" << p.sigma());
        CHECK_THAT(lambda.value * p.sigma(), WithinRel(p.r(), 1e-14));

        const double t1 = ut(rng), t2 = ut(rng);
        CHECK_THAT(time_decay(p, t1 + t2), WithinRel(time_decay(p, t1) * time_decay(p, t2), 1e-12));
        CHECK(time_decay(p, t1 + 0.01) < time_decay(p, t1));

        const BarrierGeometry geo = barrier_geometry(p, RangeBound::from_width(uk(rng)));
        CHECK_THAT(lambda.value * geo.s_r * geo.s_r, WithinRel(1.0, 1e-13));
        const Regime regime = classify_regime(lambda, geo);
        if (regime == Regime::RangeBound) CHECK(geo.d > 0.0);
        if (regime == Regime::Trending) CHECK(geo.d < 0.0);
    }
}

TEST_CASE("penetration distance falls with r and grows with sigma", "[model][property]") {
    const auto d = [](double r, double s) { return barrier_geometry(MarketParams(r, s), RangeBound::from_width(2.4)).d; };
    for (double r = 0.01; r < 0.07; r += 0.01) CHECK(d(r + 0.01, 0.53) < d(r, 0.53));
    for (double s = 0.43; s < 0.97; s += 0.1) CHECK(d(0.05, s + 0.04) > d(0.05, s));
}
