// Breakout probability for a stock trading between support and resistance.
//
//   breakout_probability [support resistance sigma [r]]

#include <cstdio>
#include <cstdlib>

#include "tunnelgate/barrier.hpp"
#include "tunnelgate/model.hpp"

int main(int argc, char** argv) {
    double support = 123.3, resistance = 127.2, sigma = 0.47, r = 0.03;
    if (argc >= 4) {
        support = std::atof(argv[1]);
        resistance = std::atof(argv[2]);
        sigma = std::atof(argv[3]);
    }
    if (argc >= 5) r = std::atof(argv[4]);

    try {
        const tunnelgate::MarketParams params(r, sigma);
        const tunnelgate::RangeBound band(support, resistance);
        const auto lambda = tunnelgate::compute_lambda(params);
        const auto geo = tunnelgate::barrier_geometry(params, band);
        std::printf("band width K      %.6g\n", band.width());
        std::printf("lambda = r/sigma  %.6g\n", lambda.value);
        std::printf("exit price S_r    %.6g\n", geo.s_r);
        std::printf("penetration d     %.6g\n", geo.d);
        std::printf("regime            %s\n",
                    std::string(to_string(tunnelgate::classify_regime(lambda, geo))).c_str());

        const auto t = tunnelgate::transmission_wkb(params, band);
        std::printf("T (WKB)           %.6f\n", t.t_wkb);
        std::printf("T (rectangular)   %.6f\n", t.t_exact);
    } catch (const tunnelgate::AboveBarrier& e) {
        std::printf("no barrier: %s\n", e.what());
    } catch (const tunnelgate::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
