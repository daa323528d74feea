#ifndef INSURVAL_CONFIG_HPP
#define INSURVAL_CONFIG_HPP

#include "gaussian_model.hpp"
#include "regressors.hpp"
#include "scenario.hpp"
#include "valuation.hpp"

#include <string>

namespace insurval {

// Parsed run configuration. The file format is line-oriented
// `key = value` under `[section]` headers; full-line comments start
// with '#'. Unknown sections or keys are errors.
struct RunConfig {
    // [scenario]
    std::string example;   // one of example1, example2, example3, section5, or empty
    double guarantee = 1.0; // K for equity-linked liabilities

    // [market] / [mortality] / [grid]
    MarketParams market{0.01, 0.02, 0.1, 1.0, -0.5};
    MortalityParams mortality{0.0087, 0.075, 0.000597, 55, 1000};
    GridSpec grid{10, 12, 200000, 1};

    // [example2]
    double e2_meanlog = 0.1;
    double e2_sdlog = 0.2;
    long e2_npol = 1000;
    double e2_psurvive = 0.9;

    // [example3]
    GaussianModelParams gaussian;

    // [valuation]
    ValuationParams valuation{0.1, 0.99, 0.998, 0.0};
    LossSpec second_loss = LossSpec::koenker_bassett(0.99);

    // [regressor]
    RegressorSpec regressor;

    // [output]
    std::string out_dir = "out";

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);
};

} // namespace insurval

#endif // INSURVAL_CONFIG_HPP
