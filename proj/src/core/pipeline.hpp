#ifndef INSURVAL_PIPELINE_HPP
#define INSURVAL_PIPELINE_HPP

#include "config.hpp"

#include <string>

namespace insurval {

// Batch commands behind the CLI subcommands. Each writes its CSV outputs
// plus summary.json under cfg.out_dir and returns a human-readable
// summary. Errors surface as validation_error / nonconvergence_error.

// scenario export: scenarios.csv + scenarios.csv.meta.json
std::string cmd_simulate(const RunConfig& cfg);

// example1 / example2 one-period valuation reports
std::string cmd_value_one_period(const RunConfig& cfg);

// example3 / section5 multi-period valuation reports
std::string cmd_value_dynamic(const RunConfig& cfg);

// formats summary.json of a previous run
std::string cmd_report(const std::string& out_dir);

} // namespace insurval

#endif // INSURVAL_PIPELINE_HPP
