#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "gsmooth/cli/run_config.hpp"
#include "gsmooth/first_order.hpp"

namespace gsmooth::cli {

struct RunReport {
  RunConfig config;
  std::string problem;
  std::string method;
  Termination termination = Termination::BudgetExhausted;
  std::size_t n_records = 0;
  std::optional<double> best_gap;
  double final_f = 0.0;
  std::int64_t oracle_calls = 0;
  std::int64_t value_calls = 0;
  std::optional<std::size_t> stage2_begin;
  double wall_seconds = 0.0;
  std::string csv_path;

  // One `key value` pair per line.
  std::string summary() const;
};

struct ExperimentResult {
  RunReport report;
  Trace trace;
};

// Header k,f_val,f_gap,grad_norm,step_len,oracle_calls,stage; f_gap is empty
// when f* is unknown. Numbers use the shortest round-trip form.
void write_csv(const Trace& trace, std::ostream& out);

ExperimentResult run_experiment(const RunConfig& cfg);

}  // namespace gsmooth::cli
