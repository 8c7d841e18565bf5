#include "gsmooth/cli/experiment.hpp"

#include <chrono>
#include <fstream>
#include <locale>
#include <sstream>
#include <stdexcept>

#include "gsmooth/cli/spec.hpp"
#include "gsmooth/format.hpp"

namespace gsmooth::cli {

void write_csv(const Trace& trace, std::ostream& out) {
  out.imbue(std::locale::classic());
  out << "k,f_val,f_gap,grad_norm,step_len,oracle_calls,stage\n";
  for (const IterRecord& r : trace.records) {
    out << r.k << ',' << format_double(r.f_val) << ',';
    if (r.f_gap) out << format_double(*r.f_gap);
    out << ',' << format_double(r.grad_norm) << ',' << format_double(r.step_len) << ',' << r.oracle_calls << ','
        << r.stage << '\n';
  }
}

std::string RunReport::summary() const {
  std::ostringstream os;
  os << "problem " << problem << '\n';
  os << "method " << method << '\n';
  os << "termination " << termination_name(termination) << '\n';
  os << "records " << n_records << '\n';
  os << "best_gap " << (best_gap ? format_double(*best_gap) : std::string("unknown")) << '\n';
  os << "final_f " << format_double(final_f) << '\n';
  os << "oracle_calls " << oracle_calls << '\n';
  os << "value_calls " << value_calls << '\n';
  if (stage2_begin) os << "stage2_begin " << *stage2_begin << '\n';
  os << "wall_seconds " << format_double(wall_seconds) << '\n';
  if (!csv_path.empty()) os << "csv " << csv_path << '\n';
  return os.str();
}

ExperimentResult run_experiment(const RunConfig& cfg) {
  validate(cfg);
  const Objective f = parse_problem(cfg.problem_spec);
  const MethodSpec m = parse_method(cfg.method_spec);
  const Vector x0 = initial_point(cfg, f.dim());

  std::ofstream out;
  if (!cfg.output_path.empty()) {
    out.open(cfg.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + cfg.output_path + "'");
  }

  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.trace = run_method(m, f, x0, cfg.budget, cfg.grad_tol);
  const auto stop = std::chrono::steady_clock::now();

  const Trace& t = result.trace;
  RunReport& rep = result.report;
  rep.config = cfg;
  rep.problem = f.name();
  rep.method = t.method;
  rep.termination = t.termination;
  rep.n_records = t.records.size();
  rep.final_f = t.records.back().f_val;
  rep.oracle_calls = t.records.back().oracle_calls;
  rep.value_calls = t.records.back().value_calls;
  rep.stage2_begin = t.stage2_begin;
  if (t.records.back().f_gap) rep.best_gap = t.records.back().f_best - (t.records.back().f_val - *t.records.back().f_gap);
  rep.wall_seconds = std::chrono::duration<double>(stop - start).count();

  if (out.is_open()) {
    write_csv(t, out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + cfg.output_path + "'");
    rep.csv_path = cfg.output_path;
  }
  return result;
}

}  // namespace gsmooth::cli
