#include "gsmooth/cli/presets.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "gsmooth/format.hpp"

namespace gsmooth::cli {

namespace {

constexpr std::int64_t kBudget = 100000;

std::string power_spec(int p) { return "power_norm:d=2,l1=1,p=" + std::to_string(p); }

Preset make(const std::string& label, const std::string& problem, const std::string& method, double radius,
            const std::string& out_dir) {
  Preset preset;
  preset.label = label;
  preset.config.problem_spec = problem;
  preset.config.method_spec = method;
  preset.config.x0 = radius;
  preset.config.budget = kBudget;
  if (!out_dir.empty()) preset.config.output_path = out_dir + "/" + label + ".csv";
  return preset;
}

}  // namespace

std::optional<Figure> parse_figure(const std::string& s) {
  if (s == "fig1") return Figure::Fig1;
  if (s == "fig2") return Figure::Fig2;
  if (s == "fig3") return Figure::Fig3;
  return std::nullopt;
}

std::string figure_name(Figure f) {
  switch (f) {
    case Figure::Fig1: return "fig1";
    case Figure::Fig2: return "fig2";
    case Figure::Fig3: return "fig3";
  }
  return "unknown";
}

PresetSet preset_figure(Figure figure, const std::string& out_dir) {
  PresetSet set;
  set.figure = figure;
  set.notes.push_back("dimension d = 2; x0 = R e_1");
  set.notes.push_back("budget counts gradient evaluations");
  switch (figure) {
    case Figure::Fig1:
      for (int p : {4, 6, 8}) {
        const std::string prefix = "p" + std::to_string(p) + "_";
        const std::string problem = power_spec(p);
        set.runs.push_back(make(prefix + "gd-optimal", problem, "gd:rule=optimal", 10.0, out_dir));
        set.runs.push_back(make(prefix + "gd-simplified", problem, "gd:rule=simplified", 10.0, out_dir));
        set.runs.push_back(make(prefix + "gd-clipped", problem, "gd:rule=clipped", 10.0, out_dir));
        set.runs.push_back(make(prefix + "ngd-linear", problem, "ngd:r_hat=20,schedule=linear", 10.0, out_dir));
        set.runs.push_back(make(prefix + "polyak", problem, "polyak", 10.0, out_dir));
        set.runs.push_back(make(prefix + "two-stage", problem, "two_stage:L_factor=3", 10.0, out_dir));
      }
      break;
    case Figure::Fig2:
      for (int p : {4, 6, 8}) {
        for (int l1 : {1, 2, 4, 8, 16}) {
          const double l0 = std::pow(static_cast<double>(p - 2) / l1, p - 2);
          const std::string method = "gd:l0=" + format_double(l0) + ",l1=" + std::to_string(l1) + ",rule=optimal";
          set.runs.push_back(make("p" + std::to_string(p) + "_l1-" + std::to_string(l1), power_spec(p), method, 10.0,
                                  out_dir));
        }
      }
      break;
    case Figure::Fig3:
      for (int r : {5, 100, 500}) {
        const std::string prefix = "R" + std::to_string(r) + "_";
        set.runs.push_back(make(prefix + "gd-optimal", power_spec(6), "gd:rule=optimal", r, out_dir));
        set.runs.push_back(make(prefix + "two-stage", power_spec(6), "two_stage:L_factor=4", r, out_dir));
      }
      set.notes.push_back("similar triangles baselines (STM, STM-max) are not included");
      break;
  }
  return set;
}

std::vector<ExperimentResult> run_presets(const PresetSet& set, unsigned threads) {
  std::vector<ExperimentResult> results(set.runs.size());
  std::vector<std::exception_ptr> errors(set.runs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < set.runs.size(); i = next++) {
      try {
        results[i] = run_experiment(set.runs[i].config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(set.runs.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string preset_metadata(const PresetSet& set) {
  nlohmann::json doc;
  doc["figure"] = figure_name(set.figure);
  doc["notes"] = set.notes;
  doc["runs"] = nlohmann::json::array();
  for (const Preset& p : set.runs) {
    nlohmann::json run = to_json(p.config);
    run["label"] = p.label;
    doc["runs"].push_back(run);
  }
  return doc.dump(2) + "\n";
}

}  // namespace gsmooth::cli
