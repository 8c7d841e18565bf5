#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include "gsmooth/cli/presets.hpp"
#include "gsmooth/cli/spec.hpp"
#include "gsmooth/errors.hpp"

namespace {

namespace cli = gsmooth::cli;
using gsmooth::SmoothnessParams;

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gsmooth_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

TEST(ParseProblem, PowerNorm) {
  const gsmooth::Objective f = cli::parse_problem("power_norm:d=2,p=4,l1=1");
  EXPECT_EQ(*f.params(), SmoothnessParams(4.0, 1.0));
  EXPECT_EQ(f.dim(), 2u);
}

TEST(ParseProblem, Logistic) {
  EXPECT_EQ(*cli::parse_problem("logistic:l1=0.5").params(), SmoothnessParams(1.0 / 16.0, 0.5));
}

TEST(ParseProblem, OtherNames) {
  EXPECT_EQ(cli::parse_problem("affine_logistic:a=2;1;-2,b=0.5,l1=1").dim(), 3u);
  EXPECT_EQ(*cli::parse_problem("exp_phi:d=3,l0=2,l1=1").params(), SmoothnessParams(2.0, 1.0));
  EXPECT_EQ(cli::parse_problem("separable_pnorm:d=4,p=6,l1=2").dim(), 4u);
  EXPECT_EQ(cli::parse_problem("quadratic:d=5").dim(), 5u);
  EXPECT_EQ(cli::parse_problem("quadratic").dim(), 2u);
}

TEST(ParseProblem, OutOfRangeValueNamesToken) {
  try {
    cli::parse_problem("power_norm:d=2,p=2,l1=1");
    FAIL();
  } catch (const cli::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("p must exceed 2"), std::string::npos);
    EXPECT_EQ(e.token(), "2");
    EXPECT_EQ(e.position(), 17u);
  }
}

TEST(ParseProblem, UnknownKeyIsAnError) {
  try {
    cli::parse_problem("power_norm:d=2,p=4,l1=1,q=3");
    FAIL();
  } catch (const cli::ParseError& e) {
    EXPECT_EQ(e.token(), "q");
    EXPECT_EQ(e.position(), 24u);
  }
}

TEST(ParseProblem, Errors) {
  EXPECT_THROW(cli::parse_problem("rosenbrock:d=2"), cli::ParseError);
  EXPECT_THROW(cli::parse_problem("power_norm:d=2,l1=1"), cli::ParseError);
  EXPECT_THROW(cli::parse_problem("power_norm:d=2,p=four,l1=1"), cli::ParseError);
  EXPECT_THROW(cli::parse_problem("power_norm:d=0,p=4,l1=1"), cli::ParseError);
  EXPECT_THROW(cli::parse_problem("power_norm:d=2.5,p=4,l1=1"), cli::ParseError);
  EXPECT_THROW(cli::parse_problem("power_norm:p=4,p=5,l1=1"), cli::ParseError);
  EXPECT_THROW(cli::parse_problem("logistic:l1=2"), cli::ParseError);
  EXPECT_THROW(cli::parse_problem(""), cli::ParseError);
  try {
    cli::parse_problem("power_norm:d=2,p");
    FAIL();
  } catch (const cli::ParseError& e) {
    EXPECT_EQ(e.position(), 16u);
  }
}

TEST(Spec, CanonicalSerialization) {
  const cli::Spec s = cli::parse_spec("power_norm:p=4,l1=1,d=2");
  EXPECT_EQ(cli::serialize_spec(s), "power_norm:d=2,l1=1,p=4");
  EXPECT_EQ(cli::parse_spec(cli::serialize_spec(s)), s);
  EXPECT_EQ(cli::serialize_spec(cli::parse_spec("polyak")), "polyak");
}

TEST(ParseMethod, Variants) {
  EXPECT_EQ(cli::parse_method("gd").rule, "optimal");
  EXPECT_EQ(cli::parse_method("gd:rule=clipped").rule, "clipped");
  EXPECT_EQ(cli::parse_method("ngd:r_hat=20,schedule=linear").schedule, gsmooth::NgdSchedule::DecayingLinear);
  EXPECT_EQ(*cli::parse_method("polyak:f_star=-1").f_star, -1.0);
  EXPECT_EQ(*cli::parse_method("agmsdr:L=3").l_const, 3.0);
  EXPECT_EQ(cli::parse_method("two_stage:L_factor=4").l_factor, 4.0);
  EXPECT_THROW(cli::parse_method("gd:rule=fancy"), cli::ParseError);
  EXPECT_THROW(cli::parse_method("two_stage:L=1,L_factor=4"), cli::ParseError);
  EXPECT_THROW(cli::parse_method("gd:r_hat=2"), cli::ParseError);
  EXPECT_THROW(cli::parse_method("newton"), cli::ParseError);
}

TEST(ParseMethod, ParamOverrides) {
  const gsmooth::Objective f = cli::parse_problem("power_norm:d=2,l1=1,p=4");
  EXPECT_EQ(cli::method_params(cli::parse_method("gd"), f), SmoothnessParams(4.0, 1.0));
  EXPECT_EQ(cli::method_params(cli::parse_method("gd:l0=1,l1=2"), f), SmoothnessParams(1.0, 2.0));
}

TEST(RunConfig, JsonRoundTripAndOverrides) {
  cli::RunConfig cfg;
  cfg.problem_spec = "power_norm:d=2,l1=1,p=4";
  cfg.method_spec = "gd:rule=simplified";
  cfg.x0 = gsmooth::Vector{1.0, 2.0};
  cfg.budget = 77;
  cfg.grad_tol = 1e-6;
  cfg.seed = 9;
  cfg.output_path = "trace.csv";
  EXPECT_EQ(cli::run_config_from_json(cli::to_json(cfg)), cfg);

  const cli::RunConfig partial = cli::run_config_from_json(nlohmann::json{{"budget", 5}, {"radius", 3.0}}, cfg);
  EXPECT_EQ(partial.budget, 5);
  EXPECT_EQ(std::get<double>(partial.x0), 3.0);
  EXPECT_EQ(partial.method_spec, cfg.method_spec);

  EXPECT_THROW(cli::run_config_from_json(nlohmann::json{{"budgett", 5}}), std::invalid_argument);
  EXPECT_THROW(cli::run_config_from_json(nlohmann::json{{"budget", "many"}}), std::invalid_argument);
}

TEST(RunConfig, ValidationHappensBeforeWork) {
  cli::RunConfig cfg;
  cfg.problem_spec = "power_norm:d=2,p=4,l1=1";
  cfg.method_spec = "gd:rule=sideways";
  EXPECT_THROW(cli::validate(cfg), cli::ParseError);
  cfg.method_spec = "gd";
  cfg.x0 = gsmooth::Vector{1.0, 2.0, 3.0};
  EXPECT_THROW(cli::validate(cfg), std::invalid_argument);
  cfg.x0 = 4.0;
  EXPECT_EQ(cli::initial_point(cfg, 3), (gsmooth::Vector{4.0, 0.0, 0.0}));
}

TEST(RunExperiment, BudgetZeroGivesOneRow) {
  const auto dir = scratch_dir("budget0");
  cli::RunConfig cfg;
  cfg.problem_spec = "power_norm:d=2,p=4,l1=1";
  cfg.method_spec = "gd";
  cfg.budget = 0;
  cfg.output_path = (dir / "t.csv").string();
  const auto result = cli::run_experiment(cfg);
  EXPECT_EQ(result.report.n_records, 1u);
  const auto rows = read_csv(cfg.output_path);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "f_val", "f_gap", "grad_norm", "step_len", "oracle_calls", "stage"}));
  EXPECT_EQ(rows[1][0], "0");
}

TEST(RunExperiment, RowCountMatchesTraceAndGapIsEmptyWhenUnknown) {
  const auto dir = scratch_dir("rows");
  cli::RunConfig cfg;
  cfg.problem_spec = "logistic:l1=0.5";
  cfg.method_spec = "gd:rule=simplified";
  cfg.budget = 123;
  cfg.output_path = (dir / "t.csv").string();
  const auto result = cli::run_experiment(cfg);
  const auto rows = read_csv(cfg.output_path);
  EXPECT_EQ(rows.size(), result.trace.records.size() + 1);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][2], "");
  EXPECT_FALSE(result.report.best_gap.has_value());
}

TEST(RunExperiment, Incompatibilities) {
  cli::RunConfig cfg;
  cfg.problem_spec = "logistic:l1=0.5";
  cfg.method_spec = "polyak";
  EXPECT_THROW(cli::run_experiment(cfg), gsmooth::Unsupported);
  cfg.method_spec = "ngd";
  EXPECT_THROW(cli::run_experiment(cfg), gsmooth::Unsupported);
  cfg.method_spec = "gd";
  cfg.output_path = "/nonexistent-dir/x/t.csv";
  EXPECT_THROW(cli::run_experiment(cfg), std::runtime_error);
}

TEST(RunExperiment, TwoStageSwitchesStageOnce) {
  cli::RunConfig cfg;
  cfg.problem_spec = "power_norm:d=2,p=6,l1=1";
  cfg.method_spec = "two_stage";
  cfg.x0 = 10.0;
  cfg.budget = 3000;
  const auto result = cli::run_experiment(cfg);
  std::ostringstream os;
  cli::write_csv(result.trace, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  std::string prev;
  int transitions = 0;
  while (std::getline(in, line)) {
    const std::string stage = line.substr(line.rfind(',') + 1);
    if (!prev.empty() && stage != prev) ++transitions;
    prev = stage;
  }
  EXPECT_EQ(transitions, 1);
  EXPECT_EQ(prev, "2");
}

// Grouping and decimal comma in the global locale must not leak into the CSV.
struct CommaNumpunct : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

TEST(RunExperiment, CsvIsLocaleIndependent) {
  cli::RunConfig cfg;
  cfg.problem_spec = "power_norm:d=2,p=4,l1=1";
  cfg.method_spec = "gd";
  cfg.x0 = 10.0;
  cfg.budget = 1500;
  const auto result = cli::run_experiment(cfg);
  std::ostringstream plain;
  cli::write_csv(result.trace, plain);

  const std::locale old = std::locale::global(std::locale(std::locale::classic(), new CommaNumpunct));
  std::ostringstream localized;
  localized.imbue(std::locale());
  cli::write_csv(result.trace, localized);
  std::locale::global(old);
  EXPECT_EQ(plain.str(), localized.str());
  EXPECT_NE(plain.str().find("\n1499,"), std::string::npos);
}

TEST(Presets, FigureOneConstants) {
  const cli::PresetSet set = cli::preset_figure(cli::Figure::Fig1);
  EXPECT_EQ(set.runs.size(), 18u);
  for (const auto& run : set.runs) {
    const gsmooth::Objective f = cli::parse_problem(run.config.problem_spec);
    const cli::MethodSpec m = cli::parse_method(run.config.method_spec);
    EXPECT_EQ(run.config.budget, 100000);
    EXPECT_EQ(std::get<double>(run.config.x0), 10.0);
    if (run.label.rfind("p6_", 0) == 0 && m.kind == cli::MethodKind::Gd) {
      EXPECT_EQ(cli::method_params(m, f), SmoothnessParams(256.0, 1.0));
    }
    if (m.kind == cli::MethodKind::Ngd) {
      EXPECT_EQ(*m.r_hat, 20.0);
      EXPECT_EQ(m.schedule, gsmooth::NgdSchedule::DecayingLinear);
    }
  }
}

TEST(Presets, FigureTwoSharesObjectivePerPanel) {
  const cli::PresetSet set = cli::preset_figure(cli::Figure::Fig2);
  EXPECT_EQ(set.runs.size(), 15u);
  for (std::size_t panel = 0; panel < 3; ++panel) {
    const std::string& problem = set.runs[panel * 5].config.problem_spec;
    const double p = 4.0 + 2.0 * static_cast<double>(panel);
    for (std::size_t j = 0; j < 5; ++j) {
      const auto& run = set.runs[panel * 5 + j];
      EXPECT_EQ(run.config.problem_spec, problem);
      const double l1 = std::pow(2.0, static_cast<double>(j));
      const auto params = cli::method_params(cli::parse_method(run.config.method_spec), cli::parse_problem(problem));
      EXPECT_DOUBLE_EQ(params.l1(), l1);
      EXPECT_DOUBLE_EQ(params.l0(), std::pow((p - 2.0) / l1, p - 2.0));
    }
  }
}

TEST(Presets, FigureThreeStartPoints) {
  const cli::PresetSet set = cli::preset_figure(cli::Figure::Fig3);
  EXPECT_EQ(set.runs.size(), 6u);
  const auto& last = set.runs.back().config;
  EXPECT_EQ(cli::initial_point(last, 2), (gsmooth::Vector{500.0, 0.0}));
  EXPECT_EQ(cli::parse_method(last.method_spec).l_factor, 4.0);
  bool mentions_baselines = false;
  for (const auto& note : set.notes) mentions_baselines |= note.find("STM") != std::string::npos;
  EXPECT_TRUE(mentions_baselines);
}

TEST(Presets, ConfigsRoundTrip) {
  for (cli::Figure fig : {cli::Figure::Fig1, cli::Figure::Fig2, cli::Figure::Fig3}) {
    for (const auto& run : cli::preset_figure(fig, "out").runs) {
      const cli::RunConfig& cfg = run.config;
      EXPECT_EQ(cli::run_config_from_json(nlohmann::json::parse(cli::to_json(cfg).dump())), cfg);
      for (const std::string& s : {cfg.problem_spec, cfg.method_spec}) {
        const cli::Spec once = cli::parse_spec(s);
        EXPECT_EQ(cli::serialize_spec(once), s);
        EXPECT_EQ(cli::parse_spec(cli::serialize_spec(once)), once);
      }
      EXPECT_NO_THROW(cli::validate(cfg));
    }
  }
}

TEST(Presets, FigureOneGradientTracesAreMonotone) {
  const auto dir = scratch_dir("fig1");
  cli::PresetSet set = cli::preset_figure(cli::Figure::Fig1, dir.string());
  std::erase_if(set.runs, [](const cli::Preset& p) { return p.label.find("_gd-") == std::string::npos; });
  ASSERT_EQ(set.runs.size(), 9u);
  for (auto& run : set.runs) run.config.budget = 20000;
  const auto results = cli::run_presets(set, 4);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto rows = read_csv(set.runs[i].config.output_path);
    EXPECT_EQ(rows.size(), results[i].trace.records.size() + 1);
    for (std::size_t r = 2; r < rows.size(); ++r) {
      EXPECT_LE(std::stod(rows[r][2]), std::stod(rows[r - 1][2])) << set.runs[i].label << " row " << r;
    }
  }
}

TEST(Presets, ConcurrentRunsMatchSequential) {
  cli::PresetSet set = cli::preset_figure(cli::Figure::Fig3);
  for (auto& run : set.runs) run.config.budget = 5000;
  const auto parallel = cli::run_presets(set, 6);
  const auto serial = cli::run_presets(set, 1);
  for (std::size_t i = 0; i < set.runs.size(); ++i) {
    std::ostringstream a, b;
    cli::write_csv(parallel[i].trace, a);
    cli::write_csv(serial[i].trace, b);
    EXPECT_EQ(a.str(), b.str()) << set.runs[i].label;
  }
}

TEST(Presets, MetadataRecordsDimension) {
  const std::string meta = cli::preset_metadata(cli::preset_figure(cli::Figure::Fig1));
  const auto doc = nlohmann::json::parse(meta);
  EXPECT_EQ(doc["figure"], "fig1");
  EXPECT_EQ(doc["runs"].size(), 18u);
  EXPECT_NE(meta.find("d = 2"), std::string::npos);
}

}  // namespace
