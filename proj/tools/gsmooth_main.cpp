#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "gsmooth/cli/presets.hpp"
#include "gsmooth/cli/spec.hpp"
#include "gsmooth/errors.hpp"
#include "gsmooth/format.hpp"
#include "gsmooth/problems.hpp"
#include "gsmooth/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

using gsmooth::cli::RunConfig;

struct RunFlags {
  std::string config;
  std::string problem;
  std::string method;
  double radius = 0.0;
  std::vector<double> x0;
  std::int64_t budget = 0;
  double grad_tol = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

RunConfig assemble(const RunFlags& flags, const CLI::App& cmd) {
  RunConfig cfg;
  if (!flags.config.empty()) cfg = gsmooth::cli::load_run_config(flags.config);
  if (cmd.count("--problem")) cfg.problem_spec = flags.problem;
  if (cmd.count("--method")) cfg.method_spec = flags.method;
  if (cmd.count("--radius")) cfg.x0 = flags.radius;
  if (cmd.count("--x0")) cfg.x0 = gsmooth::Vector(flags.x0);
  if (cmd.count("--budget")) cfg.budget = flags.budget;
  if (cmd.count("--grad-tol")) cfg.grad_tol = flags.grad_tol;
  if (cmd.count("--seed")) cfg.seed = flags.seed;
  if (cmd.count("--out")) cfg.output_path = flags.out;
  if (cfg.problem_spec.empty()) throw std::invalid_argument("--problem is required (or give it in --config)");
  if (cfg.method_spec.empty()) throw std::invalid_argument("--method is required (or give it in --config)");
  return cfg;
}

int write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order methods for (L0, L1)-smooth objectives"};
  app.require_subcommand(1);

  RunFlags flags;
  CLI::App* run = app.add_subcommand("run", "Run one method on one problem and write its trace as CSV");
  run->add_option("--config", flags.config, "JSON run config; flags override its fields")->check(CLI::ExistingFile);
  run->add_option("--problem", flags.problem, "Problem spec, e.g. power_norm:d=2,p=4,l1=1");
  run->add_option("--method", flags.method, "Method spec, e.g. gd:rule=optimal");
  auto* radius = run->add_option("--radius", flags.radius, "Start at radius * e_1");
  run->add_option("--x0", flags.x0, "Explicit start point")->delimiter(',')->excludes(radius);
  run->add_option("--budget", flags.budget, "Gradient evaluation budget")->check(CLI::NonNegativeNumber);
  run->add_option("--grad-tol", flags.grad_tol, "Stop when the gradient norm falls to this value");
  run->add_option("--seed", flags.seed, "Seed recorded with the run");
  run->add_option("--out", flags.out, "CSV output path");

  std::string figure;
  std::string out_dir = ".";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* preset = app.add_subcommand("preset", "Run a figure preset (fig1, fig2, fig3)");
  preset->add_option("figure", figure, "fig1, fig2 or fig3")->required()->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  preset->add_option("--out", out_dir, "Directory for CSV traces and metadata.json");
  preset->add_option("--threads", threads, "Concurrent runs")->check(CLI::PositiveNumber);

  std::string scope = "all";
  std::uint64_t verify_seed = 1;
  bool negative_control = false;
  std::string report_path;
  CLI::App* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--scope", scope, "kernels, lemmas, theorems or all")
      ->check(CLI::IsMember({"kernels", "lemmas", "theorems", "all"}));
  verify->add_option("--seed", verify_seed, "Sampling seed");
  verify->add_flag("--negative-control", negative_control, "Count the deliberately broken controls as checks");
  verify->add_option("--report", report_path, "Write the report to this file as well");

  std::string cert_problem;
  double cert_radius = 5.0;
  std::int64_t cert_samples = 10000;
  std::uint64_t cert_seed = 1;
  double cert_tol = 1e-8;
  std::optional<double> cert_l0;
  std::optional<double> cert_l1;
  CLI::App* certify = app.add_subcommand("certify", "Sample the Hessian bound of a problem");
  certify->add_option("--problem", cert_problem, "Problem spec")->required();
  certify->add_option("--radius", cert_radius, "Sampling ball radius")->check(CLI::PositiveNumber);
  certify->add_option("--samples", cert_samples, "Number of sampled points")->check(CLI::PositiveNumber);
  certify->add_option("--seed", cert_seed, "Sampling seed");
  certify->add_option("--tol", cert_tol, "Allowed violation");
  certify->add_option("--l0", cert_l0, "Override L0");
  certify->add_option("--l1", cert_l1, "Override L1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) {
      const RunConfig cfg = assemble(flags, *run);
      const auto result = gsmooth::cli::run_experiment(cfg);
      std::cout << result.report.summary();
      return kOk;
    }
    if (preset->parsed()) {
      const auto fig = *gsmooth::cli::parse_figure(figure);
      std::filesystem::create_directories(out_dir);
      const auto set = gsmooth::cli::preset_figure(fig, out_dir);
      if (int rc = write_text(out_dir + "/metadata.json", gsmooth::cli::preset_metadata(set)); rc != kOk) return rc;
      const auto results = gsmooth::cli::run_presets(set, threads);
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i].report;
        std::cout << set.runs[i].label << '\t' << gsmooth::termination_name(r.termination) << '\t'
                  << (r.best_gap ? gsmooth::format_double(*r.best_gap) : std::string("unknown")) << '\t'
                  << r.oracle_calls << '\n';
      }
      return kOk;
    }
    if (verify->parsed()) {
      gsmooth::verify::SuiteOptions options;
      options.scope = *gsmooth::verify::parse_scope(scope);
      options.seed = verify_seed;
      options.negative_control = negative_control;
      const auto reports = gsmooth::verify::run_suite(options);
      const std::string text = gsmooth::verify::format_reports(reports);
      std::cout << text;
      if (!report_path.empty()) {
        if (int rc = write_text(report_path, text); rc != kOk) return rc;
      }
      return gsmooth::verify::suite_passed(reports) ? kOk : kCheckFailed;
    }
    if (certify->parsed()) {
      const gsmooth::Objective f = gsmooth::cli::parse_problem(cert_problem);
      if (!f.params() && !(cert_l0 && cert_l1)) throw std::invalid_argument("problem has no constants; give --l0 and --l1");
      const gsmooth::SmoothnessParams p(cert_l0 ? *cert_l0 : f.params()->l0(), cert_l1 ? *cert_l1 : f.params()->l1());
      const auto rep = gsmooth::certify_smoothness(f, p, cert_radius, cert_samples, cert_seed);
      std::cout << "problem " << f.name() << '\n'
                << "l0 " << gsmooth::format_double(p.l0()) << '\n'
                << "l1 " << gsmooth::format_double(p.l1()) << '\n'
                << "samples " << rep.n_samples << '\n'
                << "max_violation " << gsmooth::format_double(rep.max_violation) << '\n';
      if (rep.violating_point) std::cout << "violating_point " << gsmooth::verify::format_point(*rep.violating_point) << '\n';
      const bool ok = rep.passes(cert_tol);
      std::cout << (ok ? "certified" : "violated") << '\n';
      return ok ? kOk : kCheckFailed;
    }
  } catch (const gsmooth::cli::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const gsmooth::Unsupported& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
