#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsmooth/cli/experiment.hpp"

namespace gsmooth::cli {

enum class Figure { Fig1, Fig2, Fig3 };
std::optional<Figure> parse_figure(const std::string& s);
std::string figure_name(Figure f);

struct Preset {
  std::string label;
  RunConfig config;
};

struct PresetSet {
  Figure figure;
  std::vector<Preset> runs;
  std::vector<std::string> notes;
};

// fig1: p in {4, 6, 8}, R = 10 with every gradient method and the two-stage
// procedure. fig2: p in {4, 6, 8}, optimal stepsizes with l1 in
// {1, 2, 4, 8, 16}. fig3: p = 6, R in {5, 100, 500}, optimal stepsizes and
// the two-stage procedure with L = 4 L0. Budget 1e5 gradient calls, d = 2.
// With a non-empty out_dir each run writes out_dir/<label>.csv.
PresetSet preset_figure(Figure figure, const std::string& out_dir = "");

// Runs concurrently on up to `threads` workers; results keep preset order.
std::vector<ExperimentResult> run_presets(const PresetSet& set, unsigned threads);

// JSON document with the figure, notes, and each run's config.
std::string preset_metadata(const PresetSet& set);

}  // namespace gsmooth::cli
