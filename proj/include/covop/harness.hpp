#pragma once

#include <string>
#include <vector>

#include "covop/config.hpp"
#include "covop/env.hpp"
#include "covop/mdp.hpp"
#include "covop/options.hpp"

namespace covop {

// Environment selected by the config. Grid layouts read domain.layout, or
// the shipped default under data_directory() when the key is unset.
TabularMDP load_domain(const ExperimentConfig& cfg);

// Offline discovery on a state graph. A fragmented graph (Taxi has one
// component per destination) is handled by discovering on the largest
// component and mapping everything back to environment indices; connected
// graphs dispatch directly. k = 0 yields the empty set with a baseline log
// row. method is covering, eigen, or betweenness.
OptionSet discover_offline(const Graph& g, const TabularMDP& mdp,
                           const std::string& method, int k);

// Commands. Each runs one configured experiment, builds every output in
// memory, then writes the files under cfg.out_dir (created if missing) in
// one pass, so re-runs replace outputs atomically and bit-identically.
// The returned list names every file written.
//
//   discover   options.txt (option-set serialization), discovery_log.csv
//   covertime  cover_times.csv: one row per method
//   learn      learning_curves.csv (+ learning_curves.svg with plot=true)
//   study      study.csv, study_summary.txt (+ two scatter SVGs with plot)
//   draw       drawing.csv, drawing_edges.csv, drawing.svg
std::vector<std::string> cmd_discover(const ExperimentConfig& cfg);
std::vector<std::string> cmd_covertime(const ExperimentConfig& cfg);
std::vector<std::string> cmd_learn(const ExperimentConfig& cfg);
std::vector<std::string> cmd_study(const ExperimentConfig& cfg);
std::vector<std::string> cmd_draw(const ExperimentConfig& cfg);

// Dispatches a command by name, reporting written files on stdout and
// failures on stderr. Exit codes: 0 all outputs written, 2 configuration
// errors, 3 file/layout errors, 4 math/domain errors, 1 anything else.
int run_command(const std::string& name, const ExperimentConfig& cfg);

}  // namespace covop
