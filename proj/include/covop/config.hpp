#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace covop {

// ---------------------------------------------------------------------------
// Plain-text experiment configs. One `key = value` assignment per line;
// blank lines and lines starting with '#' are ignored. Keys are lower-case
// dotted paths ([a-z0-9_.]), values are bare tokens, paths, or comma-
// separated lists. Duplicate keys and empty values are rejected with a line
// diagnostic. parse -> serialize -> parse is the identity.
// ---------------------------------------------------------------------------

struct ConfigMap {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    const std::string& get(const std::string& key) const;  // throws ConfigError

    bool operator==(const ConfigMap& other) const = default;
};

ConfigMap parse_config(const std::string& text);   // throws ConfigError
ConfigMap read_config(const std::string& path);    // throws IoError
std::string write_config(const ConfigMap& map);    // sorted key = value lines

enum class Protocol { offline_exact, offline_sampled, online };

// ---------------------------------------------------------------------------
// Schema (all keys optional; defaults in parentheses):
//
//   domain.name      grid | taxi | hanoi | racetrack | maze    (grid)
//   domain.layout    map/track file; empty = the shipped default layout
//   domain.discs     hanoi disc count                          (4)
//   domain.v_max     racetrack top speed per axis              (4)
//
//   discover.method      covering | eigen | betweenness | none,
//                        comma-separated list                  (covering)
//   discover.options     even option count k >= 0              (8)
//   discover.protocol    offline-exact | offline-sampled | online
//                                                              (offline-exact)
//   discover.widened     true | false: options executable from
//                        every state                           (false)
//   discover.trajectories          sampled: trajectory count   (100)
//   discover.steps_per_trajectory  sampled: steps each         (1000)
//   discover.interval_steps   online: steps between batches    (500)
//   discover.batch             online: options per batch, even (4)
//   discover.max_options       online: total cap               (32)
//
//   learn.episodes   (100)        learn.max_steps  (100)
//   learn.alpha      (0.1)        learn.gamma      (0.95)
//   learn.epsilon    (0.1)        learn.runs       (5)
//   learn.counts     comma list of option counts; runs the
//                    shared-seed per-count sweep instead        (unset)
//
//   covertime.trajectories   walks per start                   (10000)
//
//   study.num_graphs (100)        study.graph_size (10)
//   study.density    (0.3)        study.trajectories (10000)
//
//   draw.graph       edge-list file to draw instead of the
//                    domain's state graph                      (unset)
//
//   seed             master seed                               (0)
//   out              output directory                          (results)
//   plot             true | false: emit SVG plots              (false)
//
// Unknown keys are rejected.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::string domain = "grid";
    std::string layout;
    int discs = 4;
    int v_max = 4;

    std::vector<std::string> methods = {"covering"};
    int option_count = 8;
    Protocol protocol = Protocol::offline_exact;
    bool widened = false;
    int trajectories = 100;
    int steps_per_trajectory = 1000;
    int interval_steps = 500;
    int batch = 4;
    int max_options = 32;

    int episodes = 100;
    int max_steps = 100;
    double alpha = 0.1;
    double gamma = 0.95;
    double epsilon = 0.1;
    int runs = 5;
    std::vector<int> counts;  // empty: no sweep

    int covertime_trajectories = 10000;

    int num_graphs = 100;
    int graph_size = 10;
    double density = 0.3;
    int study_trajectories = 10000;

    std::string graph_path;

    std::uint64_t seed = 0;
    std::string out_dir = "results";
    bool plot = false;
};

// Validates against the schema above; unknown keys or out-of-range values
// throw ConfigError.
ExperimentConfig experiment_from_config(const ConfigMap& map);

inline ExperimentConfig experiment_from_text(const std::string& text) {
    return experiment_from_config(parse_config(text));
}

}  // namespace covop
