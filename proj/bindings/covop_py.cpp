// Python bindings for the main library operations: environments, option
// discovery, cover-time estimation, learning runs, and the experiment
// commands. Library errors surface as ValueError (configs), OSError
// (files), or RuntimeError (math/domain failures).

#include <optional>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "covop/agent.hpp"
#include "covop/config.hpp"
#include "covop/cover_time.hpp"
#include "covop/eigen.hpp"
#include "covop/env.hpp"
#include "covop/errors.hpp"
#include "covop/harness.hpp"
#include "covop/rng.hpp"

namespace py = pybind11;
using namespace covop;

namespace {

std::vector<std::string> run_experiment(const std::string& command,
                                        const std::string& config_text,
                                        std::optional<std::string> out,
                                        std::optional<std::uint64_t> seed,
                                        std::optional<bool> plot) {
    ExperimentConfig cfg = experiment_from_text(config_text);
    if (out) cfg.out_dir = *out;
    if (seed) cfg.seed = *seed;
    if (plot) cfg.plot = *plot;
    if (command == "discover") return cmd_discover(cfg);
    if (command == "covertime") return cmd_covertime(cfg);
    if (command == "learn") return cmd_learn(cfg);
    if (command == "study") return cmd_study(cfg);
    if (command == "draw") return cmd_draw(cfg);
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Covering-option discovery: algebraic-connectivity maximization over "
        "MDP state graphs, cover-time estimation, and SMDP Q-learning.";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const IoError& e) {
            PyErr_SetString(PyExc_OSError, e.what());
        } catch (const Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    // ---- graphs and spectra ------------------------------------------------
    py::class_<Graph>(m, "Graph")
        .def(py::init<int>(), py::arg("node_count"))
        .def(py::init<int, const std::vector<std::pair<int, int>>&>(),
             py::arg("node_count"), py::arg("edges"))
        .def("node_count", &Graph::node_count)
        .def("edge_count", &Graph::edge_count)
        .def("edges", &Graph::edges)
        .def("neighbors", &Graph::neighbors, py::arg("u"))
        .def("degree", &Graph::degree, py::arg("u"))
        .def("has_edge", &Graph::has_edge, py::arg("u"), py::arg("v"))
        .def("add_edge", &Graph::add_edge, py::arg("u"), py::arg("v"))
        .def("connected", &Graph::connected)
        .def("component_ids", &Graph::component_ids)
        .def("bfs_distances", &Graph::bfs_distances, py::arg("source"))
        .def("__repr__", [](const Graph& g) {
            return "Graph(nodes=" + std::to_string(g.node_count()) +
                   ", edges=" + std::to_string(g.edge_count()) + ")";
        });
    m.def("load_edge_list", &load_edge_list, py::arg("path"));
    m.def("save_edge_list", &save_edge_list, py::arg("graph"), py::arg("path"));

    py::enum_<Laplacian>(m, "Laplacian")
        .value("combinatorial", Laplacian::combinatorial)
        .value("normalized", Laplacian::normalized);

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("eigenvalues", &Spectrum::eigenvalues)
        .def_readonly("eigenvectors", &Spectrum::eigenvectors)
        .def_readonly("tolerance", &Spectrum::tolerance)
        .def_readonly("iterations", &Spectrum::iterations)
        .def("lambda2", &Spectrum::lambda2)
        .def("lambda3", &Spectrum::lambda3)
        .def("fiedler", &Spectrum::fiedler);
    m.def(
        "smallest_eigenpairs",
        [](const Graph& g, int k, Laplacian kind, double tol) {
            return smallest_eigenpairs(g, k, kind, tol);
        },
        py::arg("graph"), py::arg("k"),
        py::arg("kind") = Laplacian::normalized, py::arg("tol") = 1e-8);
    m.def("spectral_drawing", &spectral_drawing, py::arg("graph"),
          py::arg("tol") = 1e-8);
    m.def("betweenness_centrality", &betweenness_centrality, py::arg("graph"));

    // ---- MDPs and environments ---------------------------------------------
    py::class_<TabularMDP>(m, "TabularMDP")
        .def("state_count", &TabularMDP::state_count)
        .def("action_count", &TabularMDP::action_count, py::arg("state"))
        .def("is_terminal", &TabularMDP::is_terminal, py::arg("state"))
        .def("initial_states", &TabularMDP::initial_states)
        .def("discount", &TabularMDP::discount)
        .def("deterministic", &TabularMDP::deterministic)
        .def(
            "outcomes",
            [](const TabularMDP& mdp, int s, int a) {
                std::vector<std::tuple<int, double, double>> out;
                for (const Outcome& o : mdp.outcomes(s, a))
                    out.emplace_back(o.next, o.prob, o.reward);
                return out;
            },
            py::arg("state"), py::arg("action"),
            "List of (next_state, probability, reward) triples.")
        .def("__repr__", [](const TabularMDP& mdp) {
            return "TabularMDP(states=" + std::to_string(mdp.state_count()) +
                   ")";
        });
    m.def("graph_from_mdp", &graph_from_mdp, py::arg("mdp"));
    m.def("ssp_from_graph", &ssp_from_graph, py::arg("graph"), py::arg("goal"),
          py::arg("step_reward") = -1.0);

    m.def(
        "grid_from_text",
        [](const std::string& text) { return grid_mdp(parse_grid(text)); },
        py::arg("text"),
        "Gridworld from an ASCII map ('#' wall, '.' floor, 'S' start, 'G' "
        "goal).");
    m.def("load_grid", &load_grid, py::arg("path"));
    m.def("data_directory", &data_directory);
    m.def("taxi", &taxi);
    m.def("taxi_state", &taxi_state, py::arg("row"), py::arg("col"),
          py::arg("passenger"), py::arg("destination"));
    m.def("hanoi", &hanoi, py::arg("discs") = 4);
    m.def("race_track", &race_track, py::arg("path") = std::string(),
          py::arg("v_max") = 4);
    m.def("parr_maze", &parr_maze, py::arg("path") = std::string());
    m.def("random_ssp", &random_ssp, py::arg("n"), py::arg("density"),
          py::arg("seed"));

    // ---- option discovery --------------------------------------------------
    py::class_<PointOption>(m, "PointOption")
        .def_readonly("initiation", &PointOption::initiation)
        .def_readonly("termination", &PointOption::termination)
        .def_readonly("policy", &PointOption::policy)
        .def_readonly("path", &PointOption::path)
        .def_readonly("length", &PointOption::length)
        .def_readonly("widened", &PointOption::widened)
        .def_readonly("terminate_unknown", &PointOption::terminate_unknown)
        .def("defined_at", &PointOption::defined_at, py::arg("state"))
        .def("__repr__", [](const PointOption& o) {
            return "PointOption(" + std::to_string(o.initiation) + " -> " +
                   std::to_string(o.termination) + ")";
        });

    py::class_<DiscoveryRecord>(m, "DiscoveryRecord")
        .def_readonly("iteration", &DiscoveryRecord::iteration)
        .def_readonly("lambda2_before", &DiscoveryRecord::lambda2_before)
        .def_readonly("lambda3_before", &DiscoveryRecord::lambda3_before)
        .def_readonly("lambda2_after", &DiscoveryRecord::lambda2_after)
        .def_readonly("gain", &DiscoveryRecord::gain)
        .def_readonly("degenerate", &DiscoveryRecord::degenerate)
        .def_readonly("from_state", &DiscoveryRecord::from)
        .def_readonly("to_state", &DiscoveryRecord::to);

    py::class_<OptionSet>(m, "OptionSet")
        .def_readonly("options", &OptionSet::options)
        .def_readonly("augmented_graph", &OptionSet::augmented_graph)
        .def_readonly("discovery_log", &OptionSet::discovery_log)
        .def("__len__",
             [](const OptionSet& s) { return s.options.size(); });

    m.def("connectivity_gain", &connectivity_gain, py::arg("lambda2"),
          py::arg("lambda3"), py::arg("vi"), py::arg("vj"));
    m.def("covering_options", &covering_options, py::arg("graph"), py::arg("k"),
          py::arg("mdp"), py::arg("kind") = Laplacian::combinatorial,
          py::arg("tol") = 1e-8);
    m.def("eigenoptions_point", &eigenoptions_point, py::arg("graph"),
          py::arg("k"), py::arg("mdp"),
          py::arg("kind") = Laplacian::combinatorial, py::arg("tol") = 1e-8);
    m.def("betweenness_options", &betweenness_options, py::arg("graph"),
          py::arg("k"), py::arg("mdp"));
    m.def(
        "option_policy",
        [](const TabularMDP& mdp, int from, int to,
           const std::optional<std::vector<char>>& allowed) {
            return allowed ? option_policy(mdp, from, to, *allowed)
                           : option_policy(mdp, from, to);
        },
        py::arg("mdp"), py::arg("from_state"), py::arg("to_state"),
        py::arg("allowed") = std::nullopt);
    m.def("widen_initiation", &widen_initiation, py::arg("options"),
          py::arg("mdp"));
    m.def("option_shortcuts", &option_shortcuts, py::arg("options"));
    m.def("save_option_set", &save_option_set, py::arg("options"),
          py::arg("path"));
    m.def(
        "load_option_set",
        [](const std::string& path, const std::optional<Graph>& base) {
            return load_option_set(path, base ? &*base : nullptr);
        },
        py::arg("path"), py::arg("base") = std::nullopt);

    // ---- cover times -------------------------------------------------------
    py::class_<CoverTimeEstimate>(m, "CoverTimeEstimate")
        .def_readonly("per_start_mean", &CoverTimeEstimate::per_start_mean)
        .def_readonly("per_start_stderr", &CoverTimeEstimate::per_start_stderr)
        .def_readonly("max_over_starts", &CoverTimeEstimate::max_over_starts)
        .def_readonly("avg_over_starts", &CoverTimeEstimate::avg_over_starts)
        .def_readonly("trajectories_per_start",
                      &CoverTimeEstimate::trajectories_per_start)
        .def_readonly("seed", &CoverTimeEstimate::seed);
    m.def("estimate_cover_time", &estimate_cover_time, py::arg("graph"),
          py::arg("trajectories_per_start"), py::arg("seed"));
    m.def("cover_time_upper_bound", &cover_time_upper_bound,
          py::arg("lambda2"), py::arg("n"));
    m.def("exact_cover_times", &exact_cover_times, py::arg("graph"));

    py::class_<VisitTimeEstimate>(m, "VisitTimeEstimate")
        .def_readonly("starts", &VisitTimeEstimate::starts)
        .def_readonly("per_start_mean", &VisitTimeEstimate::per_start_mean)
        .def_readonly("per_start_stderr", &VisitTimeEstimate::per_start_stderr)
        .def_readonly("per_start_worst", &VisitTimeEstimate::per_start_worst)
        .def_readonly("max_over_starts", &VisitTimeEstimate::max_over_starts)
        .def_readonly("avg_over_starts", &VisitTimeEstimate::avg_over_starts)
        .def_readonly("trajectories_per_start",
                      &VisitTimeEstimate::trajectories_per_start)
        .def_readonly("seed", &VisitTimeEstimate::seed);
    m.def("estimate_visit_times", &estimate_visit_times, py::arg("mdp"),
          py::arg("shortcuts"), py::arg("trajectories_per_start"),
          py::arg("seed"), py::arg("starts") = std::vector<int>{});
    m.def("exact_visit_times", &exact_visit_times, py::arg("mdp"),
          py::arg("shortcuts"));

    m.def(
        "random_connected_graph",
        [](int n, double density, std::uint64_t seed) {
            Rng rng(seed);
            return random_connected_graph(n, density, rng);
        },
        py::arg("n"), py::arg("density"), py::arg("seed"));
    m.def("random_policy_cost", &random_policy_cost, py::arg("mdp"),
          py::arg("start"), py::arg("goal"), py::arg("trajectories"),
          py::arg("seed"));

    py::class_<StudyRow>(m, "StudyRow")
        .def_readonly("graph_index", &StudyRow::graph_index)
        .def_readonly("n", &StudyRow::n)
        .def_readonly("m", &StudyRow::m)
        .def_readonly("start", &StudyRow::start)
        .def_readonly("goal", &StudyRow::goal)
        .def_readonly("lambda2", &StudyRow::lambda2)
        .def_readonly("cover_max", &StudyRow::cover_max)
        .def_readonly("cover_avg", &StudyRow::cover_avg)
        .def_readonly("cover_stderr", &StudyRow::cover_stderr)
        .def_readonly("policy_cost", &StudyRow::policy_cost);
    m.def("correlation_study", &correlation_study, py::arg("num_graphs"),
          py::arg("n"), py::arg("density"), py::arg("trajectories"),
          py::arg("seed"));
    m.def("spearman", &spearman, py::arg("a"), py::arg("b"));

    // ---- learning ----------------------------------------------------------
    py::class_<LearningCurve>(m, "LearningCurve")
        .def_readonly("episode_reward", &LearningCurve::episode_reward)
        .def_readonly("seed", &LearningCurve::seed);

    py::class_<QTable>(m, "QTable")
        .def("best_value", &QTable::best_value, py::arg("state"))
        .def("best_index", &QTable::best_index, py::arg("state"));

    py::class_<QLearningResult>(m, "QLearningResult")
        .def_readonly("table", &QLearningResult::table)
        .def_readonly("curve", &QLearningResult::curve);
    m.def("q_learning", &q_learning, py::arg("mdp"), py::arg("options"),
          py::arg("episodes"), py::arg("max_steps"), py::arg("alpha") = 0.1,
          py::arg("gamma") = 0.95, py::arg("exploration") = 0.1,
          py::arg("seed") = 0);

    m.def("offline_sampled_discovery", &offline_sampled_discovery,
          py::arg("mdp"), py::arg("method"), py::arg("trajectories"),
          py::arg("steps_per_trajectory"), py::arg("k"), py::arg("seed"));

    py::class_<OnlineRunResult>(m, "OnlineRunResult")
        .def_readonly("table", &OnlineRunResult::table)
        .def_readonly("curve", &OnlineRunResult::curve)
        .def_readonly("options", &OnlineRunResult::options)
        .def_readonly("interval_log", &OnlineRunResult::interval_log)
        .def_readonly("options_per_episode",
                      &OnlineRunResult::options_per_episode);
    m.def("online_discovery_run", &online_discovery_run, py::arg("mdp"),
          py::arg("batch"), py::arg("interval_steps"), py::arg("max_options"),
          py::arg("episodes"), py::arg("max_steps"), py::arg("seed"),
          py::arg("alpha") = 0.1, py::arg("gamma") = 0.95,
          py::arg("exploration") = 0.1);

    py::class_<SweepCurve>(m, "SweepCurve")
        .def_readonly("option_count", &SweepCurve::option_count)
        .def_readonly("runs", &SweepCurve::runs);
    m.def("option_count_sweep", &option_count_sweep, py::arg("mdp"),
          py::arg("pool"), py::arg("counts"), py::arg("runs"),
          py::arg("episodes"), py::arg("max_steps"), py::arg("alpha"),
          py::arg("gamma"), py::arg("exploration"), py::arg("seed"));

    // ---- experiment commands ------------------------------------------------
    m.def("run_experiment", &run_experiment, py::arg("command"),
          py::arg("config"), py::arg("out") = std::nullopt,
          py::arg("seed") = std::nullopt, py::arg("plot") = std::nullopt,
          "Run one experiment command ('discover', 'covertime', 'learn', "
          "'study', 'draw') from config text; returns the written file "
          "paths.");
    m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("a"),
          py::arg("b") = 0, py::arg("c") = 0);
}
