#include "covop/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "covop/agent.hpp"
#include "covop/cover_time.hpp"
#include "covop/eigen.hpp"
#include "covop/errors.hpp"
#include "covop/rng.hpp"

namespace covop {

namespace {

// ---------------------------------------------------------------------------
// Deterministic text formatting. CSV numbers use 12 significant digits (the
// same double always prints the same way); SVG pixel positions use 2
// decimals.
// ---------------------------------------------------------------------------

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string px(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

using NamedFile = std::pair<std::string, std::string>;  // (name, content)

std::vector<std::string> write_outputs(const std::string& dir,
                                       const std::vector<NamedFile>& files) {
    std::string base = dir.empty() ? std::string(".") : dir;
    std::error_code ec;
    std::filesystem::create_directories(base, ec);
    if (ec)
        throw IoError("cannot create output directory " + base + ": " +
                      ec.message());
    std::vector<std::string> written;
    for (const auto& [name, content] : files) {
        std::string path = base + "/" + name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + path);
        out << content;
        out.flush();
        if (!out) throw IoError("cannot write " + path);
        written.push_back(path);
    }
    return written;
}

// ---------------------------------------------------------------------------
// Self-contained SVG emitters (no plotting dependency; CSV stays primary).
// ---------------------------------------------------------------------------

const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
    bool line = true;  // polyline when true, scatter circles otherwise
};

void expand_range(double& lo, double& hi) {
    if (!(lo <= hi)) {  // no finite data at all
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    } else {
        double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
}

std::string svg_chart(const std::string& title, const std::string& xlab,
                      const std::string& ylab, const std::vector<Series>& series,
                      int w = 760, int h = 460) {
    const double left = 70, right = 20, top = 40, bottom = 50;
    const double pw = w - left - right, ph = h - top - bottom;

    double xlo = 1.0, xhi = -1.0, ylo = 1.0, yhi = -1.0;
    bool any = false;
    for (const auto& s : series)
        for (const auto& [x, y] : s.pts) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!any) {
                xlo = xhi = x;
                ylo = yhi = y;
                any = true;
            } else {
                xlo = std::min(xlo, x);
                xhi = std::max(xhi, x);
                ylo = std::min(ylo, y);
                yhi = std::max(yhi, y);
            }
        }
    expand_range(xlo, xhi);
    expand_range(ylo, yhi);
    auto sx = [&](double x) { return left + (x - xlo) / (xhi - xlo) * pw; };
    auto sy = [&](double y) { return top + ph - (y - ylo) / (yhi - ylo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(w) + "\" height=\"" + std::to_string(h) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + px(left + pw / 2) +
           "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + title +
           "</text>\n";

    // Grid, ticks, tick labels.
    for (int t = 0; t <= 4; ++t) {
        double fx = xlo + (xhi - xlo) * t / 4.0;
        double fy = ylo + (yhi - ylo) * t / 4.0;
        svg += "<line x1=\"" + px(sx(fx)) + "\" y1=\"" + px(top) + "\" x2=\"" +
               px(sx(fx)) + "\" y2=\"" + px(top + ph) +
               "\" stroke=\"#eeeeee\"/>\n";
        svg += "<line x1=\"" + px(left) + "\" y1=\"" + px(sy(fy)) + "\" x2=\"" +
               px(left + pw) + "\" y2=\"" + px(sy(fy)) +
               "\" stroke=\"#eeeeee\"/>\n";
        svg += "<text x=\"" + px(sx(fx)) + "\" y=\"" + px(top + ph + 16) +
               "\" text-anchor=\"middle\">" + tick_label(fx) + "</text>\n";
        svg += "<text x=\"" + px(left - 6) + "\" y=\"" + px(sy(fy) + 4) +
               "\" text-anchor=\"end\">" + tick_label(fy) + "</text>\n";
    }
    svg += "<rect x=\"" + px(left) + "\" y=\"" + px(top) + "\" width=\"" +
           px(pw) + "\" height=\"" + px(ph) +
           "\" fill=\"none\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + px(left + pw / 2) + "\" y=\"" + px(h - 12) +
           "\" text-anchor=\"middle\">" + xlab + "</text>\n";
    svg += "<text x=\"16\" y=\"" + px(top + ph / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           px(top + ph / 2) + ")\">" + ylab + "</text>\n";

    for (size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % 8];
        const Series& s = series[i];
        if (s.line) {
            std::string points;
            for (const auto& [x, y] : s.pts) {
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                points += px(sx(x)) + "," + px(sy(y)) + " ";
            }
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        } else {
            for (const auto& [x, y] : s.pts) {
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                svg += "<circle cx=\"" + px(sx(x)) + "\" cy=\"" + px(sy(y)) +
                       "\" r=\"3\" fill=\"" + std::string(color) +
                       "\" fill-opacity=\"0.7\"/>\n";
            }
        }
        if (!s.name.empty()) {
            double lx = left + 12, ly = top + 16 + 16.0 * static_cast<double>(i);
            svg += "<rect x=\"" + px(lx) + "\" y=\"" + px(ly - 9) +
                   "\" width=\"10\" height=\"10\" fill=\"" + std::string(color) +
                   "\"/>\n";
            svg += "<text x=\"" + px(lx + 16) + "\" y=\"" + px(ly) + "\">" +
                   s.name + "</text>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string svg_graph(const std::vector<std::pair<double, double>>& coords,
                      const std::vector<std::pair<int, int>>& edges,
                      const std::vector<std::pair<int, int>>& shortcuts,
                      int size = 640) {
    const double margin = 30.0;
    double xlo = 1.0, xhi = -1.0, ylo = 1.0, yhi = -1.0;
    bool any = false;
    for (const auto& [x, y] : coords) {
        if (!any) {
            xlo = xhi = x;
            ylo = yhi = y;
            any = true;
        } else {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    expand_range(xlo, xhi);
    expand_range(ylo, yhi);
    const double span = size - 2 * margin;
    auto sx = [&](double x) { return margin + (x - xlo) / (xhi - xlo) * span; };
    auto sy = [&](double y) {
        return margin + span - (y - ylo) / (yhi - ylo) * span;  // y up
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(size) + "\" height=\"" + std::to_string(size) +
           "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& [u, v] : edges)
        svg += "<line x1=\"" + px(sx(coords[u].first)) + "\" y1=\"" +
               px(sy(coords[u].second)) + "\" x2=\"" + px(sx(coords[v].first)) +
               "\" y2=\"" + px(sy(coords[v].second)) +
               "\" stroke=\"#9aa0a6\" stroke-width=\"1\"/>\n";
    for (const auto& [u, v] : shortcuts)
        svg += "<line x1=\"" + px(sx(coords[u].first)) + "\" y1=\"" +
               px(sy(coords[u].second)) + "\" x2=\"" + px(sx(coords[v].first)) +
               "\" y2=\"" + px(sy(coords[v].second)) +
               "\" stroke=\"#d62728\" stroke-width=\"2\" "
               "stroke-dasharray=\"6 4\"/>\n";
    for (const auto& [x, y] : coords)
        svg += "<circle cx=\"" + px(sx(x)) + "\" cy=\"" + px(sy(y)) +
               "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    svg += "</svg>\n";
    return svg;
}

// ---------------------------------------------------------------------------
// Shared experiment plumbing.
// ---------------------------------------------------------------------------

OptionSet dispatch_discovery(const Graph& g, int k, const TabularMDP& policy_mdp,
                             const std::string& method) {
    if (k == 0) return covering_options(g, 0, policy_mdp);  // baseline log row
    if (method == "covering") return covering_options(g, k, policy_mdp);
    if (method == "eigen") return eigenoptions_point(g, k, policy_mdp);
    if (method == "betweenness") return betweenness_options(g, k, policy_mdp);
    throw ConfigError("unknown discovery method '" + method + "'");
}

std::string discovery_log_csv(const OptionSet& set) {
    std::string csv =
        "iteration,from,to,lambda2_before,lambda3_before,lambda2_after,gain,"
        "degenerate\n";
    for (const auto& r : set.discovery_log) {
        csv += std::to_string(r.iteration) + "," + std::to_string(r.from) + "," +
               std::to_string(r.to) + "," + fmt(r.lambda2_before) + "," +
               fmt(r.lambda3_before) + "," + fmt(r.lambda2_after) + "," +
               fmt(r.gain) + "," + (r.degenerate ? "1" : "0") + "\n";
    }
    return csv;
}

const std::string& single_method(const ExperimentConfig& cfg) {
    if (cfg.methods.size() != 1)
        throw ConfigError("this command needs exactly one discover.method");
    if (cfg.methods[0] == "none")
        throw ConfigError("nothing to discover for method 'none'");
    return cfg.methods[0];
}

// One learning run flattened into CSV rows later.
struct RunRecord {
    std::string method;
    int count_label = -1;          // option-count sweep column, -1 otherwise
    int run = 0;                   // 1-based
    int fixed_options = 0;         // constant option count for this run
    std::vector<int> per_episode;  // online option growth; empty otherwise
    LearningCurve curve;
};

}  // namespace

TabularMDP load_domain(const ExperimentConfig& cfg) {
    if (cfg.domain == "grid") {
        std::string path = cfg.layout.empty()
                               ? data_directory() + "/ninebynine.map"
                               : cfg.layout;
        return load_grid(path);
    }
    if (cfg.domain == "taxi") return taxi();
    if (cfg.domain == "hanoi") return hanoi(cfg.discs);
    if (cfg.domain == "racetrack") return race_track(cfg.layout, cfg.v_max);
    if (cfg.domain == "maze") return parr_maze(cfg.layout);
    throw ConfigError("unknown domain '" + cfg.domain + "'");
}

OptionSet discover_offline(const Graph& g, const TabularMDP& mdp,
                           const std::string& method, int k) {
    if (g.connected()) return dispatch_discovery(g, k, mdp, method);

    // Largest component (ties: lowest id), densely re-indexed in ascending
    // state order so tie-breaking matches the same graph seen standalone.
    std::vector<int> comp = g.component_ids();
    int parts = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<int> sizes(parts, 0);
    for (int c : comp) ++sizes[c];
    int keep = static_cast<int>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    std::vector<int> to_env;
    std::vector<int> from_env(g.node_count(), -1);
    for (int s = 0; s < g.node_count(); ++s)
        if (comp[s] == keep) {
            from_env[s] = static_cast<int>(to_env.size());
            to_env.push_back(s);
        }
    Graph sub(static_cast<int>(to_env.size()));
    for (const auto& [u, v] : g.edges())
        if (comp[u] == keep && comp[v] == keep)
            sub.add_edge(from_env[u], from_env[v]);

    TabularMDP walk = ssp_from_graph(sub, 0);
    OptionSet dense = dispatch_discovery(sub, k, walk, method);

    std::vector<char> allowed(g.node_count(), 0);
    for (int s : to_env) allowed[s] = 1;
    OptionSet out;
    for (const auto& d : dense.options)
        out.options.push_back(option_policy(mdp, to_env[d.initiation],
                                            to_env[d.termination], allowed));
    out.discovery_log = dense.discovery_log;
    for (auto& r : out.discovery_log) {
        if (r.from >= 0) r.from = to_env[r.from];
        if (r.to >= 0) r.to = to_env[r.to];
    }
    Graph aug = g;
    for (const auto& [u, v] : option_shortcuts(out))
        if (!aug.has_edge(u, v)) aug.add_edge(u, v);
    out.augmented_graph = std::move(aug);
    return out;
}

std::vector<std::string> cmd_discover(const ExperimentConfig& cfg) {
    const std::string& method = single_method(cfg);
    if (cfg.protocol == Protocol::online)
        throw ConfigError(
            "the online protocol discovers options during learning; use the "
            "learn command");
    if (cfg.widened && cfg.protocol != Protocol::offline_exact)
        throw ConfigError("discover.widened requires the offline-exact protocol");

    TabularMDP mdp = load_domain(cfg);
    OptionSet set;
    if (cfg.protocol == Protocol::offline_exact) {
        set = discover_offline(graph_from_mdp(mdp), mdp, method,
                               cfg.option_count);
    } else {
        set = offline_sampled_discovery(mdp, method, cfg.trajectories,
                                        cfg.steps_per_trajectory,
                                        cfg.option_count, cfg.seed);
    }
    if (cfg.widened) set = widen_initiation(set, mdp);

    std::ostringstream options_text;
    write_option_set(set, options_text);
    return write_outputs(cfg.out_dir,
                         {{"options.txt", options_text.str()},
                          {"discovery_log.csv", discovery_log_csv(set)}});
}

std::vector<std::string> cmd_covertime(const ExperimentConfig& cfg) {
    TabularMDP mdp = load_domain(cfg);
    Graph g = graph_from_mdp(mdp);
    if (!g.connected())
        throw Disconnected(
            "cover-time experiments need a connected state graph");

    std::string csv =
        "method,num_options,lambda2,cover_time,cover_avg,stderr,trajectories,"
        "seed\n";
    for (const std::string& method : cfg.methods) {
        OptionSet set;
        if (method != "none")
            set = discover_offline(g, mdp, method, cfg.option_count);
        const Graph& shape = method == "none" ? g : set.augmented_graph;
        double lambda2 =
            smallest_eigenpairs(shape, 3, Laplacian::combinatorial).lambda2();

        auto shortcuts = option_shortcuts(set);
        VisitTimeEstimate est = estimate_visit_times(
            mdp, shortcuts, cfg.covertime_trajectories, cfg.seed);
        size_t argmax = 0;
        for (size_t i = 1; i < est.per_start_mean.size(); ++i)
            if (est.per_start_mean[i] > est.per_start_mean[argmax]) argmax = i;

        csv += method + "," + std::to_string(set.options.size()) + "," +
               fmt(lambda2) + "," + fmt(est.max_over_starts) + "," +
               fmt(est.avg_over_starts) + "," +
               fmt(est.per_start_stderr[argmax]) + "," +
               std::to_string(cfg.covertime_trajectories) + "," +
               std::to_string(cfg.seed) + "\n";
    }
    return write_outputs(cfg.out_dir, {{"cover_times.csv", csv}});
}

std::vector<std::string> cmd_learn(const ExperimentConfig& cfg) {
    if (!cfg.counts.empty()) {
        if (cfg.protocol != Protocol::offline_exact)
            throw ConfigError("learn.counts requires the offline-exact protocol");
        for (const std::string& m : cfg.methods)
            if (m == "none")
                throw ConfigError(
                    "learn.counts already sweeps a zero-option baseline; drop "
                    "method 'none'");
    }
    if (cfg.widened && cfg.protocol != Protocol::offline_exact)
        throw ConfigError("discover.widened requires the offline-exact protocol");
    if (cfg.protocol == Protocol::online)
        for (const std::string& m : cfg.methods)
            if (m != "covering" && m != "none")
                throw ConfigError(
                    "the online protocol grows covering options; methods must "
                    "be covering or none");

    TabularMDP mdp = load_domain(cfg);
    Graph g = graph_from_mdp(mdp);
    std::vector<RunRecord> records;

    for (const std::string& method : cfg.methods) {
        if (!cfg.counts.empty()) {
            OptionSet pool = discover_offline(g, mdp, method, cfg.counts.back());
            if (cfg.widened) pool = widen_initiation(pool, mdp);
            auto sweeps = option_count_sweep(
                mdp, pool, cfg.counts, cfg.runs, cfg.episodes, cfg.max_steps,
                cfg.alpha, cfg.gamma, cfg.epsilon, cfg.seed);
            for (const auto& sweep : sweeps)
                for (int r = 0; r < static_cast<int>(sweep.runs.size()); ++r)
                    records.push_back({method, sweep.option_count, r + 1,
                                       sweep.option_count,
                                       {},
                                       sweep.runs[r]});
            continue;
        }

        OptionSet options;
        if (method != "none" && cfg.protocol == Protocol::offline_exact) {
            options = discover_offline(g, mdp, method, cfg.option_count);
            if (cfg.widened) options = widen_initiation(options, mdp);
        } else if (method != "none" &&
                   cfg.protocol == Protocol::offline_sampled) {
            options = offline_sampled_discovery(mdp, method, cfg.trajectories,
                                                cfg.steps_per_trajectory,
                                                cfg.option_count, cfg.seed);
        }

        for (int r = 0; r < cfg.runs; ++r) {
            std::uint64_t run_seed = derive_seed(cfg.seed, stream::learn_run, r);
            RunRecord rec;
            rec.method = method;
            rec.run = r + 1;
            if (cfg.protocol == Protocol::online && method != "none") {
                OnlineRunResult res = online_discovery_run(
                    mdp, cfg.batch, cfg.interval_steps, cfg.max_options,
                    cfg.episodes, cfg.max_steps, run_seed, cfg.alpha, cfg.gamma,
                    cfg.epsilon);
                rec.per_episode = std::move(res.options_per_episode);
                rec.curve = std::move(res.curve);
                rec.fixed_options = static_cast<int>(res.options.options.size());
            } else {
                QLearningResult res =
                    q_learning(mdp, options, cfg.episodes, cfg.max_steps,
                               cfg.alpha, cfg.gamma, cfg.epsilon, run_seed);
                rec.curve = std::move(res.curve);
                rec.fixed_options = static_cast<int>(options.options.size());
            }
            records.push_back(std::move(rec));
        }
    }

    std::string csv =
        "episode,run,reward,cumulative_reward,method,num_options,seed\n";
    for (const auto& rec : records) {
        double cumulative = 0.0;
        for (size_t e = 0; e < rec.curve.episode_reward.size(); ++e) {
            cumulative += rec.curve.episode_reward[e];
            int options_now = rec.per_episode.empty()
                                  ? rec.fixed_options
                                  : rec.per_episode[e];
            csv += std::to_string(e + 1) + "," + std::to_string(rec.run) + "," +
                   fmt(rec.curve.episode_reward[e]) + "," + fmt(cumulative) +
                   "," + rec.method + "," + std::to_string(options_now) + "," +
                   std::to_string(rec.curve.seed) + "\n";
        }
    }

    std::vector<NamedFile> files{{"learning_curves.csv", csv}};
    if (cfg.plot) {
        // Mean cumulative reward per episode, one series per method (and per
        // count in sweep mode), averaged over runs.
        std::vector<Series> series;
        for (const auto& rec : records) {
            std::string name =
                rec.count_label < 0
                    ? rec.method
                    : rec.method + " (k=" + std::to_string(rec.count_label) + ")";
            auto it = std::find_if(series.begin(), series.end(),
                                   [&](const Series& s) { return s.name == name; });
            if (it == series.end()) {
                series.push_back({name, {}, true});
                it = series.end() - 1;
                it->pts.resize(rec.curve.episode_reward.size(), {0.0, 0.0});
                for (size_t e = 0; e < it->pts.size(); ++e)
                    it->pts[e].first = static_cast<double>(e + 1);
            }
            double cumulative = 0.0;
            for (size_t e = 0; e < rec.curve.episode_reward.size(); ++e) {
                cumulative += rec.curve.episode_reward[e];
                it->pts[e].second += cumulative / cfg.runs;
            }
        }
        files.push_back({"learning_curves.svg",
                         svg_chart("mean cumulative reward over " +
                                       std::to_string(cfg.runs) + " runs",
                                   "episode", "cumulative reward", series)});
    }
    return write_outputs(cfg.out_dir, files);
}

std::vector<std::string> cmd_study(const ExperimentConfig& cfg) {
    std::vector<StudyRow> rows =
        correlation_study(cfg.num_graphs, cfg.graph_size, cfg.density,
                          cfg.study_trajectories, cfg.seed);

    std::string csv =
        "graph,n,m,start,goal,lambda2,cover_time,cover_avg,cover_stderr,"
        "policy_cost\n";
    std::vector<double> l2, cmax, cavg, cost;
    for (const auto& r : rows) {
        csv += std::to_string(r.graph_index) + "," + std::to_string(r.n) + "," +
               std::to_string(r.m) + "," + std::to_string(r.start) + "," +
               std::to_string(r.goal) + "," + fmt(r.lambda2) + "," +
               fmt(r.cover_max) + "," + fmt(r.cover_avg) + "," +
               fmt(r.cover_stderr) + "," + fmt(r.policy_cost) + "\n";
        l2.push_back(r.lambda2);
        cmax.push_back(r.cover_max);
        cavg.push_back(r.cover_avg);
        cost.push_back(r.policy_cost);
    }

    std::string summary = "graphs = " + std::to_string(rows.size()) + "\n";
    summary += std::string("low_power = ") +
               (rows.size() < 10 ? "true" : "false") + "\n";
    if (rows.size() >= 2) {
        summary +=
            "spearman_lambda2_cover_avg = " + fmt(spearman(l2, cavg)) + "\n";
        summary +=
            "spearman_lambda2_cover_max = " + fmt(spearman(l2, cmax)) + "\n";
        summary += "spearman_cover_avg_policy_cost = " +
                   fmt(spearman(cavg, cost)) + "\n";
        summary += "spearman_cover_max_policy_cost = " +
                   fmt(spearman(cmax, cost)) + "\n";
    } else {
        summary += "spearman_lambda2_cover_avg = n/a\n";
        summary += "spearman_lambda2_cover_max = n/a\n";
        summary += "spearman_cover_avg_policy_cost = n/a\n";
        summary += "spearman_cover_max_policy_cost = n/a\n";
    }

    std::vector<NamedFile> files{{"study.csv", csv},
                                 {"study_summary.txt", summary}};
    if (cfg.plot) {
        Series a{"", {}, false}, b{"", {}, false};
        for (size_t i = 0; i < rows.size(); ++i) {
            a.pts.push_back({l2[i], cavg[i]});
            b.pts.push_back({cavg[i], cost[i]});
        }
        files.push_back(
            {"study_connectivity.svg",
             svg_chart("algebraic connectivity vs cover time",
                       "algebraic connectivity", "average cover time", {a})});
        files.push_back(
            {"study_cost.svg",
             svg_chart("cover time vs random-policy cost", "average cover time",
                       "steps to goal under the random policy", {b})});
    }
    return write_outputs(cfg.out_dir, files);
}

std::vector<std::string> cmd_draw(const ExperimentConfig& cfg) {
    TabularMDP mdp(1, 1.0);
    Graph g(1);
    bool have_mdp = false;
    if (!cfg.graph_path.empty()) {
        g = load_edge_list(cfg.graph_path);
    } else {
        mdp = load_domain(cfg);
        g = graph_from_mdp(mdp);
        have_mdp = true;
    }

    auto coords = spectral_drawing(g);  // throws Disconnected

    std::vector<std::pair<int, int>> shortcuts;
    if (cfg.option_count > 0) {
        const std::string& method = single_method(cfg);
        OptionSet set;
        if (have_mdp) {
            set = discover_offline(g, mdp, method, cfg.option_count);
        } else {
            TabularMDP walk = ssp_from_graph(g, 0);
            set = discover_offline(g, walk, method, cfg.option_count);
        }
        shortcuts = option_shortcuts(set);
    }

    std::string csv = "node,x,y\n";
    for (size_t u = 0; u < coords.size(); ++u)
        csv += std::to_string(u) + "," + fmt(coords[u].first) + "," +
               fmt(coords[u].second) + "\n";

    std::string edges_csv = "u,v,kind\n";
    for (const auto& [u, v] : g.edges())
        edges_csv +=
            std::to_string(u) + "," + std::to_string(v) + ",graph\n";
    for (const auto& [u, v] : shortcuts)
        edges_csv +=
            std::to_string(u) + "," + std::to_string(v) + ",option\n";

    return write_outputs(
        cfg.out_dir,
        {{"drawing.csv", csv},
         {"drawing_edges.csv", edges_csv},
         {"drawing.svg", svg_graph(coords, g.edges(), shortcuts)}});
}

int run_command(const std::string& name, const ExperimentConfig& cfg) {
    try {
        std::vector<std::string> written;
        if (name == "discover")
            written = cmd_discover(cfg);
        else if (name == "covertime")
            written = cmd_covertime(cfg);
        else if (name == "learn")
            written = cmd_learn(cfg);
        else if (name == "study")
            written = cmd_study(cfg);
        else if (name == "draw")
            written = cmd_draw(cfg);
        else
            throw ConfigError("unknown command '" + name + "'");
        for (const std::string& path : written)
            std::cout << "wrote " << path << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const MalformedMap& e) {
        std::cerr << "layout error: " << e.what() << "\n";
        return 3;
    } catch (const MalformedTrack& e) {
        std::cerr << "layout error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "file error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace covop
