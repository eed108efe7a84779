#include "covop/agent.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "covop/errors.hpp"
#include "covop/rng.hpp"

namespace covop {

double QTable::best_value(int s) const {
    const auto& row = q.at(s);
    double best = 0.0;
    for (size_t i = 0; i < row.size(); ++i)
        best = (i == 0) ? row[0] : std::max(best, row[i]);
    return best;
}

int QTable::best_index(int s) const {
    const auto& row = q.at(s);
    int pick = 0;
    for (int i = 1; i < static_cast<int>(row.size()); ++i)
        if (row[i] > row[pick]) pick = i;
    return pick;
}

namespace {

// States where an option may be invoked.
void append_option_entries(QTable& table, const PointOption& opt, int index) {
    if (opt.widened) {
        for (int s = 0; s < static_cast<int>(opt.policy.size()); ++s)
            if (opt.defined_at(s)) {
                table.menu[s].push_back({true, index});
                table.q[s].push_back(0.0);
            }
    } else if (opt.initiation >= 0 &&
               opt.initiation < static_cast<int>(table.menu.size())) {
        table.menu[opt.initiation].push_back({true, index});
        table.q[opt.initiation].push_back(0.0);
    }
}

}  // namespace

QTable make_q_table(const TabularMDP& mdp, const OptionSet& options,
                    double alpha, double gamma) {
    QTable table;
    table.alpha = alpha;
    table.gamma = gamma;
    int n = mdp.state_count();
    table.menu.resize(n);
    table.q.resize(n);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < mdp.action_count(s); ++a)
            table.menu[s].push_back({false, a});
        table.q[s].assign(table.menu[s].size(), 0.0);
    }
    for (size_t j = 0; j < options.options.size(); ++j)
        append_option_entries(table, options.options[j], static_cast<int>(j));
    return table;
}

namespace {

struct TrainLoop {
    const TabularMDP& mdp;
    QTable& table;
    const std::vector<PointOption>& options;  // may grow between choices
    double gamma;
    double exploration;
    int episodes;
    int max_steps;
    Rng rng;
    std::vector<TransitionStep>* replay = nullptr;
    long total_steps = 0;
    // Called before every choice; online discovery hangs off this.
    std::function<void(int)> before_choice;
    // Called once per finished episode (index argument).
    std::function<void(int)> after_episode;

    LearningCurve run() {
        LearningCurve curve;
        const int option_cap = 2 * mdp.state_count();
        for (int ep = 0; ep < episodes; ++ep) {
            int s = mdp.sample_initial(rng);
            double ep_reward = 0.0;
            int steps = 0;
            while (steps < max_steps && !mdp.is_terminal(s)) {
                if (before_choice) before_choice(s);
                const auto& menu = table.menu[s];
                int pick = rng.next_double() < exploration
                               ? static_cast<int>(rng.next_below(
                                     static_cast<std::uint32_t>(menu.size())))
                               : table.best_index(s);
                Choice c = menu[pick];
                if (!c.is_option) {
                    auto [next, r] = mdp.step(s, c.index, rng);
                    if (replay) replay->push_back({s, c.index, r, next});
                    ++total_steps;
                    ++steps;
                    ep_reward += r;
                    double boot = mdp.is_terminal(next) ? 0.0 : table.best_value(next);
                    double& cell = table.q[s][pick];
                    cell = smdp_update(cell, r, gamma, boot, table.alpha);
                    s = next;
                } else {
                    const PointOption& opt = options[c.index];
                    int cur = s;
                    int tau = 0;
                    double bar_r = 0.0;
                    double disc = 1.0;  // gamma^tau as we go
                    for (;;) {
                        if (cur == opt.termination || mdp.is_terminal(cur)) break;
                        if (!opt.defined_at(cur)) {
                            if (opt.terminate_unknown) break;
                            throw OptionStuck(c.index, cur);
                        }
                        if (tau >= option_cap || steps >= max_steps) break;
                        auto [next, r] = mdp.step(cur, opt.policy[cur], rng);
                        if (replay) replay->push_back({cur, opt.policy[cur], r, next});
                        ++total_steps;
                        ++steps;
                        ++tau;
                        bar_r += disc * r;
                        disc *= gamma;
                        ep_reward += r;
                        cur = next;
                    }
                    double boot = mdp.is_terminal(cur) ? 0.0 : table.best_value(cur);
                    double& cell = table.q[s][pick];
                    cell = smdp_update(cell, bar_r, disc, boot, table.alpha);
                    s = cur;
                }
            }
            curve.episode_reward.push_back(ep_reward);
            if (after_episode) after_episode(ep);
        }
        return curve;
    }
};

void check_budgets(int episodes, int max_steps) {
    if (episodes < 0) throw Error("episode count must be non-negative");
    if (max_steps < 1) throw Error("per-episode step budget must be positive");
}

}  // namespace

QLearningResult q_learning(const TabularMDP& mdp, const OptionSet& options,
                           int episodes, int max_steps, double alpha,
                           double gamma, double exploration, std::uint64_t seed) {
    check_budgets(episodes, max_steps);
    for (const auto& o : options.options)
        if (o.initiation < 0 || o.initiation >= mdp.state_count() ||
            o.termination < 0 || o.termination >= mdp.state_count())
            throw Error("option endpoints lie outside the MDP's state space");

    QLearningResult out;
    out.table = make_q_table(mdp, options, alpha, gamma);
    TrainLoop loop{mdp,      out.table, options.options,
                   gamma,    exploration, episodes,
                   max_steps, Rng(derive_seed(seed, stream::learn_run, 0))};
    out.curve = loop.run();
    out.curve.seed = seed;
    return out;
}

IncidenceGraph incidence_from_steps(const std::vector<TransitionStep>& steps,
                                    int state_count) {
    if (steps.empty())
        throw Error("no transitions to build an incidence graph from");
    IncidenceGraph inc;
    inc.from_env.assign(state_count, -1);
    // Dense ids in ascending environment order, so that full coverage makes
    // the incidence graph literally equal to the state graph (labels and
    // all) and discovery tie-breaks agree with the offline-exact run.
    for (const auto& t : steps) {
        inc.from_env.at(t.state) = 0;
        inc.from_env.at(t.next) = 0;
    }
    for (int s = 0; s < state_count; ++s) {
        if (inc.from_env[s] == 0) {
            inc.from_env[s] = static_cast<int>(inc.to_env.size());
            inc.to_env.push_back(s);
        } else {
            inc.from_env[s] = -1;
        }
    }
    Graph g(static_cast<int>(inc.to_env.size()));
    for (const auto& t : steps) {
        int u = inc.from_env[t.state];
        int v = inc.from_env[t.next];
        if (u != v && !g.has_edge(u, v)) g.add_edge(u, v);
    }
    inc.graph = std::move(g);
    return inc;
}

IncidenceGraph build_incidence_graph(const std::vector<Trajectory>& trajectories,
                                     int state_count) {
    if (trajectories.empty())
        throw Error("no trajectories to build an incidence graph from");
    std::vector<TransitionStep> all;
    for (const auto& tr : trajectories)
        all.insert(all.end(), tr.steps.begin(), tr.steps.end());
    return incidence_from_steps(all, state_count);
}

std::vector<Trajectory> sample_random_trajectories(const TabularMDP& mdp,
                                                   int count, int steps,
                                                   std::uint64_t seed) {
    if (count < 1 || steps < 1)
        throw Error("trajectory sampling needs a positive count and length");
    std::vector<Trajectory> out(count);
    for (int t = 0; t < count; ++t) {
        Rng rng(derive_seed(seed, stream::trajectory, t));
        Trajectory& tr = out[t];
        tr.episode = t;
        tr.seed = seed;
        int s = mdp.sample_initial(rng);
        for (int i = 0; i < steps && !mdp.is_terminal(s); ++i) {
            int a = static_cast<int>(
                rng.next_below(static_cast<std::uint32_t>(mdp.action_count(s))));
            auto [next, r] = mdp.step(s, a, rng);
            tr.steps.push_back({s, a, r, next});
            s = next;
        }
    }
    return out;
}

OptionSet offline_sampled_discovery(const TabularMDP& mdp,
                                    const std::string& method, int trajectories,
                                    int steps_per_traj, int k,
                                    std::uint64_t seed) {
    auto trajs = sample_random_trajectories(mdp, trajectories, steps_per_traj, seed);
    IncidenceGraph inc = build_incidence_graph(trajs, mdp.state_count());
    if (!inc.graph.connected()) {
        std::vector<int> comp = inc.graph.component_ids();
        int parts = *std::max_element(comp.begin(), comp.end()) + 1;
        throw Disconnected("incidence graph is fragmented into " +
                           std::to_string(parts) + " components");
    }

    TabularMDP walk = ssp_from_graph(inc.graph, 0);
    OptionSet dense;
    if (method == "covering")
        dense = covering_options(inc.graph, k, walk, Laplacian::combinatorial);
    else if (method == "eigen")
        dense = eigenoptions_point(inc.graph, k, walk, Laplacian::combinatorial);
    else if (method == "betweenness")
        dense = betweenness_options(inc.graph, k, walk);
    else
        throw Error("unknown discovery method: " + method);

    std::vector<char> known(mdp.state_count(), 0);
    for (int s : inc.to_env) known[s] = 1;

    OptionSet out;
    for (const auto& d : dense.options) {
        PointOption o = option_policy(mdp, inc.to_env[d.initiation],
                                      inc.to_env[d.termination], known);
        o.terminate_unknown = true;
        out.options.push_back(std::move(o));
    }
    out.discovery_log = dense.discovery_log;
    for (auto& r : out.discovery_log) {
        if (r.from >= 0) r.from = inc.to_env[r.from];
        if (r.to >= 0) r.to = inc.to_env[r.to];
    }
    Graph aug(mdp.state_count());
    for (const auto& [u, v] : inc.graph.edges())
        aug.add_edge(inc.to_env[u], inc.to_env[v]);
    for (const auto& [u, v] : option_shortcuts(out))
        if (!aug.has_edge(u, v)) aug.add_edge(u, v);
    out.augmented_graph = std::move(aug);
    return out;
}

std::vector<int> replay_option_policy(const TabularMDP& mdp,
                                      const std::vector<TransitionStep>& replay,
                                      int subgoal, int sweeps) {
    int n = mdp.state_count();
    std::vector<std::vector<double>> q(n);
    for (int s = 0; s < n; ++s) q[s].assign(mdp.action_count(s), 0.0);
    const double lr = 0.1;
    const double g = 0.95;
    for (int pass = 0; pass < sweeps; ++pass)
        for (const auto& t : replay) {
            double boot = 0.0;
            if (t.next != subgoal)
                boot = *std::max_element(q[t.next].begin(), q[t.next].end());
            double target = (t.next == subgoal ? 1.0 : 0.0) + g * boot;
            double& cell = q[t.state][t.action];
            cell += lr * (target - cell);
        }
    std::vector<int> policy(n, -1);
    for (int s = 0; s < n; ++s) {
        if (s == subgoal) continue;
        double best = 0.0;
        int pick = -1;
        for (int a = 0; a < static_cast<int>(q[s].size()); ++a)
            if (q[s][a] > best + 1e-12) {
                best = q[s][a];
                pick = a;
            }
        policy[s] = pick;
    }
    return policy;
}

OnlineRunResult online_discovery_run(const TabularMDP& mdp, int batch,
                                     int interval_steps, int max_options,
                                     int episodes, int max_steps,
                                     std::uint64_t seed, double alpha,
                                     double gamma, double exploration) {
    check_budgets(episodes, max_steps);
    if (interval_steps < 1) throw Error("discovery interval must be positive");
    if (batch < 2 || batch % 2 != 0)
        throw Error("discovery batch must be a positive even number");
    if (max_options < 0) throw Error("option cap must be non-negative");

    OnlineRunResult out;
    out.options.augmented_graph = graph_from_mdp(mdp);
    out.table = make_q_table(mdp, out.options, alpha, gamma);
    std::vector<TransitionStep> replay;
    long next_point = interval_steps;

    TrainLoop loop{mdp,       out.table, out.options.options,
                   gamma,     exploration, episodes,
                   max_steps, Rng(derive_seed(seed, stream::learn_run, 0)),
                   &replay};

    auto discover_at = [&](long point, int current) {
        auto skip = [&](const std::string& why) {
            out.interval_log.push_back("step " + std::to_string(point) +
                                       ": skipped (" + why + ")");
        };
        int freeform = max_options - static_cast<int>(out.options.options.size());
        int want = std::min(batch, freeform - freeform % 2);
        if (want < 2) {
            skip("option capacity reached");
            return;
        }
        IncidenceGraph inc = incidence_from_steps(replay, mdp.state_count());
        // Restrict to the component the agent currently occupies so that
        // episodic domains with unconnectable regions (e.g. one component
        // per task instance) still admit discovery.
        std::vector<int> comp = inc.graph.component_ids();
        int target = -1;
        if (current >= 0 && inc.from_env[current] >= 0)
            target = comp[inc.from_env[current]];
        if (target < 0) {
            std::vector<int> size(*std::max_element(comp.begin(), comp.end()) + 1, 0);
            for (int c : comp) ++size[c];
            target = static_cast<int>(
                std::max_element(size.begin(), size.end()) - size.begin());
        }
        std::vector<int> sub_to_env;
        std::vector<int> dense_to_sub(inc.graph.node_count(), -1);
        for (int u = 0; u < inc.graph.node_count(); ++u)
            if (comp[u] == target) {
                dense_to_sub[u] = static_cast<int>(sub_to_env.size());
                sub_to_env.push_back(inc.to_env[u]);
            }
        if (static_cast<int>(sub_to_env.size()) < 3) {
            skip("explored component has fewer than 3 states");
            return;
        }
        Graph sub(static_cast<int>(sub_to_env.size()));
        for (const auto& [u, v] : inc.graph.edges())
            if (comp[u] == target && comp[v] == target)
                sub.add_edge(dense_to_sub[u], dense_to_sub[v]);

        OptionSet found;
        try {
            found = covering_options(sub, want, ssp_from_graph(sub, 0),
                                     Laplacian::combinatorial);
        } catch (const Error& e) {
            skip(e.what());
            return;
        }
        for (const auto& d : found.options) {
            PointOption o;
            o.initiation = sub_to_env[d.initiation];
            o.termination = sub_to_env[d.termination];
            o.length = d.length;
            o.policy = replay_option_policy(mdp, replay, o.termination, 10);
            o.terminate_unknown = true;
            int index = static_cast<int>(out.options.options.size());
            out.options.options.push_back(std::move(o));
            append_option_entries(out.table, out.options.options.back(), index);
            const PointOption& added = out.options.options.back();
            if (!out.options.augmented_graph.has_edge(added.initiation,
                                                      added.termination))
                out.options.augmented_graph.add_edge(added.initiation,
                                                     added.termination);
        }
        for (auto& r : found.discovery_log) {
            if (r.from >= 0) r.from = sub_to_env[r.from];
            if (r.to >= 0) r.to = sub_to_env[r.to];
            out.options.discovery_log.push_back(r);
        }
        out.interval_log.push_back(
            "step " + std::to_string(point) + ": added " +
            std::to_string(found.options.size()) + " options (component of " +
            std::to_string(sub_to_env.size()) + " states)");
    };

    loop.before_choice = [&](int current) {
        while (loop.total_steps >= next_point) {
            long point = next_point;
            next_point += interval_steps;
            discover_at(point, current);
        }
    };
    loop.after_episode = [&](int) {
        out.options_per_episode.push_back(
            static_cast<int>(out.options.options.size()));
    };

    out.curve = loop.run();
    out.curve.seed = seed;
    return out;
}

std::vector<SweepCurve> option_count_sweep(const TabularMDP& mdp,
                                           const OptionSet& pool,
                                           const std::vector<int>& counts,
                                           int runs, int episodes, int max_steps,
                                           double alpha, double gamma,
                                           double exploration,
                                           std::uint64_t seed) {
    if (counts.empty()) throw Error("need at least one option count");
    if (runs < 1) throw Error("need at least one run");
    int prev = -1;
    for (int c : counts) {
        if (c < 0 || c % 2 != 0)
            throw Error("option counts must be even and non-negative");
        if (c <= prev) throw Error("option counts must be strictly ascending");
        if (c > static_cast<int>(pool.options.size()))
            throw Error("option count " + std::to_string(c) +
                        " exceeds the pool of " +
                        std::to_string(pool.options.size()));
        prev = c;
    }
    std::vector<SweepCurve> out;
    for (int c : counts) {
        SweepCurve sc;
        sc.option_count = c;
        OptionSet subset;
        subset.options.assign(pool.options.begin(), pool.options.begin() + c);
        subset.augmented_graph = pool.augmented_graph;
        for (int r = 0; r < runs; ++r) {
            std::uint64_t run_seed = derive_seed(seed, stream::learn_run, r);
            sc.runs.push_back(q_learning(mdp, subset, episodes, max_steps, alpha,
                                         gamma, exploration, run_seed)
                                  .curve);
        }
        out.push_back(std::move(sc));
    }
    return out;
}

}  // namespace covop
