#include "covop/options.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "covop/errors.hpp"

namespace covop {

double connectivity_gain(double lambda2, double lambda3, double vi, double vj) {
    if (lambda3 - lambda2 < 1e-9) throw MultiplicityAboveOne();
    double d = vi - vj;
    return d * d / (6.0 / (lambda3 - lambda2) + 1.5);
}

namespace {

// Extreme-entry selection with the lowest index winning ties. Eigenvector
// entries tied by graph symmetry come back from the solver perturbed at
// roundoff scale, so "tied" means within a small window of the extreme
// relative to the entry spread.
std::pair<int, int> extreme_entries(const std::vector<double>& v) {
    double vmax = v[0], vmin = v[0];
    for (double x : v) {
        vmax = std::max(vmax, x);
        vmin = std::min(vmin, x);
    }
    double window = 1e-6 * (vmax - vmin);
    int imax = -1, imin = -1;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
        if (imax < 0 && v[i] >= vmax - window) imax = i;
        if (imin < 0 && v[i] <= vmin + window) imin = i;
    }
    return {imax, imin};
}

int argmax_entry(const std::vector<double>& v) { return extreme_entries(v).first; }

// In a repeated-eigenvalue 2-plane spanned by (v2, v3), rotate to the unit
// vector whose entry spread is largest. The maximizing node pair and the
// resulting direction are properties of the plane, not of the basis the
// solver happened to return, so this pins down one deterministic
// representative. Ties fall to the first pair in scan order.
std::pair<std::vector<double>, std::vector<double>> spread_canonical(
    const std::vector<double>& v2, const std::vector<double>& v3) {
    int n = static_cast<int>(v2.size());
    auto r2_of = [&](int u, int w) {
        double d2 = v2[u] - v2[w];
        double d3 = v3[u] - v3[w];
        return d2 * d2 + d3 * d3;
    };
    // Two passes: the best spread, then the lexicographically first pair
    // within a noise window of it (exact ties occur on symmetric graphs).
    double best = 0.0;
    for (int u = 0; u < n; ++u)
        for (int w = 0; w < n; ++w) best = std::max(best, r2_of(u, w));
    double cutoff = best * (1.0 - 1e-6);
    int bu = 0, bw = 0;
    bool found = false;
    for (int u = 0; u < n && !found; ++u)
        for (int w = 0; w < n && !found; ++w)
            if (r2_of(u, w) >= cutoff) {
                bu = u;
                bw = w;
                found = true;
            }
    double r = std::sqrt(r2_of(bu, bw));
    double a = (v2[bu] - v2[bw]) / r;
    double b = (v3[bu] - v3[bw]) / r;
    std::vector<double> main(n), perp(n);
    for (int i = 0; i < n; ++i) {
        main[i] = a * v2[i] + b * v3[i];
        perp[i] = -b * v2[i] + a * v3[i];
    }
    fix_sign(main);
    fix_sign(perp);
    return {std::move(main), std::move(perp)};
}

// Fallback when the argmax/argmin pair is already connected: widest
// entry-gap over absent edges, lowest pair winning within a noise window.
std::pair<int, int> widest_absent_pair(const Graph& g, const std::vector<double>& v) {
    int n = g.node_count();
    double best = -1.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!g.has_edge(a, b)) best = std::max(best, std::fabs(v[a] - v[b]));
    if (best < 0.0) throw CompleteGraph();
    double cutoff = best - 1e-6 * best;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (g.has_edge(a, b) || std::fabs(v[a] - v[b]) < cutoff) continue;
            // orient the pair like argmax/argmin would
            return v[a] >= v[b] ? std::pair<int, int>{a, b}
                                : std::pair<int, int>{b, a};
        }
    throw CompleteGraph();  // unreachable
}

// All-state shortest-path policy toward `goal` plus hop distances. For
// deterministic MDPs this is the breadth-first tree (lowest action index on
// ties); stochastic MDPs get a value-iteration policy (reward 1 on entering
// the goal, discount 0.95). An empty mask allows every state.
struct PolicyField {
    std::vector<int> policy;
    std::vector<int> dist;
};

PolicyField policy_toward(const TabularMDP& mdp, int goal,
                          const std::vector<char>& allowed) {
    int n = mdp.state_count();
    auto ok = [&](int s) { return allowed.empty() || allowed[s]; };
    if (!ok(goal)) throw Error("goal state is outside the allowed set");

    PolicyField field;
    field.policy.assign(n, -1);
    field.dist.assign(n, -1);
    field.dist[goal] = 0;

    if (mdp.deterministic()) {
        // reverse breadth-first search over the one-step structure
        std::vector<std::vector<std::pair<int, int>>> rev(n);  // next -> (s, a)
        for (int s = 0; s < n; ++s) {
            if (!ok(s)) continue;
            for (int a = 0; a < mdp.action_count(s); ++a) {
                int next = mdp.outcomes(s, a).front().next;
                if (next != s && ok(next)) rev[next].push_back({s, a});
            }
        }
        std::deque<int> queue{goal};
        while (!queue.empty()) {
            int t = queue.front();
            queue.pop_front();
            for (const auto& [s, a] : rev[t]) {
                if (field.dist[s] != -1) continue;
                field.dist[s] = field.dist[t] + 1;
                queue.push_back(s);
            }
        }
        // lowest action that steps one hop closer
        for (int s = 0; s < n; ++s) {
            if (s == goal || field.dist[s] < 0 || !ok(s)) continue;
            for (int a = 0; a < mdp.action_count(s); ++a) {
                int next = mdp.outcomes(s, a).front().next;
                if (ok(next) && field.dist[next] == field.dist[s] - 1) {
                    field.policy[s] = a;
                    break;
                }
            }
        }
        return field;
    }

    // value iteration with an intrinsic reward of 1 for reaching the goal
    const double gamma = 0.95;
    std::vector<double> value(n, 0.0);
    for (int sweep = 0; sweep < 100000; ++sweep) {
        double delta = 0.0;
        for (int s = 0; s < n; ++s) {
            if (s == goal || !ok(s)) continue;
            double best = -1.0;
            for (int a = 0; a < mdp.action_count(s); ++a) {
                double q = 0.0;
                for (const auto& o : mdp.outcomes(s, a)) {
                    if (!ok(o.next)) continue;
                    q += o.prob * ((o.next == goal ? 1.0 : 0.0) + gamma * value[o.next]);
                }
                if (q > best) best = q;
            }
            best = std::max(best, 0.0);
            delta = std::max(delta, std::fabs(best - value[s]));
            value[s] = best;
        }
        if (delta < 1e-13) break;
    }
    for (int s = 0; s < n; ++s) {
        if (s == goal || !ok(s) || value[s] <= 0.0) continue;
        double best = -1.0;
        int pick = -1;
        for (int a = 0; a < mdp.action_count(s); ++a) {
            double q = 0.0;
            for (const auto& o : mdp.outcomes(s, a)) {
                if (!ok(o.next)) continue;
                q += o.prob * ((o.next == goal ? 1.0 : 0.0) + gamma * value[o.next]);
            }
            if (q > best + 1e-15) {
                best = q;
                pick = a;
            }
        }
        field.policy[s] = pick;
    }
    // hop distances for reporting come from the state graph
    field.dist = graph_from_mdp(mdp).bfs_distances(goal);
    return field;
}

PointOption make_point_option(const TabularMDP& mdp, int from, int to,
                              const std::vector<char>& allowed) {
    if (from == to) throw Error("option endpoints must differ");
    PolicyField field = policy_toward(mdp, to, allowed);
    if (from < 0 || from >= mdp.state_count() || field.dist[from] < 0 ||
        (!allowed.empty() && !allowed[from]))
        throw Unreachable(from, to);

    PointOption opt;
    opt.initiation = from;
    opt.termination = to;
    opt.length = field.dist[from];

    if (mdp.deterministic()) {
        // keep only the states along the path from -> to
        opt.policy.assign(mdp.state_count(), -1);
        int s = from;
        opt.path.push_back(s);
        while (s != to) {
            int a = field.policy[s];
            if (a < 0) throw Unreachable(from, to);
            opt.policy[s] = a;
            s = mdp.outcomes(s, a).front().next;
            opt.path.push_back(s);
        }
    } else {
        opt.policy = field.policy;  // defined wherever the goal is attainable
    }
    return opt;
}

}  // namespace

PointOption option_policy(const TabularMDP& mdp, int from, int to) {
    return make_point_option(mdp, from, to, {});
}

PointOption option_policy(const TabularMDP& mdp, int from, int to,
                          const std::vector<char>& allowed) {
    return make_point_option(mdp, from, to, allowed);
}

OptionSet covering_options(const Graph& g, int k, const TabularMDP& mdp,
                           Laplacian kind, double tol) {
    if (k < 0 || k % 2 != 0) throw Error("option count must be even and >= 0");
    if (!g.connected()) throw Disconnected();

    OptionSet set;
    Graph work = g;

    if (k == 0) {
        Spectrum s = smallest_eigenpairs(g, std::min(3, g.node_count()), kind, tol);
        DiscoveryRecord rec;
        rec.iteration = 0;
        rec.lambda2_before = rec.lambda2_after = s.lambda2();
        rec.lambda3_before = s.eigenvalues.size() > 2 ? s.lambda3() : 0.0;
        rec.degenerate =
            s.eigenvalues.size() > 2 && multiplicity_above_one(s, 1e-9);
        set.discovery_log.push_back(rec);
        set.augmented_graph = work;
        return set;
    }

    int pairs = k / 2;
    for (int it = 0; it < pairs; ++it) {
        if (work.is_complete()) throw CompleteGraph();
        Spectrum s = smallest_eigenpairs(work, std::min(3, work.node_count()),
                                         kind, tol);
        bool degen = s.eigenvalues.size() > 2 && multiplicity_above_one(s, 1e-9);
        std::vector<double> v = s.fiedler();
        if (degen) v = spread_canonical(s.eigenvectors[1], s.eigenvectors[2]).first;

        auto [i, j] = extreme_entries(v);
        if (i == j || work.has_edge(i, j)) std::tie(i, j) = widest_absent_pair(work, v);

        DiscoveryRecord rec;
        rec.iteration = it;
        rec.lambda2_before = s.lambda2();
        rec.lambda3_before = s.eigenvalues.size() > 2 ? s.lambda3() : 0.0;
        rec.degenerate = degen;
        rec.from = i;
        rec.to = j;
        rec.gain = degen ? 0.0
                         : connectivity_gain(s.lambda2(), s.lambda3(), v[i], v[j]);

        set.options.push_back(option_policy(mdp, i, j));
        set.options.push_back(option_policy(mdp, j, i));
        work.add_edge(i, j);
        set.discovery_log.push_back(rec);
    }

    Spectrum final_spec =
        smallest_eigenpairs(work, 2, kind, tol);
    for (int it = 0; it + 1 < pairs; ++it)
        set.discovery_log[it].lambda2_after = set.discovery_log[it + 1].lambda2_before;
    set.discovery_log.back().lambda2_after = final_spec.lambda2();
    set.augmented_graph = work;
    return set;
}

OptionSet eigenoptions_point(const Graph& g, int k, const TabularMDP& mdp,
                             Laplacian kind, double tol) {
    if (k < 0 || k % 2 != 0) throw Error("option count must be even and >= 0");
    if (!g.connected()) throw Disconnected();

    OptionSet set;
    Graph work = g;
    if (k == 0) {
        Spectrum s = smallest_eigenpairs(g, std::min(3, g.node_count()), kind, tol);
        DiscoveryRecord rec;
        rec.iteration = 0;
        rec.lambda2_before = rec.lambda2_after = s.lambda2();
        rec.lambda3_before = s.eigenvalues.size() > 2 ? s.lambda3() : 0.0;
        rec.degenerate =
            s.eigenvalues.size() > 2 && multiplicity_above_one(s, 1e-9);
        set.discovery_log.push_back(rec);
        set.augmented_graph = work;
        return set;
    }

    int pairs = k / 2;
    int n = g.node_count();
    int want = std::min(n, pairs + 2);  // one spare to detect repeated values
    Spectrum s = smallest_eigenpairs(g, want, kind, tol);

    // Collect one representative per consulted eigenvector; repeated
    // eigenvalue planes contribute their two canonical directions.
    std::vector<std::vector<double>> consulted;
    int e = 1;
    while (static_cast<int>(consulted.size()) < pairs && e < want) {
        if (e + 1 < want && s.eigenvalues[e + 1] - s.eigenvalues[e] < 1e-9) {
            auto [main, perp] = spread_canonical(s.eigenvectors[e],
                                                 s.eigenvectors[e + 1]);
            consulted.push_back(std::move(main));
            if (static_cast<int>(consulted.size()) < pairs)
                consulted.push_back(std::move(perp));
            e += 2;
        } else {
            consulted.push_back(s.eigenvectors[e]);  // already sign-fixed
            e += 1;
        }
    }
    if (static_cast<int>(consulted.size()) < pairs)
        throw Error("graph too small for the requested eigenvector count");

    for (int it = 0; it < pairs; ++it) {
        const std::vector<double>& v = consulted[it];
        auto [i, j] = extreme_entries(v);

        DiscoveryRecord rec;
        rec.iteration = it;
        rec.lambda2_before = s.lambda2();
        rec.lambda3_before = s.eigenvalues.size() > 2 ? s.lambda3() : 0.0;
        rec.degenerate = false;
        rec.from = i;
        rec.to = j;
        rec.gain = 0.0;  // no insertion feedback, no predicted increment

        set.options.push_back(option_policy(mdp, i, j));
        set.options.push_back(option_policy(mdp, j, i));
        if (i != j && !work.has_edge(i, j)) work.add_edge(i, j);

        Spectrum after = smallest_eigenpairs(work, 2, kind, tol);
        rec.lambda2_after = after.lambda2();
        set.discovery_log.push_back(rec);
    }
    set.augmented_graph = work;
    return set;
}

std::vector<double> betweenness_centrality(const Graph& g) {
    int n = g.node_count();
    std::vector<double> bc(n, 0.0);
    std::vector<int> order;
    std::vector<std::vector<int>> preds(n);
    std::vector<long> sigma(n);
    std::vector<int> dist(n);
    std::vector<double> delta(n);

    for (int s = 0; s < n; ++s) {
        order.clear();
        for (int i = 0; i < n; ++i) {
            preds[i].clear();
            sigma[i] = 0;
            dist[i] = -1;
            delta[i] = 0.0;
        }
        sigma[s] = 1;
        dist[s] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (int w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int w = *it;
            for (int v : preds[w])
                delta[v] += static_cast<double>(sigma[v]) / sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    for (double& b : bc) b /= 2.0;  // each undirected pair counted twice
    return bc;
}

OptionSet betweenness_options(const Graph& g, int k, const TabularMDP& mdp) {
    if (k < 0) throw Error("option count must be >= 0");
    if (!g.connected()) throw Disconnected();

    std::vector<double> bc = betweenness_centrality(g);
    std::vector<int> local_maxima;
    for (int i = 0; i < g.node_count(); ++i) {
        bool is_max = true;
        for (int j : g.neighbors(i))
            if (bc[i] < bc[j]) {
                is_max = false;
                break;
            }
        if (is_max) local_maxima.push_back(i);
    }
    std::stable_sort(local_maxima.begin(), local_maxima.end(),
                     [&](int a, int b) { return bc[a] > bc[b]; });
    if (static_cast<int>(local_maxima.size()) > k) local_maxima.resize(k);

    OptionSet set;
    Graph work = g;
    for (int subgoal : local_maxima) {
        auto dist = g.bfs_distances(subgoal);
        int far = argmax_entry(std::vector<double>(dist.begin(), dist.end()));
        set.options.push_back(option_policy(mdp, far, subgoal));
        if (!work.has_edge(far, subgoal)) work.add_edge(far, subgoal);

        DiscoveryRecord rec;
        rec.iteration = static_cast<int>(set.discovery_log.size());
        rec.from = far;
        rec.to = subgoal;
        rec.gain = bc[subgoal];  // ranking score for this subgoal
        set.discovery_log.push_back(rec);
    }
    set.augmented_graph = work;
    return set;
}

OptionSet widen_initiation(const OptionSet& opts, const TabularMDP& mdp) {
    OptionSet out = opts;
    for (PointOption& opt : out.options) {
        PolicyField field = policy_toward(mdp, opt.termination, {});
        opt.policy = field.policy;
        opt.widened = true;
    }
    return out;
}

std::vector<std::pair<int, int>> option_shortcuts(const OptionSet& opts) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& opt : opts.options) {
        auto e = std::minmax(opt.initiation, opt.termination);
        std::pair<int, int> p{e.first, e.second};
        if (std::find(pairs.begin(), pairs.end(), p) == pairs.end())
            pairs.push_back(p);
    }
    return pairs;
}

void write_option_set(const OptionSet& opts, std::ostream& out) {
    out << std::setprecision(17);
    int states = opts.augmented_graph.node_count();
    for (const auto& o : opts.options)
        states = std::max(states, static_cast<int>(o.policy.size()));
    out << "optionset 1\n";
    out << "states " << states << "\n";
    out << "options " << opts.options.size() << "\n";
    out << "log " << opts.discovery_log.size() << "\n";
    for (const auto& o : opts.options) {
        out << "option " << o.initiation << ' ' << o.termination << ' '
            << o.length << ' ' << (o.widened ? 1 : 0) << ' '
            << (o.terminate_unknown ? 1 : 0) << "\n";
        out << "path";
        for (int s : o.path) out << ' ' << s;
        out << "\n";
        out << "policy";
        for (int s = 0; s < static_cast<int>(o.policy.size()); ++s)
            if (o.policy[s] >= 0) out << ' ' << s << ':' << o.policy[s];
        out << "\n";
    }
    for (const auto& r : opts.discovery_log)
        out << "logrow " << r.iteration << ' ' << r.lambda2_before << ' '
            << r.lambda3_before << ' ' << r.lambda2_after << ' ' << r.gain << ' '
            << (r.degenerate ? 1 : 0) << ' ' << r.from << ' ' << r.to << "\n";
}

OptionSet read_option_set(std::istream& in, const Graph* base) {
    auto fail = [](const std::string& what) -> void {
        throw Error("option set file: " + what);
    };
    std::string word;
    int version = 0;
    if (!(in >> word >> version) || word != "optionset" || version != 1)
        fail("bad header");
    int states = 0, count = 0, log_rows = 0;
    if (!(in >> word >> states) || word != "states") fail("missing states");
    if (!(in >> word >> count) || word != "options") fail("missing options");
    if (!(in >> word >> log_rows) || word != "log") fail("missing log count");

    OptionSet opts;
    for (int i = 0; i < count; ++i) {
        PointOption o;
        int widened = 0;
        int unknown_ends = 0;
        if (!(in >> word >> o.initiation >> o.termination >> o.length >> widened >>
              unknown_ends) ||
            word != "option")
            fail("bad option record");
        o.widened = widened != 0;
        o.terminate_unknown = unknown_ends != 0;
        if (!(in >> word) || word != "path") fail("missing path");
        std::string rest;
        std::getline(in, rest);
        std::istringstream path_in(rest);
        int s;
        while (path_in >> s) o.path.push_back(s);
        if (!(in >> word) || word != "policy") fail("missing policy");
        std::getline(in, rest);
        o.policy.assign(states, -1);
        std::istringstream pol_in(rest);
        std::string entry;
        while (pol_in >> entry) {
            auto colon = entry.find(':');
            if (colon == std::string::npos) fail("bad policy entry " + entry);
            int state = std::stoi(entry.substr(0, colon));
            int action = std::stoi(entry.substr(colon + 1));
            if (state < 0 || state >= states) fail("policy state out of range");
            o.policy[state] = action;
        }
        opts.options.push_back(std::move(o));
    }
    for (int i = 0; i < log_rows; ++i) {
        DiscoveryRecord r;
        int degen = 0;
        if (!(in >> word >> r.iteration >> r.lambda2_before >> r.lambda3_before >>
              r.lambda2_after >> r.gain >> degen >> r.from >> r.to) ||
            word != "logrow")
            fail("bad log row");
        r.degenerate = degen != 0;
        opts.discovery_log.push_back(r);
    }

    if (base) {
        Graph g = *base;
        for (const auto& [u, v] : option_shortcuts(opts))
            if (!g.has_edge(u, v)) g.add_edge(u, v);
        opts.augmented_graph = g;
    } else if (states > 0) {
        opts.augmented_graph = Graph(states);
    }
    return opts;
}

void save_option_set(const OptionSet& opts, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write option set: " + path);
    write_option_set(opts, out);
}

OptionSet load_option_set(const std::string& path, const Graph* base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open option set: " + path);
    return read_option_set(in, base);
}

}  // namespace covop
