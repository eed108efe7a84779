#include "covop/cover_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "covop/eigen.hpp"
#include "covop/errors.hpp"

namespace covop {

namespace {

// Dense linear solve (partial pivoting), in place. a is row-major n*n.
std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b) {
    int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[static_cast<size_t>(r) * n + col]) >
                std::fabs(a[static_cast<size_t>(pivot) * n + col]))
                pivot = r;
        if (std::fabs(a[static_cast<size_t>(pivot) * n + col]) < 1e-300)
            throw Error("singular linear system in exact solver");
        if (pivot != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<size_t>(pivot) * n + c],
                          a[static_cast<size_t>(col) * n + c]);
            std::swap(b[pivot], b[col]);
        }
        double inv = 1.0 / a[static_cast<size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            double f = a[static_cast<size_t>(r) * n + col] * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<size_t>(r) * n + c] -=
                    f * a[static_cast<size_t>(col) * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[static_cast<size_t>(r) * n + c] * x[c];
        x[r] = acc / a[static_cast<size_t>(r) * n + r];
    }
    return x;
}

void mean_stderr(double sum, double sumsq, int count, double& mean, double& se) {
    mean = sum / count;
    if (count < 2) {
        // One sample says nothing about spread; report that honestly.
        se = std::numeric_limits<double>::infinity();
        return;
    }
    double var = (sumsq - sum * sum / count) / (count - 1);
    se = std::sqrt(std::max(0.0, var) / count);
}

}  // namespace

long sample_cover_time(const RandomWalk& walk, int start, Rng& rng) {
    const Graph& g = walk.graph();
    if (!g.connected()) throw Disconnected();
    int n = g.node_count();
    std::vector<char> visited(n, 0);
    visited[start] = 1;
    int remaining = n - 1;
    int u = start;
    long steps = 0;
    while (remaining > 0) {
        u = walk.step(u, rng);
        ++steps;
        if (!visited[u]) {
            visited[u] = 1;
            --remaining;
        }
    }
    return steps;
}

CoverTimeEstimate estimate_cover_time(const Graph& g, int trajectories_per_start,
                                      std::uint64_t seed) {
    if (trajectories_per_start < 1)
        throw Error("need at least one trajectory per start");
    if (!g.connected()) throw Disconnected();
    int n = g.node_count();

    CoverTimeEstimate est;
    est.trajectories_per_start = trajectories_per_start;
    est.seed = seed;
    est.per_start_mean.resize(n);
    est.per_start_stderr.resize(n);

    RandomWalk walk(g);
    for (int s = 0; s < n; ++s) {
        double sum = 0.0, sumsq = 0.0;
        for (int t = 0; t < trajectories_per_start; ++t) {
            Rng rng(derive_seed(seed, stream::cover_walk, s, t));
            double c = static_cast<double>(sample_cover_time(walk, s, rng));
            sum += c;
            sumsq += c * c;
        }
        mean_stderr(sum, sumsq, trajectories_per_start, est.per_start_mean[s],
                    est.per_start_stderr[s]);
    }
    est.max_over_starts = *std::max_element(est.per_start_mean.begin(),
                                            est.per_start_mean.end());
    est.avg_over_starts =
        std::accumulate(est.per_start_mean.begin(), est.per_start_mean.end(), 0.0) / n;
    return est;
}

double cover_time_upper_bound(double lambda2, long n) {
    if (lambda2 <= 0.0) throw NonPositiveConnectivity();
    if (n < 2) throw Error("bound needs at least two nodes");
    double nn = static_cast<double>(n);
    return nn * nn * std::log(nn) / lambda2;
}

Graph random_connected_graph(int n, double density, Rng& rng) {
    if (n < 1) throw Error("graph needs at least one node");
    if (density <= 0.0 || density > 1.0)
        throw Error("density must lie in (0, 1], got " + std::to_string(density));
    long max_edges = static_cast<long>(n) * (n - 1) / 2;
    long target = static_cast<long>(std::ceil(density * static_cast<double>(max_edges)));
    if (target < n - 1)
        throw DensityTooLow("density " + std::to_string(density) + " yields " +
                            std::to_string(target) + " edges; a spanning tree on " +
                            std::to_string(n) + " nodes needs " + std::to_string(n - 1));

    Graph g(n);
    for (int v = 1; v < n; ++v)
        g.add_edge(v, static_cast<int>(rng.next_below(static_cast<std::uint32_t>(v))));

    std::vector<std::pair<int, int>> absent;
    absent.reserve(max_edges - (n - 1));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!g.has_edge(u, v)) absent.emplace_back(u, v);

    while (g.edge_count() < target) {
        std::uint32_t pick = rng.next_below(static_cast<std::uint32_t>(absent.size()));
        auto [u, v] = absent[pick];
        g.add_edge(u, v);
        absent[pick] = absent.back();
        absent.pop_back();
    }
    return g;
}

namespace {

// Flattened uniform-choice table for the random-action walk: entries >= 0 are
// deterministic successors; entry -(a+1) means "sample action a".
struct ChoiceTable {
    std::vector<int> offsets;
    std::vector<int> entries;
    int width(int s) const { return offsets[s + 1] - offsets[s]; }
};

ChoiceTable build_choices(const TabularMDP& mdp,
                          const std::vector<std::pair<int, int>>& shortcuts) {
    int n = mdp.state_count();
    std::vector<std::vector<int>> jump(n);
    for (const auto& [i, j] : shortcuts) {
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw Error("shortcut endpoint out of range");
        jump[i].push_back(j);
        jump[j].push_back(i);
    }
    ChoiceTable table;
    table.offsets.assign(n + 1, 0);
    for (int s = 0; s < n; ++s) {
        table.offsets[s + 1] = table.offsets[s] + mdp.action_count(s) +
                               static_cast<int>(jump[s].size());
    }
    table.entries.resize(table.offsets[n]);
    for (int s = 0; s < n; ++s) {
        int pos = table.offsets[s];
        for (int a = 0; a < mdp.action_count(s); ++a) {
            const auto& outs = mdp.outcomes(s, a);
            table.entries[pos++] = outs.size() == 1 ? outs.front().next : -(a + 1);
        }
        for (int j : jump[s]) table.entries[pos++] = j;
    }
    return table;
}

}  // namespace

VisitTimeEstimate estimate_visit_times(
    const TabularMDP& mdp, const std::vector<std::pair<int, int>>& shortcuts,
    int trajectories_per_start, std::uint64_t seed, const std::vector<int>& starts) {
    if (trajectories_per_start < 1)
        throw Error("need at least one trajectory per start");
    Graph g = graph_from_mdp(mdp);
    for (const auto& [i, j] : shortcuts)
        if (i != j && !g.has_edge(i, j)) g.add_edge(i, j);
    if (!g.connected()) throw Disconnected();

    int n = mdp.state_count();
    ChoiceTable table = build_choices(mdp, shortcuts);

    VisitTimeEstimate est;
    est.trajectories_per_start = trajectories_per_start;
    est.seed = seed;
    est.starts = starts;
    if (est.starts.empty()) {
        est.starts.resize(n);
        std::iota(est.starts.begin(), est.starts.end(), 0);
    }

    std::vector<double> sum(n), sumsq(n);
    std::vector<long> first_visit(n);
    std::vector<int> stamp(n, -1);

    for (int start : est.starts) {
        if (start < 0 || start >= n) throw Error("start state out of range");
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(sumsq.begin(), sumsq.end(), 0.0);

        for (int t = 0; t < trajectories_per_start; ++t) {
            Rng rng(derive_seed(seed, stream::hitting_walk, start, t));
            stamp[start] = t + 1;  // stamps distinguish trajectories, no per-pass reset
            first_visit[start] = 0;
            int remaining = n - 1;
            int u = start;
            long steps = 0;
            while (remaining > 0) {
                int base = table.offsets[u];
                int code = table.entries[base + static_cast<int>(rng.next_below(
                                                    static_cast<std::uint32_t>(
                                                        table.width(u))))];
                u = code >= 0 ? code : mdp.structural_next(u, -code - 1, rng);
                ++steps;
                if (stamp[u] != t + 1) {
                    stamp[u] = t + 1;
                    first_visit[u] = steps;
                    --remaining;
                }
            }
            for (int j = 0; j < n; ++j) {
                double f = static_cast<double>(first_visit[j]);
                sum[j] += f;
                sumsq[j] += f * f;
            }
        }

        int worst = 0;
        for (int j = 1; j < n; ++j)
            if (sum[j] > sum[worst]) worst = j;
        double mean, se;
        mean_stderr(sum[worst], sumsq[worst], trajectories_per_start, mean, se);
        est.per_start_mean.push_back(mean);
        est.per_start_stderr.push_back(se);
        est.per_start_worst.push_back(worst);

        // stamps are per-trajectory; clear between starts so the t-counter
        // reuse cannot collide
        std::fill(stamp.begin(), stamp.end(), -1);
    }

    est.max_over_starts = *std::max_element(est.per_start_mean.begin(),
                                            est.per_start_mean.end());
    est.avg_over_starts = std::accumulate(est.per_start_mean.begin(),
                                          est.per_start_mean.end(), 0.0) /
                          static_cast<double>(est.per_start_mean.size());
    return est;
}

std::vector<double> exact_visit_times(
    const TabularMDP& mdp, const std::vector<std::pair<int, int>>& shortcuts) {
    int n = mdp.state_count();
    if (n > 150) throw Error("exact visit-time solver is for small models (n <= 150)");
    Graph g = graph_from_mdp(mdp);
    for (const auto& [i, j] : shortcuts)
        if (i != j && !g.has_edge(i, j)) g.add_edge(i, j);
    if (!g.connected()) throw Disconnected();

    // Row-stochastic kernel of the uniform-random-action walk with shortcuts.
    std::vector<std::vector<int>> jump(n);
    for (const auto& [i, j] : shortcuts) {
        jump[i].push_back(j);
        jump[j].push_back(i);
    }
    std::vector<double> p(static_cast<size_t>(n) * n, 0.0);
    for (int s = 0; s < n; ++s) {
        double w = 1.0 / (mdp.action_count(s) + jump[s].size());
        for (int a = 0; a < mdp.action_count(s); ++a)
            for (const auto& o : mdp.outcomes(s, a))
                p[static_cast<size_t>(s) * n + o.next] += w * o.prob;
        for (int j : jump[s]) p[static_cast<size_t>(s) * n + j] += w;
    }

    // For each target j solve (I - P restricted away from j) h = 1.
    std::vector<double> worst(n, 0.0);
    std::vector<int> keep(n - 1);
    for (int j = 0; j < n; ++j) {
        int idx = 0;
        for (int v = 0; v < n; ++v)
            if (v != j) keep[idx++] = v;
        std::vector<double> a(static_cast<size_t>(n - 1) * (n - 1));
        for (int r = 0; r < n - 1; ++r)
            for (int c = 0; c < n - 1; ++c)
                a[static_cast<size_t>(r) * (n - 1) + c] =
                    (r == c ? 1.0 : 0.0) -
                    p[static_cast<size_t>(keep[r]) * n + keep[c]];
        std::vector<double> h = solve_linear(std::move(a),
                                             std::vector<double>(n - 1, 1.0));
        for (int r = 0; r < n - 1; ++r) worst[keep[r]] = std::max(worst[keep[r]], h[r]);
    }
    return worst;
}

double random_policy_cost(const TabularMDP& mdp, int start, int goal,
                          int trajectories, std::uint64_t seed) {
    if (trajectories < 1) throw Error("need at least one trajectory");
    Graph g = graph_from_mdp(mdp);
    auto dist = g.bfs_distances(start);
    if (goal < 0 || goal >= mdp.state_count() || dist[goal] < 0)
        throw Unreachable(start, goal);
    if (start == goal) return 0.0;

    const long step_cap = 100'000'000;
    double total = 0.0;
    for (int t = 0; t < trajectories; ++t) {
        Rng rng(derive_seed(seed, stream::policy_cost, t));
        int u = start;
        long steps = 0;
        while (u != goal) {
            int a = static_cast<int>(
                rng.next_below(static_cast<std::uint32_t>(mdp.action_count(u))));
            u = mdp.structural_next(u, a, rng);
            if (++steps > step_cap)
                throw Error("random policy exceeded the step cap before the goal");
        }
        total += static_cast<double>(steps);
    }
    return total / trajectories;
}

std::vector<StudyRow> correlation_study(int num_graphs, int n, double density,
                                        int trajectories, std::uint64_t seed) {
    if (num_graphs < 1 || n < 2 || trajectories < 1)
        throw Error("study parameters must be positive");
    std::vector<StudyRow> rows;
    rows.reserve(num_graphs);
    for (int gi = 0; gi < num_graphs; ++gi) {
        Rng gen(derive_seed(seed, stream::graph_gen, gi));
        Graph g = random_connected_graph(n, density, gen);

        StudyRow row;
        row.graph_index = gi;
        row.n = n;
        row.m = g.edge_count();

        Spectrum spec = smallest_eigenpairs(g, 2, Laplacian::combinatorial, 1e-9);
        row.lambda2 = spec.lambda2();

        CoverTimeEstimate cover =
            estimate_cover_time(g, trajectories, derive_seed(seed, stream::study, gi, 1));
        row.cover_max = cover.max_over_starts;
        row.cover_avg = cover.avg_over_starts;
        int argmax = static_cast<int>(std::max_element(cover.per_start_mean.begin(),
                                                       cover.per_start_mean.end()) -
                                      cover.per_start_mean.begin());
        row.cover_stderr = cover.per_start_stderr[argmax];

        Rng pick(derive_seed(seed, stream::study, gi, 2));
        row.start = static_cast<int>(pick.next_below(static_cast<std::uint32_t>(n)));
        do {
            row.goal = static_cast<int>(pick.next_below(static_cast<std::uint32_t>(n)));
        } while (row.goal == row.start);

        TabularMDP ssp = ssp_from_graph(g, row.goal);
        row.policy_cost = random_policy_cost(ssp, row.start, row.goal, trajectories,
                                             derive_seed(seed, stream::study, gi, 3));
        rows.push_back(row);
    }
    return rows;
}

ValueBoundReport value_bound_check(const TabularMDP& mdp, int goal,
                                   int trajectories, std::uint64_t seed) {
    Graph g = graph_from_mdp(mdp);
    if (!g.connected()) throw Disconnected();
    int n = mdp.state_count();
    if (goal < 0 || goal >= n) throw Error("goal state out of range");

    // The theorem's setting has one uniform step reward; read it off the
    // table and insist it really is uniform.
    double r = mdp.outcomes(0, 0).front().reward;
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < mdp.action_count(s); ++a)
            for (const auto& o : mdp.outcomes(s, a))
                if (o.reward != r)
                    throw Error("value bound needs a uniform per-step reward");
    if (r > 0.0) throw Error("value bound needs a non-positive step reward");

    // Exact uniform-policy evaluation with discount 1 and the goal absorbing:
    // (I - P) V = r over non-goal states.
    std::vector<int> keep;
    keep.reserve(n - 1);
    for (int s = 0; s < n; ++s)
        if (s != goal) keep.push_back(s);
    int m = static_cast<int>(keep.size());
    std::vector<int> col(n, -1);
    for (int i = 0; i < m; ++i) col[keep[i]] = i;

    std::vector<double> a(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        int s = keep[i];
        a[static_cast<size_t>(i) * m + i] = 1.0;
        double w = 1.0 / mdp.action_count(s);
        for (int act = 0; act < mdp.action_count(s); ++act)
            for (const auto& o : mdp.outcomes(s, act))
                if (o.next != goal)
                    a[static_cast<size_t>(i) * m + col[o.next]] -= w * o.prob;
    }
    std::vector<double> v = solve_linear(std::move(a), std::vector<double>(m, r));

    ValueBoundReport report;
    report.worst_value = *std::min_element(v.begin(), v.end());

    CoverTimeEstimate cover = estimate_cover_time(g, trajectories, seed);
    report.cover_estimate = cover.max_over_starts;
    int argmax = static_cast<int>(std::max_element(cover.per_start_mean.begin(),
                                                   cover.per_start_mean.end()) -
                                  cover.per_start_mean.begin());
    report.cover_stderr = cover.per_start_stderr[argmax];
    report.bound = r * report.cover_estimate;
    report.satisfied =
        report.worst_value >= report.bound - 3.0 * std::fabs(r) * report.cover_stderr;
    return report;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw Error("correlation needs two equal-length samples of size >= 2");
    auto ranks = [](const std::vector<double>& x) {
        int n = static_cast<int>(x.size());
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int i, int j) { return x[i] < x[j]; });
        std::vector<double> rank(n);
        int i = 0;
        while (i < n) {
            int j = i;
            while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
            double avg = 0.5 * (i + j) + 1.0;  // average rank for the tie group
            for (int t = i; t <= j; ++t) rank[order[t]] = avg;
            i = j + 1;
        }
        return rank;
    };
    std::vector<double> ra = ranks(a), rb = ranks(b);
    int n = static_cast<int>(a.size());
    double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (int i = 0; i < n; ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 || vb == 0.0)
        throw Error("correlation undefined: a sample is constant");
    return cov / std::sqrt(va * vb);
}

std::vector<double> exact_cover_times(const Graph& g) {
    int n = g.node_count();
    if (n > 16) throw Error("exact cover-time solver is for small graphs (n <= 16)");
    if (!g.connected()) throw Disconnected();
    if (n == 1) return {0.0};

    const std::uint32_t full = (1u << n) - 1;
    // expected[S * n + u]: steps to finish covering from node u with visited
    // set S (u in S). Subsets processed by decreasing population count; the
    // walk stays inside S until it first exits, so each subset is a small
    // linear system over its members.
    std::vector<double> expected(static_cast<size_t>(full + 1) * n, 0.0);
    std::vector<std::uint32_t> by_count(full + 1);
    std::iota(by_count.begin(), by_count.end(), 0u);
    std::stable_sort(by_count.begin(), by_count.end(),
                     [](std::uint32_t x, std::uint32_t y) {
                         return __builtin_popcount(x) > __builtin_popcount(y);
                     });

    std::vector<int> members;
    for (std::uint32_t s_set : by_count) {
        if (s_set == full || s_set == 0) continue;
        members.clear();
        for (int u = 0; u < n; ++u)
            if (s_set & (1u << u)) members.push_back(u);
        int m = static_cast<int>(members.size());
        std::vector<int> local(n, -1);
        for (int i = 0; i < m; ++i) local[members[i]] = i;

        std::vector<double> a(static_cast<size_t>(m) * m, 0.0);
        std::vector<double> b(m, 1.0);
        for (int i = 0; i < m; ++i) {
            int u = members[i];
            a[static_cast<size_t>(i) * m + i] = 1.0;
            double w = 1.0 / g.degree(u);
            for (int v : g.neighbors(u)) {
                if (s_set & (1u << v))
                    a[static_cast<size_t>(i) * m + local[v]] -= w;
                else
                    b[i] += w * expected[static_cast<size_t>(s_set | (1u << v)) * n + v];
            }
        }
        std::vector<double> x = solve_linear(std::move(a), std::move(b));
        for (int i = 0; i < m; ++i)
            expected[static_cast<size_t>(s_set) * n + members[i]] = x[i];
    }

    std::vector<double> out(n);
    for (int u = 0; u < n; ++u)
        out[u] = expected[static_cast<size_t>(1u << u) * n + u];
    return out;
}

}  // namespace covop
