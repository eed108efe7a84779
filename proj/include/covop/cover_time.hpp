#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "covop/graph.hpp"
#include "covop/mdp.hpp"
#include "covop/rng.hpp"

namespace covop {

// Uniform random walk over graph neighbors: step distribution is exactly
// 1/deg(u) per neighbor of u.
class RandomWalk {
  public:
    explicit RandomWalk(const Graph& g) : g_(&g) {}
    const Graph& graph() const { return *g_; }
    int step(int u, Rng& rng) const {
        const auto& nbrs = g_->neighbors(u);
        return nbrs[rng.next_below(nbrs.size())];
    }

  private:
    const Graph* g_;
};

// Steps until the walk from `start` has visited every node (start counts as
// visited at step 0). Throws Disconnected up front.
long sample_cover_time(const RandomWalk& walk, int start, Rng& rng);

struct CoverTimeEstimate {
    std::vector<double> per_start_mean;
    std::vector<double> per_start_stderr;
    double max_over_starts = 0.0;
    double avg_over_starts = 0.0;
    int trajectories_per_start = 0;
    std::uint64_t seed = 0;
};

// Monte-Carlo cover-time estimate with one independent RNG stream per
// (start, trajectory); bit-identical for a given seed.
CoverTimeEstimate estimate_cover_time(const Graph& g, int trajectories_per_start,
                                      std::uint64_t seed);

// Spectral bound n^2 ln(n) / lambda2. Throws NonPositiveConnectivity.
double cover_time_upper_bound(double lambda2, long n);

// Random recursive tree plus uniformly drawn absent edges until the edge
// count reaches ceil(density * n(n-1)/2). Throws DensityTooLow.
Graph random_connected_graph(int n, double density, Rng& rng);

// Mean steps for the uniform-random policy to first reach `goal` from
// `start`. Throws Unreachable.
double random_policy_cost(const TabularMDP& mdp, int start, int goal,
                          int trajectories, std::uint64_t seed);

struct StudyRow {
    int graph_index = 0;
    int n = 0;
    int m = 0;
    int start = 0;
    int goal = 0;
    double lambda2 = 0.0;       // algebraic connectivity (D - A Laplacian)
    double cover_max = 0.0;     // max-over-starts cover-time estimate
    double cover_avg = 0.0;     // all-starts average
    double cover_stderr = 0.0;  // stderr at the argmax start
    double policy_cost = 0.0;   // random-policy steps start -> goal
};

// One row per random graph, each with a random (start, goal) shortest-path
// instance evaluated under the uniform random policy.
std::vector<StudyRow> correlation_study(int num_graphs, int n, double density,
                                        int trajectories, std::uint64_t seed);

struct ValueBoundReport {
    double worst_value = 0.0;     // min over states of the exact uniform-policy value
    double bound = 0.0;           // step reward times estimated worst-case cover time
    double cover_estimate = 0.0;  // max-over-starts Monte-Carlo estimate
    double cover_stderr = 0.0;    // stderr at the argmax start
    bool satisfied = false;       // worst_value >= bound - 3 * |r| * stderr
};

// Exact linear-solve policy evaluation of the uniform random policy on a
// shortest-path MDP (uniform step reward r <= 0, discount 1, absorbing goal)
// compared against r times the Monte-Carlo cover-time estimate.
ValueBoundReport value_bound_check(const TabularMDP& mdp, int goal,
                                   int trajectories = 2000, std::uint64_t seed = 0);

// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// Exact expected cover time from every start via the (node, visited-subset)
// absorbing chain. Brute-force reference; n <= 16.
std::vector<double> exact_cover_times(const Graph& g);

// ---------------------------------------------------------------------------
// Worst-case expected visit times of the uniform-random-action walk on an
// MDP. At each state the walk picks uniformly among the state's actions plus
// any shortcut jumps anchored there (a discovered option pair contributes a
// two-way jump traversed in one step); blocked moves keep their self-
// transition. Per start i the statistic is max over nodes j of the mean
// first-visit time of j.
// ---------------------------------------------------------------------------

struct VisitTimeEstimate {
    std::vector<int> starts;                // evaluated start states
    std::vector<double> per_start_mean;     // aligned with `starts`
    std::vector<double> per_start_stderr;   // stderr of the argmax-node mean
    std::vector<int> per_start_worst;       // node attaining the max
    double max_over_starts = 0.0;
    double avg_over_starts = 0.0;
    int trajectories_per_start = 0;
    std::uint64_t seed = 0;
};

VisitTimeEstimate estimate_visit_times(
    const TabularMDP& mdp, const std::vector<std::pair<int, int>>& shortcuts,
    int trajectories_per_start, std::uint64_t seed,
    const std::vector<int>& starts = {});  // empty: every state

// Exact counterpart (per-goal linear solves); reference for tests, n <= 150.
std::vector<double> exact_visit_times(
    const TabularMDP& mdp, const std::vector<std::pair<int, int>>& shortcuts);

}  // namespace covop
