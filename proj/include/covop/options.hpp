#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "covop/eigen.hpp"
#include "covop/graph.hpp"
#include "covop/laplacian.hpp"
#include "covop/mdp.hpp"

namespace covop {

// Option executable from a single state, terminating at a single state,
// with a deterministic policy defined along the connecting path (or on all
// states once widened / synthesized by value iteration).
struct PointOption {
    int initiation = -1;
    int termination = -1;
    std::vector<int> policy;  // per-state action, -1 where undefined
    std::vector<int> path;    // state sequence initiation..termination (may be
                              // empty for value-iteration policies)
    int length = 0;           // shortest-path steps initiation -> termination
    bool widened = false;     // executable from every state
    bool terminate_unknown = false;  // undefined policy state ends the option
                                     // (sampled discovery) instead of erroring

    bool defined_at(int s) const {
        return s >= 0 && s < static_cast<int>(policy.size()) && policy[s] >= 0;
    }
};

// One discovery iteration: the spectrum consulted, the chosen pair, and the
// connectivity before/after the corresponding edge insertion.
struct DiscoveryRecord {
    int iteration = 0;
    double lambda2_before = 0.0;
    double lambda3_before = 0.0;
    double lambda2_after = 0.0;
    double gain = 0.0;       // predicted lower-bound increment; 0 when degenerate
    bool degenerate = false; // lambda2 multiplicity above one at selection time
    int from = -1;           // argmax entry (option source of the first twin)
    int to = -1;             // argmin entry
};

struct OptionSet {
    std::vector<PointOption> options;
    Graph augmented_graph{1};
    std::vector<DiscoveryRecord> discovery_log;
};

// Predicted connectivity increment of inserting edge (i, j) given Fiedler
// entries vi, vj: (vi - vj)^2 / (6/(l3 - l2) + 3/2).
// Throws MultiplicityAboveOne when l3 - l2 < 1e-9.
double connectivity_gain(double lambda2, double lambda3, double vi, double vj);

// Greedy connectivity maximization: k/2 rounds of Fiedler argmax/argmin pair
// selection, mirrored point options, edge insertion, recompute. k even, >= 0;
// k = 0 yields an empty set with a single baseline log row.
// Throws Disconnected, CompleteGraph.
OptionSet covering_options(const Graph& g, int k, const TabularMDP& mdp,
                           Laplacian kind = Laplacian::combinatorial,
                           double tol = 1e-8);

// Baseline: consult eigenvectors 2..(k/2+1) of the original graph (no
// reinsertion feedback); one mirrored option pair per eigenvector.
OptionSet eigenoptions_point(const Graph& g, int k, const TabularMDP& mdp,
                             Laplacian kind = Laplacian::combinatorial,
                             double tol = 1e-8);

// Baseline: subgoals are the k highest-betweenness nodes that are local
// maxima; one option per subgoal from its most distant node.
OptionSet betweenness_options(const Graph& g, int k, const TabularMDP& mdp);

// Exact shortest-path betweenness per node (Brandes accumulation, undirected).
std::vector<double> betweenness_centrality(const Graph& g);

// Shortest deterministic path policy from -> to. Uses breadth-first search
// over the transition structure for deterministic MDPs and value iteration
// (reward 1 at `to`, discount 0.95) for stochastic ones. An optional
// allowed-state mask confines the search. Throws Unreachable.
PointOption option_policy(const TabularMDP& mdp, int from, int to);
PointOption option_policy(const TabularMDP& mdp, int from, int to,
                          const std::vector<char>& allowed);

// Make every option executable from any state: the policy becomes the full
// shortest-path policy toward the termination state.
OptionSet widen_initiation(const OptionSet& opts, const TabularMDP& mdp);

// Structured text round trip. The reader rebuilds the augmented graph when
// the base graph is supplied (each mirrored pair contributes one edge).
void write_option_set(const OptionSet& opts, std::ostream& out);
OptionSet read_option_set(std::istream& in, const Graph* base = nullptr);
void save_option_set(const OptionSet& opts, const std::string& path);
OptionSet load_option_set(const std::string& path, const Graph* base = nullptr);

// Undirected (initiation, termination) pairs, deduplicated: the shortcut
// edges an option set contributes to walk analysis.
std::vector<std::pair<int, int>> option_shortcuts(const OptionSet& opts);

}  // namespace covop
