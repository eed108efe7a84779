#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "covop/graph.hpp"
#include "covop/rng.hpp"

namespace covop {

// One possible result of taking an action: probability mass, successor
// state, and the reward collected on that transition.
struct Outcome {
    int next = 0;
    double prob = 0.0;
    double reward = 0.0;
};

// Finite MDP with dense state indices and a per-state action list. The
// transition table is *structural*: it describes where each action leads
// even out of terminal states, so random-walk analysis can treat the state
// space as a plain graph. Absorption at terminal states is enforced by the
// sampling interface (`step`), which is what agents use.
class TabularMDP {
  public:
    TabularMDP(int states, double discount);

    int state_count() const { return static_cast<int>(trans_.size()); }
    double discount() const { return discount_; }

    void set_action_count(int s, int count);
    void add_outcome(int s, int a, int next, double prob, double reward);
    void set_terminal(int s, bool value = true);
    void add_initial(int s);

    int action_count(int s) const;
    const std::vector<Outcome>& outcomes(int s, int a) const;
    bool is_terminal(int s) const { return terminal_.at(s); }
    const std::vector<int>& initial_states() const { return initial_; }
    int initial_state() const;  // first designated initial state

    // Agent-facing transition: terminal states absorb (stay, reward 0).
    std::pair<int, double> step(int s, int a, Rng& rng) const;
    int sample_initial(Rng& rng) const;

    // Structural successor draw, ignoring terminal absorption.
    int structural_next(int s, int a, Rng& rng) const;

    // True when every (s, a) has exactly one outcome.
    bool deterministic() const;

    // Checks probability normalization and index ranges; throws Error.
    void validate() const;

  private:
    void check_state(int s) const;

    std::vector<std::vector<std::vector<Outcome>>> trans_;
    std::vector<bool> terminal_;
    std::vector<int> initial_;
    double discount_;
};

// Undirected state-transition graph: edge (s, s') iff some action moves
// s -> s' or s' -> s with positive probability. Self-transitions dropped.
Graph graph_from_mdp(const TabularMDP& mdp);

// Stochastic-shortest-path MDP over a graph: one action per incident edge,
// `step_reward` on every transition, the goal terminal, discount 1.
TabularMDP ssp_from_graph(const Graph& g, int goal, double step_reward = -1.0);

}  // namespace covop
