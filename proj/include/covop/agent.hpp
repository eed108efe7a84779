#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covop/graph.hpp"
#include "covop/mdp.hpp"
#include "covop/options.hpp"

namespace covop {

// One entry of a state's action menu: a primitive action or an option.
struct Choice {
    bool is_option = false;
    int index = 0;  // primitive action id, or index into the option set
};

// Q-values stored exactly for the menu available at each state: every
// primitive action, plus each option at the states where it may start (its
// initiation state; everywhere its policy is defined once widened).
struct QTable {
    double alpha = 0.1;
    double gamma = 0.95;
    std::vector<std::vector<Choice>> menu;
    std::vector<std::vector<double>> q;  // aligned with menu

    double best_value(int s) const;  // 0 when the menu is empty
    int best_index(int s) const;     // greedy pick, lowest index wins ties
};

QTable make_q_table(const TabularMDP& mdp, const OptionSet& options,
                    double alpha, double gamma);

// The SMDP backup. tau = 1 with discounted_return = r and discount_pow_tau
// = gamma recovers the one-step Q-learning update exactly.
inline double smdp_update(double q, double discounted_return,
                          double discount_pow_tau, double best_next,
                          double alpha) {
    return q + alpha * (discounted_return + discount_pow_tau * best_next - q);
}

struct TransitionStep {
    int state = 0;
    int action = 0;
    double reward = 0.0;
    int next = 0;
};

struct Trajectory {
    std::vector<TransitionStep> steps;  // consecutive steps chain
    int episode = 0;
    std::uint64_t seed = 0;
};

struct LearningCurve {
    std::vector<double> episode_reward;  // accumulated env reward per episode
    std::uint64_t seed = 0;
};

struct QLearningResult {
    QTable table;
    LearningCurve curve;
};

// Tabular Q-learning with call-and-return option execution. Options run
// their deterministic policy until their termination state, a terminal
// state, the episode step budget, or a 2n-step safety cap; the backup is
// Q(s,o) += alpha * (R + gamma^tau * max_a' Q(s',a') - Q(s,o)) with R the
// gamma-discounted reward collected over the option's tau steps.
// Exploration is epsilon-greedy over the state's menu. Throws OptionStuck
// when an option (without terminate_unknown) visits a state where its
// policy is undefined.
QLearningResult q_learning(const TabularMDP& mdp, const OptionSet& options,
                           int episodes, int max_steps, double alpha = 0.1,
                           double gamma = 0.95, double exploration = 0.1,
                           std::uint64_t seed = 0);

// Graph over the states observed in trajectories, densely re-indexed in
// order of first appearance; an edge per observed transition.
struct IncidenceGraph {
    Graph graph{1};
    std::vector<int> to_env;    // dense node -> environment state
    std::vector<int> from_env;  // environment state -> dense node, -1 unseen
};

IncidenceGraph build_incidence_graph(const std::vector<Trajectory>& trajectories,
                                     int state_count);
IncidenceGraph incidence_from_steps(const std::vector<TransitionStep>& steps,
                                    int state_count);

// Uniform-random-policy rollouts (stopping early at terminal states).
std::vector<Trajectory> sample_random_trajectories(const TabularMDP& mdp,
                                                   int count, int steps,
                                                   std::uint64_t seed);

// Discovery on the incidence graph of sampled experience. method is one of
// "covering", "eigen", "betweenness". Returned options carry environment
// state ids, policies restricted to the known states, and terminate when
// they leave the known set. The discovery log describes the known graph.
OptionSet offline_sampled_discovery(const TabularMDP& mdp,
                                    const std::string& method, int trajectories,
                                    int steps_per_traj, int k,
                                    std::uint64_t seed);

// Off-policy Q-learning over recorded transitions toward one subgoal:
// intrinsic reward 1 on reaching it, environment rewards ignored, the
// subgoal treated as absorbing. Returns the greedy per-state action, -1
// where no positive value was propagated by the sweeps.
std::vector<int> replay_option_policy(const TabularMDP& mdp,
                                      const std::vector<TransitionStep>& replay,
                                      int subgoal, int sweeps = 10);

struct OnlineRunResult {
    QTable table;
    LearningCurve curve;
    OptionSet options;
    std::vector<std::string> interval_log;    // one line per discovery point
    std::vector<int> options_per_episode;     // option count after each episode
};

// Q-learning that grows its own option set: every interval_steps total
// steps it builds the incidence graph of all experience so far, discovers
// `batch` covering options on the connected component containing the
// current state, trains each option policy off-policy over the replay
// (10 sweeps, intrinsic reward 1 at the subgoal, env rewards ignored),
// freezes it, and continues; stops adding at max_options. Degenerate
// discovery points (too little explored, complete subgraph, solver
// failure) are skipped and logged.
OnlineRunResult online_discovery_run(const TabularMDP& mdp, int batch,
                                     int interval_steps, int max_options,
                                     int episodes, int max_steps,
                                     std::uint64_t seed, double alpha = 0.1,
                                     double gamma = 0.95,
                                     double exploration = 0.1);

struct SweepCurve {
    int option_count = 0;
    std::vector<LearningCurve> runs;
};

// Learning curves for nested prefixes of an option pool; run r uses the
// same seed at every count so curves differ only by the option set.
// counts must be even, non-negative, strictly ascending, and within the
// pool size.
std::vector<SweepCurve> option_count_sweep(const TabularMDP& mdp,
                                           const OptionSet& pool,
                                           const std::vector<int>& counts,
                                           int runs, int episodes, int max_steps,
                                           double alpha, double gamma,
                                           double exploration,
                                           std::uint64_t seed);

}  // namespace covop
