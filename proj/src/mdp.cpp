#include "covop/mdp.hpp"

#include <cmath>
#include <string>

#include "covop/errors.hpp"

namespace covop {

TabularMDP::TabularMDP(int states, double discount)
    : trans_(states), terminal_(states, false), discount_(discount) {
    if (states <= 0) throw Error("MDP needs at least one state");
    if (discount < 0.0 || discount > 1.0)
        throw Error("discount must lie in [0, 1], got " + std::to_string(discount));
}

void TabularMDP::check_state(int s) const {
    if (s < 0 || s >= state_count())
        throw Error("state index " + std::to_string(s) + " out of range [0, " +
                    std::to_string(state_count()) + ")");
}

void TabularMDP::set_action_count(int s, int count) {
    check_state(s);
    if (count < 1) throw Error("every state needs at least one action");
    trans_[s].assign(count, {});
}

void TabularMDP::add_outcome(int s, int a, int next, double prob, double reward) {
    check_state(s);
    check_state(next);
    if (a < 0 || a >= action_count(s))
        throw Error("action " + std::to_string(a) + " undefined at state " +
                    std::to_string(s));
    if (prob <= 0.0 || prob > 1.0)
        throw Error("outcome probability must be in (0, 1]");
    trans_[s][a].push_back({next, prob, reward});
}

void TabularMDP::set_terminal(int s, bool value) {
    check_state(s);
    terminal_[s] = value;
}

void TabularMDP::add_initial(int s) {
    check_state(s);
    initial_.push_back(s);
}

int TabularMDP::action_count(int s) const {
    check_state(s);
    return static_cast<int>(trans_[s].size());
}

const std::vector<Outcome>& TabularMDP::outcomes(int s, int a) const {
    check_state(s);
    if (a < 0 || a >= action_count(s))
        throw Error("action " + std::to_string(a) + " undefined at state " +
                    std::to_string(s));
    return trans_[s][a];
}

int TabularMDP::initial_state() const {
    if (initial_.empty()) throw Error("MDP has no initial state designated");
    return initial_.front();
}

int TabularMDP::structural_next(int s, int a, Rng& rng) const {
    const auto& outs = outcomes(s, a);
    if (outs.size() == 1) return outs.front().next;
    double u = rng.next_double();
    double acc = 0.0;
    for (const auto& o : outs) {
        acc += o.prob;
        if (u < acc) return o.next;
    }
    return outs.back().next;  // guards against rounding at u ~= 1
}

std::pair<int, double> TabularMDP::step(int s, int a, Rng& rng) const {
    if (is_terminal(s)) return {s, 0.0};
    const auto& outs = outcomes(s, a);
    if (outs.size() == 1) return {outs.front().next, outs.front().reward};
    double u = rng.next_double();
    double acc = 0.0;
    for (const auto& o : outs) {
        acc += o.prob;
        if (u < acc) return {o.next, o.reward};
    }
    return {outs.back().next, outs.back().reward};
}

int TabularMDP::sample_initial(Rng& rng) const {
    if (initial_.empty()) throw Error("MDP has no initial state designated");
    if (initial_.size() == 1) return initial_.front();
    return initial_[rng.next_below(initial_.size())];
}

bool TabularMDP::deterministic() const {
    for (const auto& per_state : trans_)
        for (const auto& outs : per_state)
            if (outs.size() != 1) return false;
    return true;
}

void TabularMDP::validate() const {
    for (int s = 0; s < state_count(); ++s) {
        if (trans_[s].empty())
            throw Error("state " + std::to_string(s) + " has no actions");
        for (int a = 0; a < action_count(s); ++a) {
            const auto& outs = trans_[s][a];
            if (outs.empty())
                throw Error("state " + std::to_string(s) + " action " +
                            std::to_string(a) + " has no outcomes");
            double total = 0.0;
            for (const auto& o : outs) total += o.prob;
            if (std::fabs(total - 1.0) > 1e-12)
                throw Error("transition probabilities at (" + std::to_string(s) +
                            ", " + std::to_string(a) + ") sum to " +
                            std::to_string(total));
        }
    }
}

Graph graph_from_mdp(const TabularMDP& mdp) {
    Graph g(mdp.state_count());
    for (int s = 0; s < mdp.state_count(); ++s)
        for (int a = 0; a < mdp.action_count(s); ++a)
            for (const auto& o : mdp.outcomes(s, a))
                if (o.next != s && !g.has_edge(s, o.next)) g.add_edge(s, o.next);
    return g;
}

TabularMDP ssp_from_graph(const Graph& g, int goal, double step_reward) {
    TabularMDP mdp(g.node_count(), 1.0);
    for (int s = 0; s < g.node_count(); ++s) {
        const auto& nbrs = g.neighbors(s);
        if (nbrs.empty()) throw IsolatedNode(s);
        mdp.set_action_count(s, static_cast<int>(nbrs.size()));
        for (int a = 0; a < static_cast<int>(nbrs.size()); ++a)
            mdp.add_outcome(s, a, nbrs[a], 1.0, step_reward);
    }
    mdp.set_terminal(goal);
    return mdp;
}

}  // namespace covop
