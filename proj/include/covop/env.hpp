#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "covop/mdp.hpp"

namespace covop {

// ASCII gridworld: '#' wall, '.' floor, 'S' the unique start, 'G' goal
// (at least one). State indices enumerate non-wall cells row-major.
struct GridMap {
    int rows = 0;
    int cols = 0;
    std::vector<std::string> lines;               // raw map text, validated
    std::vector<std::vector<int>> state_id;       // -1 on walls
    std::vector<std::pair<int, int>> coords;      // state -> (row, col)
    int start_state = -1;
    std::vector<int> goal_states;

    int state_count() const { return static_cast<int>(coords.size()); }
    int state_at(int r, int c) const;             // -1 outside / wall
    bool is_goal(int state) const;
};

// Throws MalformedMap with 1-based line/column diagnostics; Disconnected
// when the floor cells do not form a single component.
GridMap parse_grid(const std::string& text);
GridMap read_grid(const std::string& path);
std::string write_grid(const GridMap& map);       // inverse of parse_grid

// Four deterministic move actions (0 up, 1 down, 2 left, 3 right); walls
// and map edges bump (state unchanged). Reward 1 on entering a goal cell,
// 0 elsewhere; goals absorbing; discount 0.95.
TabularMDP grid_mdp(const GridMap& map);
TabularMDP load_grid(const std::string& path);

// Default layout directory: $COVOP_DATA_DIR if set, else "data".
std::string data_directory();

// 5x5 taxi: 4 landmarks, passenger at a landmark or aboard, destination a
// landmark. state = ((row*5 + col)*5 + passenger)*4 + destination, with
// passenger 0..3 = landmark index, 4 = in taxi. Actions 0 N, 1 S, 2 E,
// 3 W, 4 pickup, 5 dropoff. Pickup works only at the waiting passenger's
// landmark; dropoff deposits the passenger at whichever landmark the taxi
// stands on (delivery, reward 1, when it is the destination); elsewhere
// both are no-ops. Passenger-at-destination states are absorbing. Initial
// states: every configuration with the passenger waiting somewhere other
// than the destination. NOTE: the destination never changes, so the
// transition graph has one connected component per destination.
TabularMDP taxi();
int taxi_state(int row, int col, int passenger, int destination);

// Towers of Hanoi: 3^discs states (each disc's peg, smallest = least
// significant base-3 digit). Actions are ordered peg pairs (0,1), (0,2),
// (1,0), (1,2), (2,0), (2,1); illegal moves are no-ops. Start all on peg
// 0, goal all on peg 2 (absorbing, reward 1 on entry).
TabularMDP hanoi(int discs = 4);

// Race track: '#' wall, '.' track, 's' start line, 'F' finish line.
// State = cell * (2*v_max+1)^2 + velocity index; 9 actions adjust each
// velocity component by -1/0/+1 (clamped). Moving along the straight
// segment to position+velocity: crossing 'F' finishes (reward 1,
// absorbing); leaving the track resets to a start cell (uniform) with
// zero velocity. Throws MalformedTrack.
TabularMDP parse_track(const std::string& text, int v_max = 4);
TabularMDP race_track(const std::string& path = "", int v_max = 4);

// Serpentine corridor maze shipped under the data directory.
TabularMDP parr_maze(const std::string& path = "");

// Shortest-path MDP on a random connected graph: cost 1 per step
// (reward -1), discount 1, distinct start/goal drawn uniformly.
TabularMDP random_ssp(int n, double density, std::uint64_t seed);

}  // namespace covop
