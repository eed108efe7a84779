#include "covop/env.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "covop/cover_time.hpp"
#include "covop/errors.hpp"

namespace covop {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string cell_ref(int r, int c) {
    return "line " + std::to_string(r + 1) + ", column " + std::to_string(c + 1);
}

}  // namespace

int GridMap::state_at(int r, int c) const {
    if (r < 0 || r >= rows || c < 0 || c >= cols) return -1;
    return state_id[r][c];
}

bool GridMap::is_goal(int state) const {
    return std::binary_search(goal_states.begin(), goal_states.end(), state);
}

GridMap parse_grid(const std::string& text) {
    GridMap map;
    map.lines = split_lines(text);
    if (map.lines.empty()) throw MalformedMap("map is empty");
    map.rows = static_cast<int>(map.lines.size());
    map.cols = static_cast<int>(map.lines[0].size());
    if (map.cols == 0) throw MalformedMap("line 1 is empty");

    map.state_id.assign(map.rows, std::vector<int>(map.cols, -1));
    for (int r = 0; r < map.rows; ++r) {
        if (static_cast<int>(map.lines[r].size()) != map.cols)
            throw MalformedMap("line " + std::to_string(r + 1) + ": expected " +
                               std::to_string(map.cols) + " columns, got " +
                               std::to_string(map.lines[r].size()));
        for (int c = 0; c < map.cols; ++c) {
            char ch = map.lines[r][c];
            if (ch == '#') continue;
            if (ch != '.' && ch != 'S' && ch != 'G')
                throw MalformedMap(cell_ref(r, c) + ": unexpected character '" +
                                   std::string(1, ch) + "'");
            int id = static_cast<int>(map.coords.size());
            map.state_id[r][c] = id;
            map.coords.emplace_back(r, c);
            if (ch == 'S') {
                if (map.start_state >= 0)
                    throw MalformedMap(cell_ref(r, c) + ": duplicate start cell");
                map.start_state = id;
            } else if (ch == 'G') {
                map.goal_states.push_back(id);
            }
        }
    }
    if (map.coords.empty()) throw MalformedMap("map has no floor cells");
    if (map.start_state < 0) throw MalformedMap("map has no start cell");
    if (map.goal_states.empty()) throw MalformedMap("map has no goal cell");

    // Floor must form one component or the walk analysis is meaningless.
    std::vector<char> seen(map.coords.size(), 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    int reached = 1;
    static const int dr[4] = {-1, 1, 0, 0};
    static const int dc[4] = {0, 0, -1, 1};
    while (!queue.empty()) {
        int s = queue.back();
        queue.pop_back();
        auto [r, c] = map.coords[s];
        for (int a = 0; a < 4; ++a) {
            int t = map.state_at(r + dr[a], c + dc[a]);
            if (t >= 0 && !seen[t]) {
                seen[t] = 1;
                ++reached;
                queue.push_back(t);
            }
        }
    }
    if (reached != map.state_count())
        throw Disconnected("map floor is not connected: " + std::to_string(reached) +
                           " of " + std::to_string(map.state_count()) +
                           " cells reachable from the first");
    return map;
}

GridMap read_grid(const std::string& path) { return parse_grid(read_text_file(path)); }

std::string write_grid(const GridMap& map) {
    std::string out;
    for (const auto& line : map.lines) {
        out += line;
        out += '\n';
    }
    return out;
}

TabularMDP grid_mdp(const GridMap& map) {
    TabularMDP mdp(map.state_count(), 0.95);
    static const int dr[4] = {-1, 1, 0, 0};
    static const int dc[4] = {0, 0, -1, 1};
    for (int s = 0; s < map.state_count(); ++s) {
        mdp.set_action_count(s, 4);
        auto [r, c] = map.coords[s];
        for (int a = 0; a < 4; ++a) {
            int t = map.state_at(r + dr[a], c + dc[a]);
            int next = t < 0 ? s : t;
            double reward = (next != s && map.is_goal(next)) ? 1.0 : 0.0;
            mdp.add_outcome(s, a, next, 1.0, reward);
        }
    }
    for (int g : map.goal_states) mdp.set_terminal(g);
    mdp.add_initial(map.start_state);
    return mdp;
}

TabularMDP load_grid(const std::string& path) { return grid_mdp(read_grid(path)); }

std::string data_directory() {
    const char* dir = std::getenv("COVOP_DATA_DIR");
    return (dir != nullptr && *dir != '\0') ? std::string(dir) : std::string("data");
}

namespace {

constexpr int kTaxiLandmarks[4][2] = {{0, 0}, {0, 4}, {4, 0}, {4, 3}};

// Barriers between horizontally adjacent cells, listed as (row, left col).
constexpr int kTaxiWalls[6][2] = {{0, 1}, {1, 1}, {3, 0}, {4, 0}, {3, 2}, {4, 2}};

bool taxi_wall_between(int r, int c_left) {
    for (const auto& w : kTaxiWalls)
        if (w[0] == r && w[1] == c_left) return true;
    return false;
}

}  // namespace

int taxi_state(int row, int col, int passenger, int destination) {
    return ((row * 5 + col) * 5 + passenger) * 4 + destination;
}

TabularMDP taxi() {
    TabularMDP mdp(500, 0.95);
    static const int dr[4] = {-1, 1, 0, 0};   // N, S, E, W
    static const int dc[4] = {0, 0, 1, -1};
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            for (int p = 0; p < 5; ++p)
                for (int d = 0; d < 4; ++d) {
                    int s = taxi_state(r, c, p, d);
                    mdp.set_action_count(s, 6);
                    for (int a = 0; a < 4; ++a) {
                        int nr = r + dr[a];
                        int nc = c + dc[a];
                        bool ok = nr >= 0 && nr < 5 && nc >= 0 && nc < 5;
                        if (ok && dc[a] != 0 && taxi_wall_between(r, std::min(c, nc)))
                            ok = false;
                        int next = ok ? taxi_state(nr, nc, p, d) : s;
                        mdp.add_outcome(s, a, next, 1.0, 0.0);
                    }
                    int pick = s;
                    if (p < 4 && r == kTaxiLandmarks[p][0] && c == kTaxiLandmarks[p][1])
                        pick = taxi_state(r, c, 4, d);
                    mdp.add_outcome(s, 4, pick, 1.0, 0.0);
                    // Dropoff deposits the passenger at whichever landmark the
                    // taxi stands on (delivery only when it is the destination);
                    // elsewhere it is a no-op.
                    int drop = s;
                    double reward = 0.0;
                    if (p == 4) {
                        for (int l = 0; l < 4; ++l)
                            if (r == kTaxiLandmarks[l][0] && c == kTaxiLandmarks[l][1]) {
                                drop = taxi_state(r, c, l, d);
                                if (l == d) reward = 1.0;
                            }
                    }
                    mdp.add_outcome(s, 5, drop, 1.0, reward);
                    if (p == d)
                        mdp.set_terminal(s);
                    else if (p < 4)
                        mdp.add_initial(s);
                }
    return mdp;
}

TabularMDP hanoi(int discs) {
    if (discs < 1 || discs > 12)
        throw Error("hanoi: disc count must lie in [1, 12], got " + std::to_string(discs));
    int n = 1;
    for (int i = 0; i < discs; ++i) n *= 3;
    TabularMDP mdp(n, 0.95);
    static const int from[6] = {0, 0, 1, 1, 2, 2};
    static const int to[6] = {1, 2, 0, 2, 0, 1};
    std::vector<int> peg(discs);
    for (int s = 0; s < n; ++s) {
        mdp.set_action_count(s, 6);
        int top[3] = {-1, -1, -1};
        int code = s;
        for (int i = 0; i < discs; ++i) {
            peg[i] = code % 3;
            code /= 3;
            if (top[peg[i]] < 0) top[peg[i]] = i;  // smallest disc = top
        }
        for (int a = 0; a < 6; ++a) {
            int next = s;
            if (top[from[a]] >= 0 && (top[to[a]] < 0 || top[from[a]] < top[to[a]])) {
                int pw = 1;
                for (int i = 0; i < top[from[a]]; ++i) pw *= 3;
                next = s + (to[a] - from[a]) * pw;
            }
            double reward = (next != s && next == n - 1) ? 1.0 : 0.0;
            mdp.add_outcome(s, a, next, 1.0, reward);
        }
    }
    mdp.set_terminal(n - 1);
    mdp.add_initial(0);
    return mdp;
}

namespace {

// Integer rounding to nearest, halves away from zero. Keeps the segment
// discretization identical on every platform.
int round_div(int num, int den) {
    return num >= 0 ? (2 * num + den) / (2 * den) : -((-2 * num + den) / (2 * den));
}

}  // namespace

TabularMDP parse_track(const std::string& text, int v_max) {
    if (v_max < 1) throw MalformedTrack("velocity cap must be positive");
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) throw MalformedTrack("track is empty");
    const int rows = static_cast<int>(lines.size());
    const int cols = static_cast<int>(lines[0].size());
    if (cols == 0) throw MalformedTrack("line 1 is empty");

    std::vector<std::vector<int>> cell_id(rows, std::vector<int>(cols, -1));
    std::vector<std::pair<int, int>> coords;
    std::vector<int> starts;
    std::vector<char> finish;
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(lines[r].size()) != cols)
            throw MalformedTrack("line " + std::to_string(r + 1) + ": expected " +
                                 std::to_string(cols) + " columns, got " +
                                 std::to_string(lines[r].size()));
        for (int c = 0; c < cols; ++c) {
            char ch = lines[r][c];
            if (ch == '#') continue;
            if (ch != '.' && ch != 's' && ch != 'F')
                throw MalformedTrack(cell_ref(r, c) + ": unexpected character '" +
                                     std::string(1, ch) + "'");
            int id = static_cast<int>(coords.size());
            cell_id[r][c] = id;
            coords.emplace_back(r, c);
            finish.push_back(ch == 'F' ? 1 : 0);
            if (ch == 's') starts.push_back(id);
        }
    }
    if (coords.empty()) throw MalformedTrack("track has no drivable cells");
    if (starts.empty()) throw MalformedTrack("track has no start cells ('s')");
    if (std::find(finish.begin(), finish.end(), 1) == finish.end())
        throw MalformedTrack("track has no finish cells ('F')");

    const int span = 2 * v_max + 1;
    const int cells = static_cast<int>(coords.size());
    auto state_of = [&](int cell, int vr, int vc) {
        return cell * span * span + (vr + v_max) * span + (vc + v_max);
    };

    TabularMDP mdp(cells * span * span, 0.95);
    const double start_prob = 1.0 / static_cast<double>(starts.size());
    for (int cell = 0; cell < cells; ++cell) {
        auto [r, c] = coords[cell];
        for (int vr = -v_max; vr <= v_max; ++vr)
            for (int vc = -v_max; vc <= v_max; ++vc) {
                int s = state_of(cell, vr, vc);
                mdp.set_action_count(s, 9);
                for (int a = 0; a < 9; ++a) {
                    int nvr = std::clamp(vr + a / 3 - 1, -v_max, v_max);
                    int nvc = std::clamp(vc + a % 3 - 1, -v_max, v_max);
                    // Trace the straight segment one sampled cell at a time;
                    // the first finish or wall encountered decides the move.
                    int steps = std::max(std::abs(nvr), std::abs(nvc));
                    int land = cell;
                    bool crashed = false;
                    bool finished = false;
                    for (int t = 1; t <= steps; ++t) {
                        int rr = r + round_div(nvr * t, steps);
                        int cc = c + round_div(nvc * t, steps);
                        int at = (rr < 0 || rr >= rows || cc < 0 || cc >= cols)
                                     ? -1
                                     : cell_id[rr][cc];
                        if (at < 0) {
                            crashed = true;
                            break;
                        }
                        land = at;
                        if (finish[at]) {
                            finished = true;
                            break;
                        }
                    }
                    if (crashed) {
                        for (int st : starts)
                            mdp.add_outcome(s, a, state_of(st, 0, 0), start_prob, 0.0);
                    } else {
                        mdp.add_outcome(s, a, state_of(land, nvr, nvc), 1.0,
                                        finished ? 1.0 : 0.0);
                    }
                }
            }
        if (finish[cell])
            for (int v = 0; v < span * span; ++v) mdp.set_terminal(cell * span * span + v);
    }
    for (int st : starts) mdp.add_initial(state_of(st, 0, 0));
    return mdp;
}

TabularMDP race_track(const std::string& path, int v_max) {
    std::string file = path.empty() ? data_directory() + "/ltrack.track" : path;
    return parse_track(read_text_file(file), v_max);
}

TabularMDP parr_maze(const std::string& path) {
    std::string file = path.empty() ? data_directory() + "/parr_maze.map" : path;
    return load_grid(file);
}

TabularMDP random_ssp(int n, double density, std::uint64_t seed) {
    if (n < 2) throw Error("random_ssp: need at least two states");
    Rng gen(derive_seed(seed, stream::graph_gen, 0));
    Graph g = random_connected_graph(n, density, gen);
    Rng pick(derive_seed(seed, stream::initial_state, 0));
    int goal = static_cast<int>(pick.next_below(static_cast<std::uint32_t>(n)));
    int start = goal;
    while (start == goal)
        start = static_cast<int>(pick.next_below(static_cast<std::uint32_t>(n)));
    TabularMDP mdp = ssp_from_graph(g, goal, -1.0);
    mdp.add_initial(start);
    return mdp;
}

}  // namespace covop
