#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace covop {

// Undirected, unweighted graph over densely indexed nodes. Adjacency lists
// plus a degree array; edges are stored once as (min, max) pairs. No
// self-loops, no duplicate edges.
class Graph {
  public:
    explicit Graph(int node_count);
    Graph(int node_count, const std::vector<std::pair<int, int>>& edges);

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    // Sorted list of canonical (u < v) edges.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    const std::vector<int>& neighbors(int u) const;
    int degree(int u) const;

    bool has_edge(int u, int v) const;
    void add_edge(int u, int v);  // throws on self-loop / duplicate

    bool connected() const;
    // Component id per node, ids numbered from 0 in order of first appearance.
    std::vector<int> component_ids() const;

    // BFS hop distances from `source` (-1 where unreachable).
    std::vector<int> bfs_distances(int source) const;

    bool is_complete() const {
        return static_cast<long>(edge_count()) * 2 == static_cast<long>(n_) * (n_ - 1);
    }

  private:
    void check_node(int u) const;

    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;  // each list kept sorted ascending
    std::vector<int> degree_;
};

// Text edge-list format: first line "n m", then m lines "u v" (0-based).
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);
Graph load_edge_list(const std::string& path);
void save_edge_list(const Graph& g, const std::string& path);

}  // namespace covop
