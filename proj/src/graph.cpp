#include "covop/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "covop/errors.hpp"

namespace covop {

Graph::Graph(int node_count) : n_(node_count), adj_(node_count), degree_(node_count, 0) {
    if (node_count <= 0) throw Error("graph needs at least one node");
}

Graph::Graph(int node_count, const std::vector<std::pair<int, int>>& edges)
    : Graph(node_count) {
    for (const auto& [u, v] : edges) add_edge(u, v);
}

void Graph::check_node(int u) const {
    if (u < 0 || u >= n_)
        throw Error("node index " + std::to_string(u) + " out of range [0, " +
                    std::to_string(n_) + ")");
}

const std::vector<int>& Graph::neighbors(int u) const {
    check_node(u);
    return adj_[u];
}

int Graph::degree(int u) const {
    check_node(u);
    return degree_[u];
}

bool Graph::has_edge(int u, int v) const {
    check_node(u);
    check_node(v);
    if (u == v) return false;
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

void Graph::add_edge(int u, int v) {
    check_node(u);
    check_node(v);
    if (u == v) throw Error("self-loop rejected at node " + std::to_string(u));
    if (has_edge(u, v)) throw Error("duplicate edge (" + std::to_string(u) + ", " +
                                    std::to_string(v) + ")");
    auto& au = adj_[u];
    au.insert(std::upper_bound(au.begin(), au.end(), v), v);
    auto& av = adj_[v];
    av.insert(std::upper_bound(av.begin(), av.end(), u), u);
    ++degree_[u];
    ++degree_[v];
    auto e = std::minmax(u, v);
    edges_.insert(std::upper_bound(edges_.begin(), edges_.end(),
                                   std::pair<int, int>(e.first, e.second)),
                  {e.first, e.second});
}

std::vector<int> Graph::component_ids() const {
    std::vector<int> id(n_, -1);
    int next = 0;
    std::deque<int> queue;
    for (int s = 0; s < n_; ++s) {
        if (id[s] != -1) continue;
        id[s] = next;
        queue.push_back(s);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int v : adj_[u]) {
                if (id[v] == -1) {
                    id[v] = next;
                    queue.push_back(v);
                }
            }
        }
        ++next;
    }
    return id;
}

bool Graph::connected() const {
    auto ids = component_ids();
    return std::all_of(ids.begin(), ids.end(), [](int c) { return c == 0; });
}

std::vector<int> Graph::bfs_distances(int source) const {
    check_node(source);
    std::vector<int> dist(n_, -1);
    dist[source] = 0;
    std::deque<int> queue{source};
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : adj_[u]) {
            if (dist[v] == -1) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

Graph read_edge_list(std::istream& in) {
    int n = 0, m = 0;
    if (!(in >> n >> m)) throw Error("edge list: failed to read header 'n m'");
    Graph g(n);
    for (int i = 0; i < m; ++i) {
        int u = 0, v = 0;
        if (!(in >> u >> v))
            throw Error("edge list: failed to read edge " + std::to_string(i));
        g.add_edge(u, v);
    }
    return g;
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << g.node_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list: " + path);
    return read_edge_list(in);
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write edge list: " + path);
    write_edge_list(g, out);
}

}  // namespace covop
