#include "partfilt/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

namespace pf {

void Graph::validate() const {
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw IndexError("edge endpoint out of range: (" +
                             std::to_string(u) + ", " + std::to_string(v) +
                             ") with n=" + std::to_string(n));
    }
    if (features && features->rows() != n)
        throw ShapeError("feature row count " +
                         std::to_string(features->rows()) +
                         " != node count " + std::to_string(n));
    if (labels) {
        if (static_cast<int>(labels->size()) != n)
            throw ShapeError("label count != node count");
        for (int y : *labels)
            if (y < 0 || y >= num_classes)
                throw IndexError("label id " + std::to_string(y) +
                                 " outside [0, " + std::to_string(num_classes) +
                                 ")");
    }
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(n, 0);
    for (const auto& [u, v] : edges) {
        ++deg[u];
        if (u != v) ++deg[v];
    }
    return deg;
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        if (u != v) adj[v].push_back(u);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

std::vector<int> Graph::components(int* count) const {
    auto adj = adjacency();
    std::vector<int> comp(n, -1);
    int next = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : adj[u])
                if (comp[w] < 0) {
                    comp[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    if (count) *count = next;
    return comp;
}

Graph make_graph(int n, std::vector<std::pair<int, int>> edges,
                 const LoadOptions& opts) {
    Graph g;
    g.n = n;
    for (auto& [u, v] : edges) {
        if (u == v && !opts.keep_self_loops) continue;
        if (u > v) std::swap(u, v);
        g.edges.emplace_back(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    g.validate();
    return g;
}

Graph load_edge_list(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list: " + path);
    std::vector<std::pair<int, int>> edges;
    int declared_n = -1;
    int max_id = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            if (ls >> key && key == "n") {
                if (!(ls >> declared_n) || declared_n < 0)
                    throw ParseError(path + ":" + std::to_string(lineno) +
                                     ": malformed #n declaration");
            }
            continue;
        }
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u >> v))
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected 'u v' pair");
        std::string extra;
        if (ls >> extra)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": trailing token '" + extra + "'");
        if (u < 0 || v < 0)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": negative node id");
        edges.emplace_back(u, v);
        max_id = std::max({max_id, u, v});
    }
    const int n = declared_n >= 0 ? declared_n : max_id + 1;
    if (max_id >= n)
        throw IndexError(path + ": node id " + std::to_string(max_id) +
                         " >= declared n " + std::to_string(n));
    return make_graph(n, std::move(edges), opts);
}

namespace {

constexpr char kFeatureMagic[4] = {'P', 'F', 'L', 'T'};

bool looks_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    const bool bin = in.gcount() == 4 && std::memcmp(magic, kFeatureMagic, 4) == 0;
    in.seekg(0);
    return bin;
}

Eigen::MatrixXd read_features_binary(std::istream& in, const std::string& path) {
    char magic[4];
    in.read(magic, 4);
    std::uint64_t n = 0, d = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&d), 8);
    if (!in) throw ParseError(path + ": truncated PFLT header");
    Eigen::MatrixXd x(static_cast<int>(n), static_cast<int>(d));
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < d; ++j) {
            double v;
            in.read(reinterpret_cast<char*>(&v), 8);
            if (!in) throw ParseError(path + ": truncated PFLT payload");
            x(static_cast<int>(i), static_cast<int>(j)) = v;
        }
    return x;
}

Eigen::MatrixXd read_features_text(std::istream& in, const std::string& path) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof())
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": non-numeric token");
        if (!rows.empty() && row.size() != rows.front().size())
            throw ShapeError(path + ":" + std::to_string(lineno) +
                             ": ragged feature row");
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    const int d = n > 0 ? static_cast<int>(rows.front().size()) : 0;
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = rows[i][j];
    return x;
}

}  // namespace

void load_features(Graph& g, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open features: " + path);
    Eigen::MatrixXd x = looks_binary(in) ? read_features_binary(in, path)
                                         : read_features_text(in, path);
    if (x.rows() != g.n)
        throw ShapeError(path + ": " + std::to_string(x.rows()) +
                         " feature rows for " + std::to_string(g.n) + " nodes");
    g.features = std::move(x);
}

void load_labels(Graph& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open labels: " + path);
    std::vector<int> labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        int y;
        if (!(ls >> y) || y < 0)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected non-negative integer label");
        labels.push_back(y);
    }
    if (static_cast<int>(labels.size()) != g.n)
        throw ShapeError(path + ": " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(g.n) + " nodes");
    g.num_classes = labels.empty()
                        ? 0
                        : *std::max_element(labels.begin(), labels.end()) + 1;
    g.labels = std::move(labels);
}

Graph load_graph(const std::string& edge_path, const std::string& feature_path,
                 const std::string& label_path, const LoadOptions& opts) {
    Graph g = load_edge_list(edge_path, opts);
    if (!feature_path.empty()) load_features(g, feature_path);
    if (!label_path.empty()) load_labels(g, label_path);
    g.validate();
    return g;
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write edge list: " + path);
    out << "#n " << g.n << "\n";
    for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
}

void save_features_text(const Graph& g, const std::string& path) {
    if (!g.features) throw ArgumentError("graph has no features");
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write features: " + path);
    out.precision(17);
    const auto& x = *g.features;
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j)
            out << (j ? " " : "") << x(i, j);
        out << "\n";
    }
}

void save_features_binary(const Graph& g, const std::string& path) {
    if (!g.features) throw ArgumentError("graph has no features");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write features: " + path);
    out.write(kFeatureMagic, 4);
    const std::uint64_t n = g.features->rows(), d = g.features->cols();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&d), 8);
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < d; ++j) {
            const double v = (*g.features)(static_cast<int>(i),
                                           static_cast<int>(j));
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
}

void save_labels(const Graph& g, const std::string& path) {
    if (!g.labels) throw ArgumentError("graph has no labels");
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write labels: " + path);
    for (int y : *g.labels) out << y << "\n";
}

double edge_homophily(const Graph& g) {
    if (!g.labels) throw ArgumentError("edge_homophily requires labels");
    if (g.edges.empty()) return 0.0;
    int same = 0;
    for (const auto& [u, v] : g.edges)
        if ((*g.labels)[u] == (*g.labels)[v]) ++same;
    return static_cast<double>(same) / static_cast<double>(g.edges.size());
}

}  // namespace pf
