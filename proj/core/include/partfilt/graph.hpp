#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "partfilt/errors.hpp"

namespace pf {

/// Undirected, unweighted graph with optional node features and labels.
/// Edges are stored once with u < v; self-loops are stripped at ingestion
/// unless explicitly kept.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::optional<Eigen::MatrixXd> features;  // n x d
    std::optional<std::vector<int>> labels;   // class ids in [0, c)
    int num_classes = 0;

    int num_edges() const { return static_cast<int>(edges.size()); }

    /// Validates the invariants; throws on violation.
    void validate() const;

    /// Degree of every node.
    std::vector<int> degrees() const;

    /// Adjacency lists (sorted neighbor ids).
    std::vector<std::vector<int>> adjacency() const;

    /// Connected component id per node (ids ordered by smallest member).
    std::vector<int> components(int* count = nullptr) const;
};

struct LoadOptions {
    bool keep_self_loops = false;
};

/// Builds a graph from an edge list, normalizing orientation and
/// collapsing duplicates. n = max id + 1 unless declared larger.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges,
                 const LoadOptions& opts = {});

/// Reads the "u v" per-line edge-list format. An optional first line
/// "#n <N>" declares the node count.
Graph load_edge_list(const std::string& path, const LoadOptions& opts = {});

/// Attaches features from a text matrix or "PFLT" binary file.
void load_features(Graph& g, const std::string& path);

/// Attaches labels, one integer per line.
void load_labels(Graph& g, const std::string& path);

Graph load_graph(const std::string& edge_path,
                 const std::string& feature_path = "",
                 const std::string& label_path = "",
                 const LoadOptions& opts = {});

void save_edge_list(const Graph& g, const std::string& path);
void save_features_text(const Graph& g, const std::string& path);
void save_features_binary(const Graph& g, const std::string& path);
void save_labels(const Graph& g, const std::string& path);

/// Fraction of undirected edges whose endpoints share a label.
double edge_homophily(const Graph& g);

}  // namespace pf
