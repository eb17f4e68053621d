#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace eegraph {

/// Symmetric edge-probability matrix with zero diagonal, entries in [0,1].
struct ProbGraph {
    Eigen::MatrixXd probs;
    int window_index = 0;

    int size() const { return static_cast<int>(probs.rows()); }
    void validate() const;  // throws std::invalid_argument on violations
};

/// Thresholded graph: entries are retained probabilities (or correlation
/// weights for the baselines) or exactly 0; symmetric, zero diagonal.
struct Graph {
    Eigen::MatrixXd weights;
    int window_index = 0;

    int size() const { return static_cast<int>(weights.rows()); }
    int edge_count() const;                  // unordered pairs with weight > 0
    Eigen::MatrixXd binarized() const;       // 0/1 view for metrics that need it
    void validate() const;
};

/// Eq.-style strict thresholding: weight p is kept iff p > phi.
/// Throws when phi lies outside [0,1].
Graph threshold_edges(const ProbGraph& p, double phi);

/// Canonical JSON form {n, labels[], phi, edges:[{i,j,w}]} with i < j and
/// edges sorted by (i, j), for byte-stable diffs.
std::string graph_to_json(const Graph& g, const std::vector<std::string>& labels, double phi);
Graph graph_from_json(const std::string& json_text);

}  // namespace eegraph
