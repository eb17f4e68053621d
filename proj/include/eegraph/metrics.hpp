#pragma once

#include <string>
#include <vector>

#include "eegraph/graph.hpp"
#include "eegraph/montage.hpp"

namespace eegraph {

/// Per-window graphs from one source (a judge or a Stage-1/baseline builder).
struct GraphSeries {
    std::vector<Graph> graphs;
    std::string judge_id;

    void validate() const;  // non-empty, consistent sizes
    int size() const { return static_cast<int>(graphs.size()); }
    int n_nodes() const { return graphs.empty() ? 0 : graphs.front().size(); }
};

/// Fraction of absent unordered pairs: 1 - |edges| / (n(n-1)/2).
double sparsity(const Graph& g);

/// Base-2 Jensen-Shannon divergence between the two graphs' edge-weight
/// distributions (upper triangles, epsilon-smoothed with 1e-9, normalized).
/// Always in [0,1]; 0 iff the smoothed distributions coincide.
double jsd(const Graph& g1, const Graph& g2);

/// Mean JSD over consecutive window pairs; 0 for a single-graph series.
double mean_series_jsd(const GraphSeries& s);

/// Mean over windows of the normalized Hamming distance between binarized
/// adjacencies (differing unordered pairs / total unordered pairs).
double edge_difference(const GraphSeries& s1, const GraphSeries& s2);

/// Per-window weighted degree, normalized by that window's maximum
/// (rows = windows, all zeros for an empty window graph).
Eigen::MatrixXd node_importance(const GraphSeries& s);

struct DetectionScore {
    double f1 = 0.0;
    double accuracy = 0.0;
    double recall = 0.0;
    double precision = 0.0;
    double threshold = 0.0;
};

/// Seizure-detection stand-in for a downstream backbone: a window scores
/// max-over-scheduled-lobes of the mean intra-lobe edge weight; the decision
/// threshold is fitted for F1 on the first train_fraction of windows
/// (temporal split) and evaluated on the rest. Degenerate F1 (no predicted or
/// no true positives) is 0. Intended only for relative comparisons between
/// graph sources.
DetectionScore detection_proxy_score(const GraphSeries& s, const std::vector<bool>& seizure_labels,
                                     const Montage& montage, const std::vector<Lobe>& scheduled_lobes,
                                     double train_fraction = 0.7);

/// Rank-based ROC AUC with average ranks on ties; throws when either class is
/// empty.
double auc(const std::vector<double>& scores, const std::vector<char>& labels);

}  // namespace eegraph
