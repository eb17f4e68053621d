#pragma once

#include "eegraph/graph.hpp"
#include "eegraph/window.hpp"

namespace eegraph {

/// Pearson correlation; defined as 0 when either side has zero variance.
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// |Pearson r| matrix of all channel pairs, zero diagonal.
Eigen::MatrixXd abs_correlation_matrix(const EegWindow& window);

/// Edge weight |r(i,j)| when strictly above phi, else 0.
Graph correlation_graph(const EegWindow& window, double phi);

/// Edge weight 1 - d(i,j)/max_d when d(i,j) < phi_dist, else 0. The same
/// graph for every window of a montage.
Graph distance_graph(const Montage& montage, double phi_dist);

/// Directed k-nearest-neighbour graph under |Pearson r| similarity,
/// symmetrized by union; edge weights are the similarities. Requires
/// 1 <= k <= n-1.
Graph knn_graph(const EegWindow& window, int k);

}  // namespace eegraph
