#include "eegraph/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace eegraph {

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson: need two equal-length series of >= 2 samples");
    const double mx = x.mean();
    const double my = y.mean();
    const Eigen::ArrayXd dx = x.array() - mx;
    const Eigen::ArrayXd dy = y.array() - my;
    const double var_x = dx.square().sum();
    const double var_y = dy.square().sum();
    if (var_x == 0.0 || var_y == 0.0) return 0.0;
    const double r = (dx * dy).sum() / std::sqrt(var_x * var_y);
    return std::clamp(r, -1.0, 1.0);
}

Eigen::MatrixXd abs_correlation_matrix(const EegWindow& window) {
    const int n = window.n_channels();
    Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double r = std::abs(pearson(window.channel(i), window.channel(j)));
            sim(i, j) = sim(j, i) = r;
        }
    }
    return sim;
}

Graph correlation_graph(const EegWindow& window, double phi) {
    if (phi < 0.0 || phi > 1.0) throw std::invalid_argument("correlation_graph: phi outside [0,1]");
    const Eigen::MatrixXd sim = abs_correlation_matrix(window);
    Graph g;
    g.window_index = window.window_index();
    g.weights = (sim.array() > phi).select(sim, 0.0);
    return g;
}

Graph distance_graph(const Montage& montage, double phi_dist) {
    if (phi_dist < 0.0) throw std::invalid_argument("distance_graph: phi_dist must be >= 0");
    const Eigen::MatrixXd& d = montage.distances();
    // Normalize by the head-sphere diameter, not the montage maximum: the
    // farthest electrode pair must still carry a positive weight.
    const double max_d = 2.0;
    const int n = montage.size();
    Graph g;
    g.weights = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (d(i, j) < phi_dist)
                g.weights(i, j) = g.weights(j, i) = 1.0 - d(i, j) / max_d;
    return g;
}

Graph knn_graph(const EegWindow& window, int k) {
    const int n = window.n_channels();
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("knn_graph: k must lie in [1, n-1]");
    const Eigen::MatrixXd sim = abs_correlation_matrix(window);

    Graph g;
    g.window_index = window.window_index();
    g.weights = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> others;
        others.reserve(static_cast<size_t>(n - 1));
        for (int j = 0; j < n; ++j)
            if (j != i) others.push_back(j);
        // ties broken toward the lower channel index
        std::stable_sort(others.begin(), others.end(),
                         [&](int a, int b) { return sim(i, a) > sim(i, b); });
        for (int m = 0; m < k; ++m) {
            const int j = others[static_cast<size_t>(m)];
            g.weights(i, j) = g.weights(j, i) = sim(i, j);  // union symmetrization
        }
    }
    return g;
}

}  // namespace eegraph
