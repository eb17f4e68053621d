#include "eegraph/graph.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace eegraph {

namespace {

void check_square_symmetric(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": matrix not square");
    if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m(i, i) != 0.0) throw std::invalid_argument(std::string(what) + ": nonzero diagonal");
        for (Eigen::Index j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i))
                throw std::invalid_argument(std::string(what) + ": matrix not symmetric");
    }
}

}  // namespace

void ProbGraph::validate() const {
    check_square_symmetric(probs, "ProbGraph");
    if ((probs.array() < 0.0).any() || (probs.array() > 1.0).any())
        throw std::invalid_argument("ProbGraph: probabilities outside [0,1]");
}

void Graph::validate() const { check_square_symmetric(weights, "Graph"); }

int Graph::edge_count() const {
    int count = 0;
    for (Eigen::Index i = 0; i < weights.rows(); ++i)
        for (Eigen::Index j = i + 1; j < weights.cols(); ++j)
            if (weights(i, j) > 0.0) ++count;
    return count;
}

Eigen::MatrixXd Graph::binarized() const {
    return (weights.array() > 0.0).cast<double>();
}

Graph threshold_edges(const ProbGraph& p, double phi) {
    if (phi < 0.0 || phi > 1.0) throw std::invalid_argument("threshold phi must lie in [0,1]");
    p.validate();
    Graph g;
    g.window_index = p.window_index;
    g.weights = (p.probs.array() > phi).select(p.probs, 0.0);
    return g;
}

std::string graph_to_json(const Graph& g, const std::vector<std::string>& labels, double phi) {
    if (static_cast<int>(labels.size()) != g.size())
        throw std::invalid_argument("graph_to_json: label count does not match graph size");
    nlohmann::ordered_json j;
    j["n"] = g.size();
    j["labels"] = labels;
    j["phi"] = phi;
    auto edges = nlohmann::ordered_json::array();
    for (int i = 0; i < g.size(); ++i) {
        for (int k = i + 1; k < g.size(); ++k) {
            if (g.weights(i, k) > 0.0)
                edges.push_back({{"i", i}, {"j", k}, {"w", g.weights(i, k)}});
        }
    }
    j["edges"] = std::move(edges);
    return j.dump(2);
}

Graph graph_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    const int n = j.at("n").get<int>();
    if (n < 1) throw std::invalid_argument("graph JSON: n must be >= 1");
    Graph g;
    g.weights = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : j.at("edges")) {
        const int i = e.at("i").get<int>();
        const int k = e.at("j").get<int>();
        const double w = e.at("w").get<double>();
        if (i < 0 || k < 0 || i >= n || k >= n || i == k)
            throw std::invalid_argument("graph JSON: bad edge indices");
        g.weights(i, k) = g.weights(k, i) = w;
    }
    g.validate();
    return g;
}

}  // namespace eegraph
