#include <doctest.h>

#include <random>

#include "eegraph/metrics.hpp"

using namespace eegraph;

namespace {

Graph graph_of(int n, std::initializer_list<std::tuple<int, int, double>> edges) {
    Graph g;
    g.weights = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j, w] : edges) g.weights(i, j) = g.weights(j, i) = w;
    return g;
}

Graph random_graph(int n, double density, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Graph g;
    g.weights = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < density) g.weights(i, j) = g.weights(j, i) = u(rng);
    return g;
}

GraphSeries series_of(std::vector<Graph> graphs, const std::string& id = "s") {
    GraphSeries s;
    s.graphs = std::move(graphs);
    s.judge_id = id;
    return s;
}

}  // namespace

TEST_CASE("sparsity of empty, complete, and the 57-edge case") {
    Graph empty;
    empty.weights = Eigen::MatrixXd::Zero(19, 19);
    CHECK(sparsity(empty) == 1.0);

    Graph complete;
    complete.weights = Eigen::MatrixXd::Ones(19, 19);
    complete.weights.diagonal().setZero();
    CHECK(sparsity(complete) == 0.0);

    std::mt19937_64 rng(3);
    Graph g;
    g.weights = Eigen::MatrixXd::Zero(19, 19);
    int placed = 0;
    std::uniform_int_distribution<int> pick(0, 18);
    while (placed < 57) {
        const int i = pick(rng), j = pick(rng);
        if (i != j && g.weights(i, j) == 0) {
            g.weights(i, j) = g.weights(j, i) = 0.5;
            ++placed;
        }
    }
    CHECK(sparsity(g) == doctest::Approx(1.0 - 57.0 / 171.0).epsilon(1e-12));
    CHECK(sparsity(g) == doctest::Approx(0.6667).epsilon(1e-3));

    Graph too_small;
    too_small.weights = Eigen::MatrixXd::Zero(1, 1);
    CHECK_THROWS(sparsity(too_small));
}

TEST_CASE("jsd basics: identity, symmetry, disjoint support") {
    std::mt19937_64 rng(5);
    const Graph a = random_graph(6, 0.5, rng);
    const Graph b = random_graph(6, 0.5, rng);
    CHECK(jsd(a, a) == 0.0);
    CHECK(jsd(a, b) == jsd(b, a));
    CHECK(jsd(a, b) >= 0.0);
    CHECK(jsd(a, b) <= 1.0);

    // 3-node graphs with upper triangles (1,0,0) and (0,1,0): disjoint support
    const Graph g1 = graph_of(3, {{0, 1, 1.0}});
    const Graph g2 = graph_of(3, {{0, 2, 1.0}});
    CHECK(jsd(g1, g2) == doctest::Approx(1.0).epsilon(1e-6));

    Graph mismatched;
    mismatched.weights = Eigen::MatrixXd::Zero(4, 4);
    CHECK_THROWS(jsd(g1, mismatched));
}

TEST_CASE("mean series jsd averages consecutive pairs") {
    std::mt19937_64 rng(8);
    const Graph a = random_graph(5, 0.6, rng);
    const Graph b = random_graph(5, 0.6, rng);
    const Graph c = random_graph(5, 0.6, rng);
    const Graph d = random_graph(5, 0.6, rng);

    CHECK(mean_series_jsd(series_of({a, a, a})) == 0.0);
    CHECK(mean_series_jsd(series_of({a})) == 0.0);
    CHECK(mean_series_jsd(series_of({a, b})) == jsd(a, b));
    const double expected = (jsd(a, b) + jsd(b, c) + jsd(c, d)) / 3.0;
    CHECK(mean_series_jsd(series_of({a, b, c, d})) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("edge difference: identity, extremes, crafted count") {
    Graph empty;
    empty.weights = Eigen::MatrixXd::Zero(19, 19);
    Graph complete;
    complete.weights = Eigen::MatrixXd::Ones(19, 19);
    complete.weights.diagonal().setZero();

    CHECK(edge_difference(series_of({empty, empty}), series_of({empty, empty})) == 0.0);
    CHECK(edge_difference(series_of({complete}), series_of({empty})) == 1.0);

    // two graphs differing in exactly 17 of 171 pairs
    std::mt19937_64 rng(11);
    const Graph base = random_graph(19, 0.4, rng);
    Graph flipped = base;
    int flips = 0;
    for (int i = 0; i < 19 && flips < 17; ++i)
        for (int j = i + 1; j < 19 && flips < 17; ++j) {
            if (flipped.weights(i, j) > 0)
                flipped.weights(i, j) = flipped.weights(j, i) = 0.0;
            else
                flipped.weights(i, j) = flipped.weights(j, i) = 0.9;
            ++flips;
        }
    CHECK(edge_difference(series_of({base}), series_of({flipped})) ==
          doctest::Approx(17.0 / 171.0).epsilon(1e-12));
}

TEST_CASE("edge difference is a pseudometric over random series") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = series_of({random_graph(7, 0.4, rng), random_graph(7, 0.4, rng)});
        const auto b = series_of({random_graph(7, 0.4, rng), random_graph(7, 0.4, rng)});
        const auto c = series_of({random_graph(7, 0.4, rng), random_graph(7, 0.4, rng)});
        CHECK(edge_difference(a, a) == 0.0);
        CHECK(edge_difference(a, b) == edge_difference(b, a));
        CHECK(edge_difference(a, c) <= edge_difference(a, b) + edge_difference(b, c) + 1e-12);
    }
}

TEST_CASE("node importance: isolated zero, star center one, rows bounded") {
    // star on node 2
    Graph star = graph_of(5, {{2, 0, 0.5}, {2, 1, 0.7}, {2, 3, 0.2}, {2, 4, 0.9}});
    Graph empty;
    empty.weights = Eigen::MatrixXd::Zero(5, 5);
    const Eigen::MatrixXd importance = node_importance(series_of({star, empty}));
    CHECK(importance(0, 2) == 1.0);  // center of the star
    CHECK(importance.row(0).maxCoeff() == 1.0);
    CHECK(importance.row(1).maxCoeff() == 0.0);  // all-zero window stays zero
    CHECK((importance.array() >= 0.0).all());
    CHECK((importance.array() <= 1.0).all());

    // an isolated node scores zero
    Graph with_isolated = graph_of(4, {{0, 1, 0.8}});
    CHECK(node_importance(series_of({with_isolated}))(0, 3) == 0.0);
}

TEST_CASE("refinement never decreases sparsity") {
    std::mt19937_64 rng(17);
    const Graph initial = random_graph(10, 0.5, rng);
    Graph pruned = initial;
    for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j)
            if (pruned.weights(i, j) > 0 && ((i + j) % 3 == 0))
                pruned.weights(i, j) = pruned.weights(j, i) = 0.0;
    CHECK(sparsity(pruned) >= sparsity(initial));
}

TEST_CASE("detection proxy separates a separable series and degenerates to zero") {
    const Montage& m = standard_montage();
    const auto frontal = m.channels_in_lobe(Lobe::Frontal);
    Graph quiet;
    quiet.weights = Eigen::MatrixXd::Zero(19, 19);
    Graph active = quiet;
    for (size_t a = 0; a < frontal.size(); ++a)
        for (size_t b = a + 1; b < frontal.size(); ++b)
            active.weights(frontal[a], frontal[b]) = active.weights(frontal[b], frontal[a]) = 0.9;

    std::vector<Graph> graphs;
    std::vector<bool> labels;
    for (int w = 0; w < 20; ++w) {
        const bool seizure = (w % 4 == 0);
        graphs.push_back(seizure ? active : quiet);
        labels.push_back(seizure);
    }
    const DetectionScore score =
        detection_proxy_score(series_of(std::move(graphs)), labels, m, {Lobe::Frontal}, 0.7);
    CHECK(score.f1 == 1.0);
    CHECK(score.accuracy == 1.0);
    CHECK(score.recall == 1.0);

    // all-negative labels with empty graphs: degenerate F1 is 0
    std::vector<Graph> empties(10, quiet);
    const DetectionScore degenerate = detection_proxy_score(
        series_of(std::move(empties)), std::vector<bool>(10, false), m, {Lobe::Frontal}, 0.7);
    CHECK(degenerate.f1 == 0.0);
}

TEST_CASE("auc handles perfect, inverted, and tied rankings") {
    CHECK(auc({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}) == 1.0);
    CHECK(auc({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1}) == 0.0);
    CHECK(auc({0.5, 0.5, 0.5, 0.5}, {0, 1, 0, 1}) == 0.5);
    CHECK(auc({0.1, 0.5, 0.5, 0.9}, {0, 0, 1, 1}) == doctest::Approx(0.875));
    CHECK_THROWS(auc({0.1, 0.2}, {1, 1}));
}
