#include "eegraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace eegraph {

namespace {

constexpr double kJsdEps = 1e-9;

Eigen::VectorXd upper_triangle(const Eigen::MatrixXd& m) {
    const auto n = m.rows();
    Eigen::VectorXd v(n * (n - 1) / 2);
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) v(at++) = m(i, j);
    return v;
}

double mean_intra_lobe_weight(const Graph& g, const std::vector<int>& members) {
    if (members.size() < 2) return 0.0;
    double sum = 0.0;
    int pairs = 0;
    for (size_t a = 0; a < members.size(); ++a) {
        for (size_t b = a + 1; b < members.size(); ++b) {
            sum += g.weights(members[a], members[b]);
            ++pairs;
        }
    }
    return sum / pairs;
}

struct Counts {
    int tp = 0, fp = 0, tn = 0, fn = 0;
};

Counts classify(const std::vector<double>& scores, const std::vector<bool>& labels,
                double threshold, size_t from, size_t to) {
    Counts c;
    for (size_t w = from; w < to; ++w) {
        const bool predicted = scores[w] > threshold;
        if (predicted && labels[w]) ++c.tp;
        else if (predicted && !labels[w]) ++c.fp;
        else if (!predicted && labels[w]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double f1_of(const Counts& c) {
    if (c.tp == 0) return 0.0;
    const double precision = static_cast<double>(c.tp) / (c.tp + c.fp);
    const double recall = static_cast<double>(c.tp) / (c.tp + c.fn);
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

void GraphSeries::validate() const {
    if (graphs.empty()) throw std::invalid_argument("graph series is empty");
    const int n = graphs.front().size();
    for (const auto& g : graphs) {
        if (g.size() != n) throw std::invalid_argument("graph series has mixed sizes");
    }
}

double sparsity(const Graph& g) {
    const int n = g.size();
    if (n < 2) throw std::invalid_argument("sparsity needs at least 2 nodes");
    const int total = n * (n - 1) / 2;
    return 1.0 - static_cast<double>(g.edge_count()) / total;
}

double jsd(const Graph& g1, const Graph& g2) {
    if (g1.size() != g2.size()) throw std::invalid_argument("jsd: graphs differ in size");
    if (g1.size() < 2) throw std::invalid_argument("jsd needs at least 2 nodes");

    Eigen::ArrayXd p = upper_triangle(g1.weights).array() + kJsdEps;
    Eigen::ArrayXd q = upper_triangle(g2.weights).array() + kJsdEps;
    p /= p.sum();
    q /= q.sum();
    const Eigen::ArrayXd m = 0.5 * (p + q);

    // KL in bits; entries are strictly positive after smoothing.
    const double kl_pm = (p * (p / m).log()).sum() / std::numbers::ln2;
    const double kl_qm = (q * (q / m).log()).sum() / std::numbers::ln2;
    const double value = 0.5 * kl_pm + 0.5 * kl_qm;
    return std::clamp(value, 0.0, 1.0);
}

double mean_series_jsd(const GraphSeries& s) {
    s.validate();
    if (s.size() < 2) return 0.0;
    double sum = 0.0;
    for (int w = 0; w + 1 < s.size(); ++w)
        sum += jsd(s.graphs[static_cast<size_t>(w)], s.graphs[static_cast<size_t>(w + 1)]);
    return sum / (s.size() - 1);
}

double edge_difference(const GraphSeries& s1, const GraphSeries& s2) {
    s1.validate();
    s2.validate();
    if (s1.size() != s2.size()) throw std::invalid_argument("edge_difference: series lengths differ");
    if (s1.n_nodes() != s2.n_nodes()) throw std::invalid_argument("edge_difference: node counts differ");
    const int n = s1.n_nodes();
    const double total_pairs = n * (n - 1) / 2;
    double sum = 0.0;
    for (int w = 0; w < s1.size(); ++w) {
        const auto a = s1.graphs[static_cast<size_t>(w)].binarized();
        const auto b = s2.graphs[static_cast<size_t>(w)].binarized();
        int differing = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (a(i, j) != b(i, j)) ++differing;
        sum += differing / total_pairs;
    }
    return sum / s1.size();
}

Eigen::MatrixXd node_importance(const GraphSeries& s) {
    s.validate();
    const int n = s.n_nodes();
    Eigen::MatrixXd importance(s.size(), n);
    for (int w = 0; w < s.size(); ++w) {
        const Eigen::VectorXd degree = s.graphs[static_cast<size_t>(w)].weights.rowwise().sum();
        const double max_degree = degree.maxCoeff();
        if (max_degree > 0)
            importance.row(w) = (degree / max_degree).transpose();
        else
            importance.row(w).setZero();
    }
    return importance;
}

DetectionScore detection_proxy_score(const GraphSeries& s, const std::vector<bool>& seizure_labels,
                                     const Montage& montage, const std::vector<Lobe>& scheduled_lobes,
                                     double train_fraction) {
    s.validate();
    if (seizure_labels.size() != static_cast<size_t>(s.size()))
        throw std::invalid_argument("detection proxy: label count does not match series length");
    if (s.n_nodes() != montage.size())
        throw std::invalid_argument("detection proxy: montage does not match graphs");
    if (scheduled_lobes.empty())
        throw std::invalid_argument("detection proxy: no scheduled lobes");
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::invalid_argument("detection proxy: train fraction must lie in (0,1)");

    std::vector<std::vector<int>> lobe_members;
    for (const auto lobe : scheduled_lobes) lobe_members.push_back(montage.channels_in_lobe(lobe));

    std::vector<double> scores(static_cast<size_t>(s.size()));
    for (int w = 0; w < s.size(); ++w) {
        double best = 0.0;
        for (const auto& members : lobe_members)
            best = std::max(best, mean_intra_lobe_weight(s.graphs[static_cast<size_t>(w)], members));
        scores[static_cast<size_t>(w)] = best;
    }

    const auto split = static_cast<size_t>(std::llround(train_fraction * s.size()));
    if (split == 0 || split >= static_cast<size_t>(s.size()))
        throw std::invalid_argument("detection proxy: series too short for the split");

    // Candidate thresholds: midpoints between adjacent distinct train scores,
    // plus sentinels below/above everything.
    std::set<double> unique(scores.begin(), scores.begin() + static_cast<long>(split));
    std::vector<double> candidates{*unique.begin() - 1.0};
    for (auto it = unique.begin(); std::next(it) != unique.end(); ++it)
        candidates.push_back(0.5 * (*it + *std::next(it)));
    candidates.push_back(*unique.rbegin() + 1.0);

    double best_threshold = candidates.front();
    double best_f1 = -1.0;
    for (const double t : candidates) {
        const double f1 = f1_of(classify(scores, seizure_labels, t, 0, split));
        if (f1 > best_f1) {
            best_f1 = f1;
            best_threshold = t;
        }
    }

    const Counts c = classify(scores, seizure_labels, best_threshold, split, scores.size());
    DetectionScore out;
    out.threshold = best_threshold;
    out.f1 = f1_of(c);
    out.accuracy = static_cast<double>(c.tp + c.tn) / (c.tp + c.tn + c.fp + c.fn);
    out.recall = (c.tp + c.fn) == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fn);
    out.precision = (c.tp + c.fp) == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
    return out;
}

double auc(const std::vector<double>& scores, const std::vector<char>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw std::invalid_argument("auc: scores and labels must be equal-sized and non-empty");
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    size_t n_pos = 0;
    size_t at = 0;
    while (at < order.size()) {
        size_t end = at;
        while (end < order.size() && scores[order[end]] == scores[order[at]]) ++end;
        const double avg_rank = 0.5 * (static_cast<double>(at + 1) + static_cast<double>(end));
        for (size_t k = at; k < end; ++k) {
            if (labels[order[k]]) {
                rank_sum_pos += avg_rank;
                ++n_pos;
            }
        }
        at = end;
    }
    const size_t n_neg = scores.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc: needs both classes present");
    return (rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0) /
           (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace eegraph
