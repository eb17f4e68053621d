#include "eegraph/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace eegraph {

namespace {

constexpr double kProbClamp = 1e-12;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct HeadPass {
    Eigen::VectorXd z, pre, act;
    double prob = 0.0;
};

HeadPass head_forward(const Eigen::VectorXd& h_a, const Eigen::VectorXd& h_b,
                      const MlpHead& head) {
    HeadPass pass;
    pass.z.resize(h_a.size() + h_b.size());
    pass.z << h_a, h_b;
    pass.pre = head.w1 * pass.z + head.b1;
    pass.act = pass.pre.cwiseMax(0.0);
    pass.prob = sigmoid(head.w2.dot(pass.act) + head.b2);
    return pass;
}

// Backprop d(loss)/d(pre-sigmoid) through one orientation; returns dz.
Eigen::VectorXd head_backward(const HeadPass& pass, double d_logit, const MlpHead& head,
                              MlpHead* grads) {
    const Eigen::VectorXd d_act = d_logit * head.w2;
    const Eigen::VectorXd d_pre =
        (pass.pre.array() > 0.0).select(d_act, Eigen::VectorXd::Zero(d_act.size()));
    if (grads) {
        grads->w2 += d_logit * pass.act;
        grads->b2 += d_logit;
        grads->w1 += d_pre * pass.z.transpose();
        grads->b1 += d_pre;
    }
    return head.w1.transpose() * d_pre;
}

struct WindowContribution {
    double loss_sum = 0.0;
    int pair_count = 0;
    EncoderWeights encoder_grads;
    MlpHead head_grads;
};

}  // namespace

MlpHead MlpHead::seeded_init(int d_model, int hidden, std::uint64_t seed) {
    if (d_model < 1 || hidden < 1) throw std::invalid_argument("MlpHead: sizes must be positive");
    MlpHead head;
    std::mt19937_64 rng(seed);
    auto fill = [&rng](auto& m, int fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
    };
    head.w1.resize(hidden, 2 * d_model);
    head.b1.resize(hidden);
    head.w2.resize(hidden);
    fill(head.w1, 2 * d_model);
    fill(head.b1, 2 * d_model);
    fill(head.w2, hidden);
    std::uniform_real_distribution<double> dist(-1.0 / std::sqrt(static_cast<double>(hidden)),
                                                1.0 / std::sqrt(static_cast<double>(hidden)));
    head.b2 = dist(rng);
    return head;
}

MlpHead MlpHead::zeros(int d_model, int hidden) {
    MlpHead head;
    head.w1 = Eigen::MatrixXd::Zero(hidden, 2 * d_model);
    head.b1 = Eigen::VectorXd::Zero(hidden);
    head.w2 = Eigen::VectorXd::Zero(hidden);
    head.b2 = 0.0;
    return head;
}

void MlpHead::validate() const {
    if (w1.rows() != b1.size() || w1.rows() != w2.size() || w1.cols() % 2 != 0)
        throw std::invalid_argument("MlpHead: inconsistent shapes");
    if (!w1.allFinite() || !b1.allFinite() || !w2.allFinite() || !std::isfinite(b2))
        throw std::invalid_argument("MlpHead: non-finite parameters");
}

double predict_edge_prob(const Eigen::VectorXd& h_i, const Eigen::VectorXd& h_j,
                         const MlpHead& head) {
    if (h_i.size() + h_j.size() != head.input_dim())
        throw std::invalid_argument("predict_edge_prob: embedding size does not match head input");
    return head_forward(h_i, h_j, head).prob;
}

double symmetric_edge_prob(const Eigen::VectorXd& h_i, const Eigen::VectorXd& h_j,
                           const MlpHead& head) {
    return 0.5 * (predict_edge_prob(h_i, h_j, head) + predict_edge_prob(h_j, h_i, head));
}

double window_loss_and_grad(const EegWindow& window, const Eigen::MatrixXd& label,
                            const EncoderConfig& cfg, const EncoderWeights& encoder,
                            const MlpHead& head, EncoderWeights* encoder_grads,
                            MlpHead* head_grads) {
    const int n = window.n_channels();
    if (label.rows() != n || label.cols() != n)
        throw std::invalid_argument("supervision graph size does not match window channels");

    std::vector<EncoderCache> caches;
    caches.reserve(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) caches.push_back(encode_forward(window.channel(c), cfg, encoder));

    RowMat d_embed = RowMat::Zero(n, cfg.d_model);
    double loss_sum = 0.0;

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto& h_i = caches[static_cast<size_t>(i)].pooled;
            const auto& h_j = caches[static_cast<size_t>(j)].pooled;
            const HeadPass fwd = head_forward(h_i, h_j, head);
            const HeadPass rev = head_forward(h_j, h_i, head);
            const double p = std::clamp(0.5 * (fwd.prob + rev.prob), kProbClamp, 1.0 - kProbClamp);
            const double y = label(i, j);
            loss_sum += -(y * std::log(p) + (1.0 - y) * std::log1p(-p));

            if (encoder_grads || head_grads) {
                const double d_p = (p - y) / (p * (1.0 - p));
                const double d_logit_fwd = 0.5 * d_p * fwd.prob * (1.0 - fwd.prob);
                const double d_logit_rev = 0.5 * d_p * rev.prob * (1.0 - rev.prob);
                const Eigen::VectorXd dz_fwd = head_backward(fwd, d_logit_fwd, head, head_grads);
                const Eigen::VectorXd dz_rev = head_backward(rev, d_logit_rev, head, head_grads);
                const int d = cfg.d_model;
                d_embed.row(i) += (dz_fwd.head(d) + dz_rev.tail(d)).transpose();
                d_embed.row(j) += (dz_fwd.tail(d) + dz_rev.head(d)).transpose();
            }
        }
    }

    if (encoder_grads) {
        for (int c = 0; c < n; ++c)
            encode_backward(cfg, encoder, caches[static_cast<size_t>(c)],
                            d_embed.row(c).transpose(), *encoder_grads);
    }
    return loss_sum;
}

TrainedPredictor train_predictor(const std::vector<EegWindow>& windows,
                                 const std::vector<Eigen::MatrixXd>& labels,
                                 const EncoderConfig& cfg, const TrainHyper& hyper) {
    if (windows.empty()) throw std::invalid_argument("train_predictor: no windows");
    if (labels.size() != windows.size() && labels.size() != 1)
        throw std::invalid_argument("train_predictor: labels must match windows (or be a single graph)");
    if (hyper.epochs < 1 || hyper.batch_size < 1 || hyper.learning_rate <= 0)
        throw std::invalid_argument("train_predictor: bad hyperparameters");

    auto label_of = [&](size_t w) -> const Eigen::MatrixXd& {
        return labels.size() == 1 ? labels[0] : labels[w];
    };

    TrainedPredictor model;
    model.config = cfg;
    model.encoder = EncoderWeights::seeded_init(cfg);
    model.head = MlpHead::seeded_init(cfg.d_model, hyper.head_hidden, cfg.seed ^ 0x68656164ull);

    Eigen::VectorXd enc_velocity = Eigen::VectorXd::Zero(model.encoder.flat().size());
    MlpHead head_velocity = MlpHead::zeros(cfg.d_model, hyper.head_hidden);

    const int n = windows[0].n_channels();
    const int pairs_per_window = n * (n - 1) / 2;

    std::vector<size_t> order(windows.size());
    std::iota(order.begin(), order.end(), 0);

    const int n_threads = std::max(1, hyper.n_threads);

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        std::mt19937_64 shuffle_rng(cfg.seed ^ (0x9e3779b9ull + static_cast<std::uint64_t>(epoch)));
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double epoch_loss = 0.0;
        long epoch_pairs = 0;

        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(hyper.batch_size)) {
            const size_t end = std::min(order.size(), start + static_cast<size_t>(hyper.batch_size));
            const size_t count = end - start;

            // Per-window contributions are computed independently and reduced
            // in window order, so threaded and serial runs match bitwise.
            std::vector<WindowContribution> contrib(count);
            auto worker = [&](size_t from, size_t to) {
                for (size_t k = from; k < to; ++k) {
                    auto& c = contrib[k];
                    c.encoder_grads = EncoderWeights(cfg);
                    c.head_grads = MlpHead::zeros(cfg.d_model, hyper.head_hidden);
                    const size_t w = order[start + k];
                    c.loss_sum = window_loss_and_grad(windows[w], label_of(w), cfg, model.encoder,
                                                      model.head, &c.encoder_grads, &c.head_grads);
                    c.pair_count = pairs_per_window;
                }
            };
            if (n_threads == 1 || count == 1) {
                worker(0, count);
            } else {
                std::vector<std::thread> pool;
                const size_t chunk = (count + static_cast<size_t>(n_threads) - 1) /
                                     static_cast<size_t>(n_threads);
                for (size_t from = 0; from < count; from += chunk)
                    pool.emplace_back(worker, from, std::min(count, from + chunk));
                for (auto& t : pool) t.join();
            }

            EncoderWeights enc_grads(cfg);
            MlpHead head_grads = MlpHead::zeros(cfg.d_model, hyper.head_hidden);
            double batch_loss = 0.0;
            long batch_pairs = 0;
            for (const auto& c : contrib) {
                enc_grads.flat() += c.encoder_grads.flat();
                head_grads.w1 += c.head_grads.w1;
                head_grads.b1 += c.head_grads.b1;
                head_grads.w2 += c.head_grads.w2;
                head_grads.b2 += c.head_grads.b2;
                batch_loss += c.loss_sum;
                batch_pairs += c.pair_count;
            }
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("train_predictor: loss diverged to a non-finite value");

            const double inv = 1.0 / static_cast<double>(batch_pairs);
            enc_velocity = hyper.momentum * enc_velocity - hyper.learning_rate * inv * enc_grads.flat();
            model.encoder.flat() += enc_velocity;
            head_velocity.w1 = hyper.momentum * head_velocity.w1 - hyper.learning_rate * inv * head_grads.w1;
            head_velocity.b1 = hyper.momentum * head_velocity.b1 - hyper.learning_rate * inv * head_grads.b1;
            head_velocity.w2 = hyper.momentum * head_velocity.w2 - hyper.learning_rate * inv * head_grads.w2;
            head_velocity.b2 = hyper.momentum * head_velocity.b2 - hyper.learning_rate * inv * head_grads.b2;
            model.head.w1 += head_velocity.w1;
            model.head.b1 += head_velocity.b1;
            model.head.w2 += head_velocity.w2;
            model.head.b2 += head_velocity.b2;

            epoch_loss += batch_loss;
            epoch_pairs += batch_pairs;
        }
        model.loss_curve.push_back(epoch_loss / static_cast<double>(epoch_pairs));
    }
    return model;
}

ProbGraph predict_prob_graph(const EegWindow& window, const TrainedPredictor& model) {
    const int n = window.n_channels();
    std::vector<Eigen::VectorXd> embeddings;
    embeddings.reserve(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c)
        embeddings.push_back(encode_channel(window.channel(c), model.config, model.encoder));

    ProbGraph p;
    p.window_index = window.window_index();
    p.probs = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double prob = symmetric_edge_prob(embeddings[static_cast<size_t>(i)],
                                                    embeddings[static_cast<size_t>(j)], model.head);
            p.probs(i, j) = p.probs(j, i) = prob;
        }
    }
    return p;
}

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::string checkpoint_to_json(const TrainedPredictor& model) {
    nlohmann::ordered_json j;
    j["format"] = "eegraph-checkpoint-v1";
    j["encoder_config"] = {{"patch_len", model.config.patch_len},
                           {"d_model", model.config.d_model},
                           {"n_heads", model.config.n_heads},
                           {"n_layers", model.config.n_layers},
                           {"feedforward_dim", model.config.feedforward_dim},
                           {"seed", model.config.seed}};
    j["encoder_params"] = vector_to_json(model.encoder.flat());
    RowMat w1_rm = model.head.w1;
    j["head"] = {{"hidden", model.head.hidden()},
                 {"w1", std::vector<double>(w1_rm.data(), w1_rm.data() + w1_rm.size())},
                 {"b1", vector_to_json(model.head.b1)},
                 {"w2", vector_to_json(model.head.w2)},
                 {"b2", model.head.b2}};
    j["loss_curve"] = model.loss_curve;
    return j.dump();
}

TrainedPredictor checkpoint_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    if (j.value("format", "") != "eegraph-checkpoint-v1")
        throw std::invalid_argument("checkpoint: unknown format tag");

    TrainedPredictor model;
    const auto& c = j.at("encoder_config");
    model.config.patch_len = c.at("patch_len").get<int>();
    model.config.d_model = c.at("d_model").get<int>();
    model.config.n_heads = c.at("n_heads").get<int>();
    model.config.n_layers = c.at("n_layers").get<int>();
    model.config.feedforward_dim = c.at("feedforward_dim").get<int>();
    model.config.seed = c.at("seed").get<std::uint64_t>();

    model.encoder = EncoderWeights(model.config);
    const Eigen::VectorXd flat = vector_from_json(j.at("encoder_params"));
    if (flat.size() != model.encoder.flat().size())
        throw std::invalid_argument("checkpoint: encoder parameter count mismatch");
    model.encoder.flat() = flat;

    const auto& h = j.at("head");
    const int hidden = h.at("hidden").get<int>();
    model.head = MlpHead::zeros(model.config.d_model, hidden);
    const auto w1 = h.at("w1").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w1.size()) != model.head.w1.size())
        throw std::invalid_argument("checkpoint: head w1 size mismatch");
    model.head.w1 = Eigen::Map<const RowMat>(w1.data(), hidden, 2 * model.config.d_model);
    model.head.b1 = vector_from_json(h.at("b1"));
    model.head.w2 = vector_from_json(h.at("w2"));
    model.head.b2 = h.at("b2").get<double>();
    model.head.validate();

    if (j.contains("loss_curve")) model.loss_curve = j.at("loss_curve").get<std::vector<double>>();
    return model;
}

}  // namespace eegraph
