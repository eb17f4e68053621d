#include <doctest.h>

#include <random>

#include "eegraph/predictor.hpp"
#include "eegraph/synth.hpp"

using namespace eegraph;

namespace {

std::shared_ptr<const Montage> tiny_montage() {
    static const auto montage = std::make_shared<Montage>(std::vector<ChannelInfo>{
        {"F3", Lobe::Frontal, {0.0, 0.5, 0.5}},
        {"C3", Lobe::Central, {0.0, 0.0, 1.0}},
        {"T3", Lobe::Temporal, {-1.0, 0.0, 0.0}},
    });
    return montage;
}

EncoderConfig tiny_config() {
    EncoderConfig cfg;
    cfg.patch_len = 8;
    cfg.d_model = 8;
    cfg.n_heads = 2;
    cfg.n_layers = 1;
    cfg.feedforward_dim = 12;
    cfg.seed = 5;
    return cfg;
}

}  // namespace

TEST_CASE("all-zero head scores one half") {
    const MlpHead head = MlpHead::zeros(4, 6);
    const Eigen::VectorXd h = Eigen::VectorXd::Ones(4);
    CHECK(predict_edge_prob(h, h, head) == 0.5);
    CHECK(symmetric_edge_prob(h, 2.0 * h, head) == 0.5);
}

TEST_CASE("stored pair probability is orientation independent") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 1.0);
    const MlpHead head = MlpHead::seeded_init(6, 10, 77);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd a(6), b(6);
        for (int i = 0; i < 6; ++i) {
            a(i) = noise(rng);
            b(i) = noise(rng);
        }
        CHECK(symmetric_edge_prob(a, b, head) == symmetric_edge_prob(b, a, head));
    }
}

TEST_CASE("hand-set two-unit head matches scalar arithmetic") {
    MlpHead head = MlpHead::zeros(1, 2);
    head.w1 << 0.5, -1.0, 2.0, 0.25;  // rows: unit 0, unit 1
    head.b1 << 0.1, -0.2;
    head.w2 << 1.5, -0.5;
    head.b2 = 0.05;
    const Eigen::VectorXd h_i = Eigen::VectorXd::Constant(1, 0.5);
    const Eigen::VectorXd h_j = Eigen::VectorXd::Constant(1, -0.3);

    const double pre0 = 0.5 * 0.5 + (-1.0) * (-0.3) + 0.1;   // 0.65
    const double pre1 = 2.0 * 0.5 + 0.25 * (-0.3) + (-0.2);  // 0.725
    const double logit = 1.5 * std::max(0.0, pre0) + (-0.5) * std::max(0.0, pre1) + 0.05;
    const double expected = 1.0 / (1.0 + std::exp(-logit));
    CHECK(predict_edge_prob(h_i, h_j, head) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS(predict_edge_prob(h_i, Eigen::VectorXd::Zero(2), head));
}

TEST_CASE("head and encoder gradients match finite differences through the pair loss") {
    const EncoderConfig cfg = tiny_config();
    const auto montage = tiny_montage();
    std::mt19937_64 rng(13);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd data(3, 24);
    for (int c = 0; c < 3; ++c)
        for (int s = 0; s < 24; ++s) data(c, s) = noise(rng);
    const EegWindow window(data, 100.0, 0, montage);
    Eigen::MatrixXd label = Eigen::MatrixXd::Zero(3, 3);
    label(0, 1) = label(1, 0) = 1.0;

    EncoderWeights encoder = EncoderWeights::seeded_init(cfg);
    MlpHead head = MlpHead::seeded_init(cfg.d_model, 7, 99);
    EncoderWeights enc_grads(cfg);
    MlpHead head_grads = MlpHead::zeros(cfg.d_model, 7);
    window_loss_and_grad(window, label, cfg, encoder, head, &enc_grads, &head_grads);

    const double step = 1e-4;
    auto loss_at = [&]() {
        return window_loss_and_grad(window, label, cfg, encoder, head, nullptr, nullptr);
    };
    auto check_param = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + step;
        const double up = loss_at();
        param = saved - step;
        const double down = loss_at();
        param = saved;
        const double fd = (up - down) / (2 * step);
        const double rel = std::abs(fd - analytic) / std::max({1.0, std::abs(fd), std::abs(analytic)});
        CHECK(rel < 1e-5);
    };

    std::uniform_int_distribution<int> pick_enc(0, static_cast<int>(encoder.flat().size()) - 1);
    for (int t = 0; t < 8; ++t) {
        const int p = pick_enc(rng);
        check_param(encoder.flat()(p), enc_grads.flat()(p));
    }
    std::uniform_int_distribution<int> pick_w1(0, static_cast<int>(head.w1.size()) - 1);
    for (int t = 0; t < 5; ++t) {
        const int p = pick_w1(rng);
        check_param(head.w1.data()[p], head_grads.w1.data()[p]);
    }
    check_param(head.b1(2), head_grads.b1(2));
    check_param(head.w2(4), head_grads.w2(4));
    check_param(head.b2, head_grads.b2);
}

TEST_CASE("training on labels equal to the initial predictions leaves the loss flat") {
    const EncoderConfig cfg = tiny_config();
    const auto montage = tiny_montage();
    std::mt19937_64 rng(55);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<EegWindow> windows;
    for (int w = 0; w < 4; ++w) {
        Eigen::MatrixXd data(3, 32);
        for (int c = 0; c < 3; ++c)
            for (int s = 0; s < 32; ++s) data(c, s) = noise(rng);
        windows.emplace_back(data, 100.0, w, montage);
    }

    TrainHyper hyper;
    hyper.epochs = 4;
    hyper.batch_size = 4;
    hyper.momentum = 0.0;
    hyper.head_hidden = 7;
    hyper.n_threads = 1;

    // Reconstruct the seeded initial model and use its own soft predictions
    // as labels; the BCE gradient is then exactly zero.
    TrainedPredictor init;
    init.config = cfg;
    init.encoder = EncoderWeights::seeded_init(cfg);
    init.head = MlpHead::seeded_init(cfg.d_model, hyper.head_hidden, cfg.seed ^ 0x68656164ull);
    std::vector<Eigen::MatrixXd> labels;
    for (const auto& w : windows) labels.push_back(predict_prob_graph(w, init).probs);

    const TrainedPredictor model = train_predictor(windows, labels, cfg, hyper);
    REQUIRE(model.loss_curve.size() == 4);
    for (size_t e = 1; e < model.loss_curve.size(); ++e)
        CHECK(model.loss_curve[e] <= model.loss_curve[e - 1] + 1e-12);
}

TEST_CASE("training is deterministic and thread-count invariant") {
    SynthSpec spec;
    spec.seed = 11;
    spec.n_windows = 6;
    spec.window_seconds = 1.0;
    spec.sample_rate = 64.0;
    spec.planted_edges = {{"F3", "F4"}, {"O1", "O2"}};
    const auto windows = generate_synthetic(spec);
    std::vector<Eigen::MatrixXd> labels{planted_adjacency(spec, standard_montage())};

    EncoderConfig cfg = tiny_config();
    cfg.patch_len = 16;
    TrainHyper hyper;
    hyper.epochs = 2;
    hyper.batch_size = 3;
    hyper.head_hidden = 8;

    hyper.n_threads = 1;
    const TrainedPredictor serial = train_predictor(windows, labels, cfg, hyper);
    hyper.n_threads = 4;
    const TrainedPredictor threaded = train_predictor(windows, labels, cfg, hyper);
    CHECK(serial.encoder.flat() == threaded.encoder.flat());
    CHECK(serial.head.w1 == threaded.head.w1);
    CHECK(serial.loss_curve == threaded.loss_curve);
}

TEST_CASE("training errors on empty or mismatched input") {
    const EncoderConfig cfg = tiny_config();
    CHECK_THROWS(train_predictor({}, {}, cfg, TrainHyper{}));
}

TEST_CASE("checkpoint round trip preserves predictions") {
    SynthSpec spec;
    spec.seed = 21;
    spec.n_windows = 2;
    spec.window_seconds = 1.0;
    spec.sample_rate = 64.0;
    spec.planted_edges = {{"F3", "F4"}};
    const auto windows = generate_synthetic(spec);

    EncoderConfig cfg = tiny_config();
    cfg.patch_len = 16;
    TrainHyper hyper;
    hyper.epochs = 1;
    hyper.head_hidden = 8;
    const TrainedPredictor model =
        train_predictor(windows, {planted_adjacency(spec, standard_montage())}, cfg, hyper);

    const TrainedPredictor loaded = checkpoint_from_json(checkpoint_to_json(model));
    CHECK(loaded.encoder.flat() == model.encoder.flat());
    CHECK(loaded.head.w1 == model.head.w1);
    CHECK(loaded.head.b2 == model.head.b2);
    CHECK(predict_prob_graph(windows[0], loaded).probs == predict_prob_graph(windows[0], model).probs);
    CHECK_THROWS(checkpoint_from_json("{\"format\":\"wrong\"}"));
}

TEST_CASE("predicted prob graphs are symmetric with zero diagonal") {
    SynthSpec spec;
    spec.seed = 31;
    spec.n_windows = 1;
    spec.window_seconds = 1.0;
    spec.sample_rate = 64.0;
    const auto windows = generate_synthetic(spec);
    TrainedPredictor model;
    model.config = tiny_config();
    model.config.patch_len = 16;
    model.encoder = EncoderWeights::seeded_init(model.config);
    model.head = MlpHead::seeded_init(model.config.d_model, 8, 123);
    const ProbGraph p = predict_prob_graph(windows[0], model);
    CHECK_NOTHROW(p.validate());
}
