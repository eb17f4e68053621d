#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eegraph/encoder.hpp"
#include "eegraph/graph.hpp"
#include "eegraph/window.hpp"

namespace eegraph {

/// Two-layer scorer over concatenated pair embeddings:
/// sigma(w2 . relu(w1 [h_i; h_j] + b1) + b2).
struct MlpHead {
    Eigen::MatrixXd w1;  // [hidden x 2 d_model]
    Eigen::VectorXd b1;  // [hidden]
    Eigen::VectorXd w2;  // [hidden]
    double b2 = 0.0;

    static MlpHead seeded_init(int d_model, int hidden, std::uint64_t seed);
    static MlpHead zeros(int d_model, int hidden);
    int hidden() const { return static_cast<int>(b1.size()); }
    int input_dim() const { return static_cast<int>(w1.cols()); }
    void validate() const;
};

/// One orientation only; throws on dimension mismatch.
double predict_edge_prob(const Eigen::VectorXd& h_i, const Eigen::VectorXd& h_j,
                         const MlpHead& head);

/// The stored probability: average of both concatenation orders, which makes
/// the pair score symmetric.
double symmetric_edge_prob(const Eigen::VectorXd& h_i, const Eigen::VectorXd& h_j,
                           const MlpHead& head);

struct TrainHyper {
    int epochs = 30;
    int batch_size = 8;
    double learning_rate = 1e-2;
    double momentum = 0.9;
    int head_hidden = 32;
    int n_threads = 4;
};

struct TrainedPredictor {
    EncoderConfig config;
    EncoderWeights encoder;
    MlpHead head;
    std::vector<double> loss_curve;  // mean BCE per epoch
};

/// Sum of pairwise binary cross-entropies of one window (all unordered
/// pairs), optionally accumulating parameter gradients of that sum.
double window_loss_and_grad(const EegWindow& window, const Eigen::MatrixXd& label,
                            const EncoderConfig& cfg, const EncoderWeights& encoder,
                            const MlpHead& head, EncoderWeights* encoder_grads,
                            MlpHead* head_grads);

/// Mini-batch gradient descent on mean BCE between symmetric pair scores and
/// the supervision adjacencies (one per window, or a single matrix broadcast
/// to all). Seeded and deterministic, including under n_threads > 1.
/// Throws on empty input, label/window mismatch, or a non-finite loss.
TrainedPredictor train_predictor(const std::vector<EegWindow>& windows,
                                 const std::vector<Eigen::MatrixXd>& labels,
                                 const EncoderConfig& cfg, const TrainHyper& hyper);

/// Stage-1 inference for one window.
ProbGraph predict_prob_graph(const EegWindow& window, const TrainedPredictor& model);

/// Checkpoint round trip. Parameters are stored as flat arrays, row-major per
/// tensor in declaration order (see EncoderWeights).
std::string checkpoint_to_json(const TrainedPredictor& model);
TrainedPredictor checkpoint_from_json(const std::string& json_text);

}  // namespace eegraph
