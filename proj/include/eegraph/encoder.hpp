#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace eegraph {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Shape of the per-channel temporal encoder: the signal is zero-padded to a
/// multiple of patch_len, projected patch-wise to d_model, summed with
/// sinusoidal positions and run through post-norm attention+feedforward
/// blocks, then mean-pooled into one embedding.
struct EncoderConfig {
    int patch_len = 25;
    int d_model = 32;
    int n_heads = 4;
    int n_layers = 1;
    int feedforward_dim = 64;
    std::uint64_t seed = 1;

    void validate() const;  // d_model divisible by n_heads, positive sizes
    int head_dim() const { return d_model / n_heads; }
};

/// All encoder parameters in one flat buffer (row-major per tensor, in
/// declaration order: patch projection, then per layer wq bq wk bk wv bv
/// wo bo ln1_gamma ln1_beta w1 b1 w2 b2 ln2_gamma ln2_beta). The flat view
/// is what checkpoints store and what the optimizer updates.
class EncoderWeights {
public:
    EncoderWeights() = default;
    explicit EncoderWeights(const EncoderConfig& cfg);  // zero-initialized

    /// Seeded init: weights and biases uniform in +-1/sqrt(fan_in), layer
    /// norm at identity.
    static EncoderWeights seeded_init(const EncoderConfig& cfg);

    static int param_count(const EncoderConfig& cfg);

    Eigen::VectorXd& flat() { return flat_; }
    const Eigen::VectorXd& flat() const { return flat_; }
    const EncoderConfig& config() const { return cfg_; }
    void set_zero() { flat_.setZero(); }

    // Named views into the flat buffer.
    Eigen::Map<RowMat> w_patch();
    Eigen::Map<Eigen::VectorXd> b_patch();
    struct LayerView {
        Eigen::Map<RowMat> wq, wk, wv, wo, w1, w2;
        Eigen::Map<Eigen::VectorXd> bq, bk, bv, bo, ln1_gamma, ln1_beta, b1, b2, ln2_gamma,
            ln2_beta;
    };
    LayerView layer(int l);

    Eigen::Map<const RowMat> w_patch() const;
    Eigen::Map<const Eigen::VectorXd> b_patch() const;
    struct ConstLayerView {
        Eigen::Map<const RowMat> wq, wk, wv, wo, w1, w2;
        Eigen::Map<const Eigen::VectorXd> bq, bk, bv, bo, ln1_gamma, ln1_beta, b1, b2, ln2_gamma,
            ln2_beta;
    };
    ConstLayerView layer(int l) const;

private:
    EncoderConfig cfg_;
    Eigen::VectorXd flat_;
};

/// Intermediates of one forward pass, kept for the backward pass.
struct EncoderCache {
    int signal_len = 0;
    RowMat tokens0;  // after projection + positions
    std::vector<RowMat> patches;  // [T] columns of length patch_len (as 1 x patch_len rows)
    struct LayerCache {
        RowMat x_in, q, k, v;
        std::vector<RowMat> attn;  // per-head softmax probabilities [T x T]
        RowMat ctx, attn_out, res1;
        Eigen::VectorXd ln1_istd;
        RowMat ln1_norm;
        RowMat x_mid, ff_pre, ff_act, ff_out, res2;
        Eigen::VectorXd ln2_istd;
        RowMat ln2_norm;
        RowMat x_out;
    };
    std::vector<LayerCache> layers;
    Eigen::VectorXd pooled;
};

/// Forward pass producing the d_model embedding; throws on non-finite or
/// empty input.
Eigen::VectorXd encode_channel(const Eigen::VectorXd& signal, const EncoderConfig& cfg,
                               const EncoderWeights& weights);

/// Forward pass that also returns the cache needed by encode_backward.
EncoderCache encode_forward(const Eigen::VectorXd& signal, const EncoderConfig& cfg,
                            const EncoderWeights& weights);

/// Accumulates d(loss)/d(params) into `grads` given d(loss)/d(embedding).
void encode_backward(const EncoderConfig& cfg, const EncoderWeights& weights,
                     const EncoderCache& cache, const Eigen::VectorXd& grad_embedding,
                     EncoderWeights& grads);

}  // namespace eegraph
