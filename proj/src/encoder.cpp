#include "eegraph/encoder.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace eegraph {

namespace {

constexpr double kLnEps = 1e-5;

struct Layout {
    // offsets into the flat buffer, in declaration order
    int w_patch = 0, b_patch = 0;
    struct Layer {
        int wq, bq, wk, bk, wv, bv, wo, bo;
        int ln1_gamma, ln1_beta;
        int w1, b1, w2, b2;
        int ln2_gamma, ln2_beta;
    };
    std::vector<Layer> layers;
    int total = 0;

    explicit Layout(const EncoderConfig& cfg) {
        int at = 0;
        auto take = [&](int count) {
            const int off = at;
            at += count;
            return off;
        };
        const int d = cfg.d_model;
        w_patch = take(d * cfg.patch_len);
        b_patch = take(d);
        layers.resize(static_cast<size_t>(cfg.n_layers));
        for (auto& l : layers) {
            l.wq = take(d * d);
            l.bq = take(d);
            l.wk = take(d * d);
            l.bk = take(d);
            l.wv = take(d * d);
            l.bv = take(d);
            l.wo = take(d * d);
            l.bo = take(d);
            l.ln1_gamma = take(d);
            l.ln1_beta = take(d);
            l.w1 = take(cfg.feedforward_dim * d);
            l.b1 = take(cfg.feedforward_dim);
            l.w2 = take(d * cfg.feedforward_dim);
            l.b2 = take(d);
            l.ln2_gamma = take(d);
            l.ln2_beta = take(d);
        }
        total = at;
    }
};

// Sinusoidal position encoding for token index t, dimension d.
RowMat position_encoding(int n_tokens, int d) {
    RowMat pe(n_tokens, d);
    for (int t = 0; t < n_tokens; ++t) {
        for (int i = 0; i < d; i += 2) {
            const double rate = std::pow(10000.0, static_cast<double>(i) / d);
            pe(t, i) = std::sin(t / rate);
            if (i + 1 < d) pe(t, i + 1) = std::cos(t / rate);
        }
    }
    return pe;
}

// Row-wise layer norm; records 1/sqrt(var+eps) and the normalized rows.
RowMat layer_norm(const RowMat& x, const Eigen::Map<const Eigen::VectorXd>& gamma,
                  const Eigen::Map<const Eigen::VectorXd>& beta, Eigen::VectorXd& istd_out,
                  RowMat& norm_out) {
    const auto rows = x.rows();
    const auto d = x.cols();
    RowMat out(rows, d);
    istd_out.resize(rows);
    norm_out.resize(rows, d);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double mean = x.row(r).mean();
        const double var = (x.row(r).array() - mean).square().mean();
        const double istd = 1.0 / std::sqrt(var + kLnEps);
        istd_out(r) = istd;
        norm_out.row(r) = (x.row(r).array() - mean) * istd;
        out.row(r) = norm_out.row(r).array() * gamma.transpose().array() + beta.transpose().array();
    }
    return out;
}

// Backward of layer_norm; accumulates gamma/beta grads and returns dx.
RowMat layer_norm_backward(const RowMat& dy, const Eigen::VectorXd& istd, const RowMat& norm,
                           const Eigen::Map<const Eigen::VectorXd>& gamma,
                           Eigen::Map<Eigen::VectorXd> dgamma, Eigen::Map<Eigen::VectorXd> dbeta) {
    const auto rows = dy.rows();
    const auto d = dy.cols();
    RowMat dx(rows, d);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::ArrayXd dyr = dy.row(r).transpose().array();
        const Eigen::ArrayXd nr = norm.row(r).transpose().array();
        dgamma.array() += dyr * nr;
        dbeta.array() += dyr;
        const Eigen::ArrayXd dnorm = dyr * gamma.array();
        const double mean_dnorm = dnorm.mean();
        const double mean_dnorm_norm = (dnorm * nr).mean();
        dx.row(r) = (istd(r) * (dnorm - mean_dnorm - nr * mean_dnorm_norm)).transpose();
    }
    return dx;
}

}  // namespace

void EncoderConfig::validate() const {
    if (patch_len < 1 || d_model < 1 || n_heads < 1 || n_layers < 0 || feedforward_dim < 1)
        throw std::invalid_argument("encoder config: sizes must be positive");
    if (d_model % n_heads != 0)
        throw std::invalid_argument("encoder config: d_model must be divisible by n_heads");
}

EncoderWeights::EncoderWeights(const EncoderConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    flat_ = Eigen::VectorXd::Zero(param_count(cfg));
}

int EncoderWeights::param_count(const EncoderConfig& cfg) { return Layout(cfg).total; }

EncoderWeights EncoderWeights::seeded_init(const EncoderConfig& cfg) {
    EncoderWeights w(cfg);
    std::mt19937_64 rng(cfg.seed);
    auto uniform_fill = [&rng](auto view, int fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (Eigen::Index i = 0; i < view.size(); ++i) view.data()[i] = dist(rng);
    };
    uniform_fill(w.w_patch(), cfg.patch_len);
    uniform_fill(w.b_patch(), cfg.patch_len);
    for (int l = 0; l < cfg.n_layers; ++l) {
        auto lv = w.layer(l);
        uniform_fill(lv.wq, cfg.d_model);
        uniform_fill(lv.bq, cfg.d_model);
        uniform_fill(lv.wk, cfg.d_model);
        uniform_fill(lv.bk, cfg.d_model);
        uniform_fill(lv.wv, cfg.d_model);
        uniform_fill(lv.bv, cfg.d_model);
        uniform_fill(lv.wo, cfg.d_model);
        uniform_fill(lv.bo, cfg.d_model);
        lv.ln1_gamma.setOnes();
        lv.ln1_beta.setZero();
        uniform_fill(lv.w1, cfg.d_model);
        uniform_fill(lv.b1, cfg.d_model);
        uniform_fill(lv.w2, cfg.feedforward_dim);
        uniform_fill(lv.b2, cfg.feedforward_dim);
        lv.ln2_gamma.setOnes();
        lv.ln2_beta.setZero();
    }
    return w;
}

Eigen::Map<RowMat> EncoderWeights::w_patch() {
    return {flat_.data() + Layout(cfg_).w_patch, cfg_.d_model, cfg_.patch_len};
}
Eigen::Map<Eigen::VectorXd> EncoderWeights::b_patch() {
    return {flat_.data() + Layout(cfg_).b_patch, cfg_.d_model};
}
Eigen::Map<const RowMat> EncoderWeights::w_patch() const {
    return {flat_.data() + Layout(cfg_).w_patch, cfg_.d_model, cfg_.patch_len};
}
Eigen::Map<const Eigen::VectorXd> EncoderWeights::b_patch() const {
    return {flat_.data() + Layout(cfg_).b_patch, cfg_.d_model};
}

EncoderWeights::LayerView EncoderWeights::layer(int l) {
    const Layout layout(cfg_);
    const auto& o = layout.layers.at(static_cast<size_t>(l));
    const int d = cfg_.d_model, ff = cfg_.feedforward_dim;
    double* p = flat_.data();
    return {{p + o.wq, d, d},  {p + o.wk, d, d},        {p + o.wv, d, d},
            {p + o.wo, d, d},  {p + o.w1, ff, d},        {p + o.w2, d, ff},
            {p + o.bq, d},     {p + o.bk, d},            {p + o.bv, d},
            {p + o.bo, d},     {p + o.ln1_gamma, d},     {p + o.ln1_beta, d},
            {p + o.b1, ff},    {p + o.b2, d},            {p + o.ln2_gamma, d},
            {p + o.ln2_beta, d}};
}

EncoderWeights::ConstLayerView EncoderWeights::layer(int l) const {
    const Layout layout(cfg_);
    const auto& o = layout.layers.at(static_cast<size_t>(l));
    const int d = cfg_.d_model, ff = cfg_.feedforward_dim;
    const double* p = flat_.data();
    return {{p + o.wq, d, d},  {p + o.wk, d, d},        {p + o.wv, d, d},
            {p + o.wo, d, d},  {p + o.w1, ff, d},        {p + o.w2, d, ff},
            {p + o.bq, d},     {p + o.bk, d},            {p + o.bv, d},
            {p + o.bo, d},     {p + o.ln1_gamma, d},     {p + o.ln1_beta, d},
            {p + o.b1, ff},    {p + o.b2, d},            {p + o.ln2_gamma, d},
            {p + o.ln2_beta, d}};
}

EncoderCache encode_forward(const Eigen::VectorXd& signal, const EncoderConfig& cfg,
                            const EncoderWeights& weights) {
    cfg.validate();
    if (signal.size() < 1) throw std::invalid_argument("encode: empty signal");
    if (!signal.allFinite()) throw std::invalid_argument("encode: non-finite input");

    const int d = cfg.d_model;
    const auto len = static_cast<int>(signal.size());
    const int n_tokens = (len + cfg.patch_len - 1) / cfg.patch_len;

    EncoderCache cache;
    cache.signal_len = len;
    cache.patches.resize(static_cast<size_t>(n_tokens));

    const auto w_patch = weights.w_patch();
    const auto b_patch = weights.b_patch();
    const RowMat pe = position_encoding(n_tokens, d);

    cache.tokens0.resize(n_tokens, d);
    for (int t = 0; t < n_tokens; ++t) {
        Eigen::VectorXd patch = Eigen::VectorXd::Zero(cfg.patch_len);
        const int start = t * cfg.patch_len;
        const int count = std::min(cfg.patch_len, len - start);
        patch.head(count) = signal.segment(start, count);
        cache.patches[static_cast<size_t>(t)] = patch.transpose();
        cache.tokens0.row(t) = (w_patch * patch + b_patch).transpose() + pe.row(t);
    }

    RowMat x = cache.tokens0;
    const int dh = cfg.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    cache.layers.resize(static_cast<size_t>(cfg.n_layers));

    for (int l = 0; l < cfg.n_layers; ++l) {
        auto lw = weights.layer(l);
        auto& lc = cache.layers[static_cast<size_t>(l)];
        lc.x_in = x;

        lc.q = (x * lw.wq.transpose()).rowwise() + lw.bq.transpose();
        lc.k = (x * lw.wk.transpose()).rowwise() + lw.bk.transpose();
        lc.v = (x * lw.wv.transpose()).rowwise() + lw.bv.transpose();

        lc.ctx.resize(n_tokens, d);
        lc.attn.resize(static_cast<size_t>(cfg.n_heads));
        for (int h = 0; h < cfg.n_heads; ++h) {
            const auto qh = lc.q.middleCols(h * dh, dh);
            const auto kh = lc.k.middleCols(h * dh, dh);
            const auto vh = lc.v.middleCols(h * dh, dh);
            RowMat scores = qh * kh.transpose() * scale;
            RowMat& probs = lc.attn[static_cast<size_t>(h)];
            probs.resize(n_tokens, n_tokens);
            for (int r = 0; r < n_tokens; ++r) {
                const Eigen::ArrayXd row =
                    (scores.row(r).array() - scores.row(r).maxCoeff()).exp();
                probs.row(r) = (row / row.sum()).transpose();
            }
            lc.ctx.middleCols(h * dh, dh) = probs * vh;
        }
        lc.attn_out = (lc.ctx * lw.wo.transpose()).rowwise() + lw.bo.transpose();
        lc.res1 = x + lc.attn_out;
        lc.x_mid = layer_norm(lc.res1, lw.ln1_gamma, lw.ln1_beta, lc.ln1_istd, lc.ln1_norm);

        lc.ff_pre = (lc.x_mid * lw.w1.transpose()).rowwise() + lw.b1.transpose();
        lc.ff_act = lc.ff_pre.cwiseMax(0.0);
        lc.ff_out = (lc.ff_act * lw.w2.transpose()).rowwise() + lw.b2.transpose();
        lc.res2 = lc.x_mid + lc.ff_out;
        lc.x_out = layer_norm(lc.res2, lw.ln2_gamma, lw.ln2_beta, lc.ln2_istd, lc.ln2_norm);
        x = lc.x_out;
    }

    cache.pooled = x.colwise().mean().transpose();
    return cache;
}

Eigen::VectorXd encode_channel(const Eigen::VectorXd& signal, const EncoderConfig& cfg,
                               const EncoderWeights& weights) {
    return encode_forward(signal, cfg, weights).pooled;
}

void encode_backward(const EncoderConfig& cfg, const EncoderWeights& weights,
                     const EncoderCache& cache, const Eigen::VectorXd& grad_embedding,
                     EncoderWeights& grads) {
    const int d = cfg.d_model;
    const int dh = cfg.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    const auto n_tokens = cache.tokens0.rows();

    // Mean pool: every token row receives grad/T.
    RowMat dx = RowMat::Zero(n_tokens, d);
    dx.rowwise() += (grad_embedding / static_cast<double>(n_tokens)).transpose();

    for (int l = cfg.n_layers - 1; l >= 0; --l) {
        const auto lw = weights.layer(l);
        auto lg = grads.layer(l);
        const auto& lc = cache.layers[static_cast<size_t>(l)];

        // LN2
        RowMat d_res2 =
            layer_norm_backward(dx, lc.ln2_istd, lc.ln2_norm, lw.ln2_gamma, lg.ln2_gamma, lg.ln2_beta);

        // Feedforward: res2 = x_mid + W2 relu(W1 x_mid + b1) + b2
        RowMat d_ff_out = d_res2;
        lg.w2 += d_ff_out.transpose() * lc.ff_act;
        lg.b2 += d_ff_out.colwise().sum().transpose();
        RowMat d_act = d_ff_out * lw.w2;
        RowMat d_pre = (lc.ff_pre.array() > 0.0).select(d_act, 0.0);
        lg.w1 += d_pre.transpose() * lc.x_mid;
        lg.b1 += d_pre.colwise().sum().transpose();
        RowMat d_xmid = d_res2 + d_pre * lw.w1;

        // LN1
        RowMat d_res1 = layer_norm_backward(d_xmid, lc.ln1_istd, lc.ln1_norm, lw.ln1_gamma,
                                            lg.ln1_gamma, lg.ln1_beta);

        // Attention output projection: attn_out = ctx Wo^T + bo
        RowMat d_attn_out = d_res1;
        lg.wo += d_attn_out.transpose() * lc.ctx;
        lg.bo += d_attn_out.colwise().sum().transpose();
        RowMat d_ctx = d_attn_out * lw.wo;

        RowMat dq = RowMat::Zero(n_tokens, d);
        RowMat dk = RowMat::Zero(n_tokens, d);
        RowMat dv = RowMat::Zero(n_tokens, d);
        for (int h = 0; h < cfg.n_heads; ++h) {
            const auto& probs = lc.attn[static_cast<size_t>(h)];
            const auto vh = lc.v.middleCols(h * dh, dh);
            const auto qh = lc.q.middleCols(h * dh, dh);
            const auto kh = lc.k.middleCols(h * dh, dh);
            const auto d_ctx_h = d_ctx.middleCols(h * dh, dh);

            RowMat d_probs = d_ctx_h * vh.transpose();
            dv.middleCols(h * dh, dh) = probs.transpose() * d_ctx_h;

            // softmax backward per row
            RowMat d_scores(n_tokens, n_tokens);
            for (Eigen::Index r = 0; r < n_tokens; ++r) {
                const double dot = d_probs.row(r).dot(probs.row(r));
                d_scores.row(r) = probs.row(r).array() * (d_probs.row(r).array() - dot);
            }
            dq.middleCols(h * dh, dh) = d_scores * kh * scale;
            dk.middleCols(h * dh, dh) = d_scores.transpose() * qh * scale;
        }

        // q = x Wq^T + bq etc.; residual adds d_res1 directly.
        lg.wq += dq.transpose() * lc.x_in;
        lg.bq += dq.colwise().sum().transpose();
        lg.wk += dk.transpose() * lc.x_in;
        lg.bk += dk.colwise().sum().transpose();
        lg.wv += dv.transpose() * lc.x_in;
        lg.bv += dv.colwise().sum().transpose();
        dx = d_res1 + dq * lw.wq + dk * lw.wk + dv * lw.wv;
    }

    // Patch projection: token_t = W p_t + b + pe_t
    auto gw_patch = grads.w_patch();
    auto gb_patch = grads.b_patch();
    for (Eigen::Index t = 0; t < n_tokens; ++t) {
        gw_patch += dx.row(t).transpose() * cache.patches[static_cast<size_t>(t)];
        gb_patch += dx.row(t).transpose();
    }
}

}  // namespace eegraph
