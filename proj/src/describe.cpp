#include "eegraph/describe.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace eegraph {

namespace {

constexpr double kLowStdUv = 2.0;
constexpr double kHighStdUv = 12.0;
constexpr double kSpikeSigmas = 4.0;
constexpr double kTrendDeadBand = 0.05;  // fraction of the |x| range

std::string amplitude_phrase_for(double std) {
    if (std < kLowStdUv) return "low";
    if (std > kHighStdUv) return "high";
    return "moderate";
}

std::string trend_phrase_for(const Eigen::VectorXd& signal, double sample_rate) {
    const auto n = signal.size();
    const Eigen::ArrayXd magnitude = signal.array().abs();
    const double range = magnitude.maxCoeff() - magnitude.minCoeff();
    if (range == 0.0) return "a stable pattern";

    // Least-squares slope of |x| against time in seconds.
    Eigen::ArrayXd t(n);
    for (Eigen::Index i = 0; i < n; ++i) t(i) = static_cast<double>(i) / sample_rate;
    const double t_mean = t.mean();
    const double m_mean = magnitude.mean();
    const double denom = (t - t_mean).square().sum();
    const double slope = ((t - t_mean) * (magnitude - m_mean)).sum() / denom;

    const double duration = static_cast<double>(n - 1) / sample_rate;
    const double drift = slope * duration;
    if (std::abs(drift) <= kTrendDeadBand * range) return "a stable pattern";
    return drift > 0 ? "an increasing trend in amplitude" : "a decreasing trend in amplitude";
}

}  // namespace

TextualDescription TextualDescription::from_rendered(std::string label, std::string text) {
    TextualDescription d;
    d.channel_label = std::move(label);
    d.rendered = std::move(text);
    return d;
}

TextualDescription describe_signal(const Eigen::VectorXd& signal, double sample_rate,
                                   const std::string& label, Lobe lobe) {
    const StatFeatures f = compute_stat_features(signal, sample_rate);

    TextualDescription d;
    d.channel_label = label;
    d.lobe_phrase = lobe_phrase(lobe);
    d.amplitude_phrase = amplitude_phrase_for(f.std);

    const bool spikes =
        f.std > 0 && ((signal.array() - f.mean_amplitude).abs() > kSpikeSigmas * f.std).any();
    d.waveform_phrase = spikes ? "intermittent sharp spikes" : "a regular background";
    d.trend_phrase = trend_phrase_for(signal, sample_rate);

    d.rendered = fmt::format(
        "Channel {}, located in the {}, shows {} amplitude with {}. "
        "The EEG signal exhibits {} over the observed time window.",
        d.channel_label, d.lobe_phrase, d.amplitude_phrase, d.waveform_phrase, d.trend_phrase);
    return d;
}

TextualDescription describe_channel(const EegWindow& window, int channel) {
    if (channel < 0 || channel >= window.n_channels())
        throw std::out_of_range("describe_channel: channel index out of range");
    const auto& info = window.montage().channel(channel);
    return describe_signal(window.channel(channel), window.sample_rate(), info.label, info.lobe);
}

}  // namespace eegraph
