#pragma once

#include <string>

#include "eegraph/features.hpp"
#include "eegraph/window.hpp"

namespace eegraph {

/// Natural-language channel summary used in edge prompts. The deterministic
/// describer fills the fixed template; free-form text (e.g. from a remote
/// describer) enters through from_rendered.
struct TextualDescription {
    std::string channel_label;
    std::string lobe_phrase;
    std::string amplitude_phrase;  // low | moderate | high
    std::string waveform_phrase;   // "intermittent sharp spikes" | "a regular background"
    std::string trend_phrase;
    std::string rendered;

    static TextualDescription from_rendered(std::string label, std::string text);
};

/// Template-based deterministic description of one channel:
///   amplitude by std (< 2 µV low, > 12 µV high, else moderate),
///   "intermittent sharp spikes" when any |x - mean| > 4 std,
///   trend by the least-squares slope of |x| over time with a dead-band of
///   5% of the |x| range.
/// Throws std::out_of_range on a bad channel index.
TextualDescription describe_channel(const EegWindow& window, int channel);

/// Same rule applied to an explicit signal, for callers outside a window.
TextualDescription describe_signal(const Eigen::VectorXd& signal, double sample_rate,
                                   const std::string& label, Lobe lobe);

}  // namespace eegraph
