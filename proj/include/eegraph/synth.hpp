#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eegraph/window.hpp"

namespace eegraph {

/// One seizure episode: windows [start_window, end_window) split into equal
/// consecutive segments, one per lobe in `lobes` (onset first).
struct SeizurePhase {
    int start_window = 0;
    int end_window = 0;
    std::vector<Lobe> lobes;
};

struct IctalSpec {
    double spike_amplitude = 40.0;   // microvolts, nominal bump height
    double spike_rate_hz = 3.0;      // rhythmic discharge rate
    double spike_width_seconds = 0.02;
};

/// Occasional single-channel sinusoidal bursts, uncorrelated across channels.
struct ArtifactSpec {
    double rate = 0.0;  // probability per (window, channel); disabled by default
    double amplitude = 8.0;
    double freq_min_hz = 4.0;
    double freq_max_hz = 14.0;
    double duration_seconds = 1.0;
};

/// Fully seeded description of a synthetic recording with planted
/// connectivity. Equal specs produce bit-identical data.
struct SynthSpec {
    std::uint64_t seed = 42;
    int n_windows = 200;
    double window_seconds = 4.0;
    double sample_rate = 250.0;
    std::vector<std::pair<std::string, std::string>> planted_edges;
    std::vector<SeizurePhase> seizure_schedule;
    double noise_std = 1.0;          // microvolts
    double source_amplitude = 10.0;  // microvolts
    double source_base_freq_hz = 6.0;
    double source_freq_step_hz = 0.8;
    IctalSpec ictal;
    ArtifactSpec artifact;
};

/// The seeded spec used by the benchmark and acceptance suite: 8 disjoint
/// planted pairs and two frontal-to-temporal seizure episodes.
SynthSpec default_benchmark_spec();

/// Throws std::invalid_argument with a description when the spec is
/// inconsistent with the montage (unknown labels, out-of-bounds or
/// overlapping schedule ranges, non-positive sizes).
void validate_spec(const SynthSpec& spec, const Montage& montage);

/// Planted pairs sharing a latent per-component oscillatory source, plus
/// independent Gaussian channel noise; during seizure windows every channel
/// of the active lobe receives the same rhythmic spike burst with a rising
/// amplitude ramp. Deterministic per spec.
std::vector<EegWindow> generate_synthetic(const SynthSpec& spec,
                                          std::shared_ptr<const Montage> montage = nullptr);

/// Active lobe of a window under the spec's schedule, if any.
std::optional<Lobe> active_lobe(const SynthSpec& spec, int window_index);

/// Per-window seizure flags (true when any lobe is active).
std::vector<bool> seizure_labels(const SynthSpec& spec);

/// 0/1 adjacency of the planted edges.
Eigen::MatrixXd planted_adjacency(const SynthSpec& spec, const Montage& montage);

/// Ground-truth connectivity of one window: planted edges plus, during a
/// seizure window, the clique over the active lobe's channels (the burst is a
/// genuinely shared source there).
Eigen::MatrixXd truth_adjacency(const SynthSpec& spec, const Montage& montage, int window_index);

SynthSpec synth_spec_from_json(const std::string& json_text);
std::string synth_spec_to_json(const SynthSpec& spec);

}  // namespace eegraph
