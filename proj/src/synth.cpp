#include "eegraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace eegraph {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(seed ^ stream) ^ a) ^ b);
}

constexpr std::uint64_t kNoiseStream = 0x6e6f697365ull;     // "noise"
constexpr std::uint64_t kPhaseStream = 0x7068617365ull;     // "phase"
constexpr std::uint64_t kArtifactStream = 0x61727466ull;    // "artf"

// Connected components of the planted graph; channels outside any edge get -1.
std::vector<int> planted_components(const SynthSpec& spec, const Montage& montage) {
    const int n = montage.size();
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
        return x;
    };
    for (const auto& [a, b] : spec.planted_edges) {
        int ra = find(montage.index_of(a));
        int rb = find(montage.index_of(b));
        if (ra != rb) parent[static_cast<size_t>(std::max(ra, rb))] = std::min(ra, rb);
    }
    std::vector<bool> in_edge(static_cast<size_t>(n), false);
    for (const auto& [a, b] : spec.planted_edges) {
        in_edge[static_cast<size_t>(montage.index_of(a))] = true;
        in_edge[static_cast<size_t>(montage.index_of(b))] = true;
    }
    std::vector<int> component(static_cast<size_t>(n), -1);
    int next = 0;
    std::vector<int> root_to_component(static_cast<size_t>(n), -1);
    for (int c = 0; c < n; ++c) {
        if (!in_edge[static_cast<size_t>(c)]) continue;
        int r = find(c);
        if (root_to_component[static_cast<size_t>(r)] < 0) root_to_component[static_cast<size_t>(r)] = next++;
        component[static_cast<size_t>(c)] = root_to_component[static_cast<size_t>(r)];
    }
    return component;
}

struct PhaseSegment {
    int start;
    int end;
    Lobe lobe;
};

std::vector<PhaseSegment> schedule_segments(const SynthSpec& spec) {
    std::vector<PhaseSegment> segments;
    for (const auto& phase : spec.seizure_schedule) {
        const int span = phase.end_window - phase.start_window;
        const int k = static_cast<int>(phase.lobes.size());
        for (int s = 0; s < k; ++s) {
            const int seg_start = phase.start_window + span * s / k;
            const int seg_end = phase.start_window + span * (s + 1) / k;
            if (seg_start < seg_end)
                segments.push_back({seg_start, seg_end, phase.lobes[static_cast<size_t>(s)]});
        }
    }
    return segments;
}

}  // namespace

SynthSpec default_benchmark_spec() {
    SynthSpec spec;
    spec.seed = 42;
    spec.n_windows = 200;
    spec.planted_edges = {{"Fp1", "F7"}, {"Fp2", "F8"}, {"F3", "F4"}, {"T3", "T5"},
                          {"T4", "T6"},  {"C3", "P3"},  {"C4", "P4"}, {"O1", "O2"}};
    spec.seizure_schedule = {{50, 90, {Lobe::Frontal, Lobe::Temporal}},
                             {130, 170, {Lobe::Frontal, Lobe::Temporal}}};
    spec.artifact.rate = 0.05;
    return spec;
}

void validate_spec(const SynthSpec& spec, const Montage& montage) {
    if (spec.n_windows < 1) throw std::invalid_argument("synth spec: n_windows must be >= 1");
    if (spec.window_seconds <= 0 || spec.sample_rate <= 0)
        throw std::invalid_argument("synth spec: window_seconds and sample_rate must be positive");
    if (std::llround(spec.window_seconds * spec.sample_rate) < 2)
        throw std::invalid_argument("synth spec: windows shorter than 2 samples");
    if (spec.noise_std < 0) throw std::invalid_argument("synth spec: noise_std must be >= 0");
    if (spec.artifact.rate < 0 || spec.artifact.rate > 1)
        throw std::invalid_argument("synth spec: artifact rate must lie in [0,1]");
    for (const auto& [a, b] : spec.planted_edges) {
        if (a == b) throw std::invalid_argument("synth spec: planted self-edge on '" + a + "'");
        montage.index_of(a);  // throws on unknown labels
        montage.index_of(b);
    }
    std::vector<std::pair<int, int>> ranges;
    for (const auto& phase : spec.seizure_schedule) {
        if (phase.lobes.empty())
            throw std::invalid_argument("synth spec: seizure phase with empty lobe sequence");
        if (phase.start_window < 0 || phase.end_window > spec.n_windows ||
            phase.start_window >= phase.end_window)
            throw std::invalid_argument(
                "synth spec: seizure range [" + std::to_string(phase.start_window) + "," +
                std::to_string(phase.end_window) + ") out of bounds for " +
                std::to_string(spec.n_windows) + " windows");
        ranges.emplace_back(phase.start_window, phase.end_window);
    }
    std::sort(ranges.begin(), ranges.end());
    for (size_t i = 1; i < ranges.size(); ++i)
        if (ranges[i].first < ranges[i - 1].second)
            throw std::invalid_argument("synth spec: overlapping seizure ranges");
}

std::optional<Lobe> active_lobe(const SynthSpec& spec, int window_index) {
    for (const auto& seg : schedule_segments(spec))
        if (window_index >= seg.start && window_index < seg.end) return seg.lobe;
    return std::nullopt;
}

std::vector<bool> seizure_labels(const SynthSpec& spec) {
    std::vector<bool> labels(static_cast<size_t>(spec.n_windows), false);
    for (const auto& seg : schedule_segments(spec))
        for (int w = seg.start; w < seg.end; ++w) labels[static_cast<size_t>(w)] = true;
    return labels;
}

Eigen::MatrixXd planted_adjacency(const SynthSpec& spec, const Montage& montage) {
    const int n = montage.size();
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [a, b] : spec.planted_edges) {
        const int i = montage.index_of(a);
        const int j = montage.index_of(b);
        adj(i, j) = adj(j, i) = 1.0;
    }
    return adj;
}

Eigen::MatrixXd truth_adjacency(const SynthSpec& spec, const Montage& montage, int window_index) {
    Eigen::MatrixXd adj = planted_adjacency(spec, montage);
    if (auto lobe = active_lobe(spec, window_index)) {
        const auto members = montage.channels_in_lobe(*lobe);
        for (size_t a = 0; a < members.size(); ++a)
            for (size_t b = a + 1; b < members.size(); ++b)
                adj(members[a], members[b]) = adj(members[b], members[a]) = 1.0;
    }
    return adj;
}

std::vector<EegWindow> generate_synthetic(const SynthSpec& spec,
                                          std::shared_ptr<const Montage> montage_ptr) {
    if (!montage_ptr) montage_ptr = standard_montage_ptr();
    const Montage& montage = *montage_ptr;
    validate_spec(spec, montage);

    const int n = montage.size();
    const auto n_samples = static_cast<int>(std::llround(spec.window_seconds * spec.sample_rate));
    const double dt = 1.0 / spec.sample_rate;
    const double two_pi = 2.0 * std::numbers::pi;

    const auto component = planted_components(spec, montage);
    const int n_components = component.empty() ? 0 : *std::max_element(component.begin(), component.end()) + 1;
    std::vector<double> comp_freq(static_cast<size_t>(n_components));
    std::vector<double> comp_phase(static_cast<size_t>(n_components));
    for (int c = 0; c < n_components; ++c) {
        comp_freq[static_cast<size_t>(c)] =
            spec.source_base_freq_hz + spec.source_freq_step_hz * c;
        std::mt19937_64 rng(mix(spec.seed, kPhaseStream, static_cast<std::uint64_t>(c)));
        comp_phase[static_cast<size_t>(c)] =
            std::uniform_real_distribution<double>(0.0, two_pi)(rng);
    }

    std::vector<EegWindow> windows;
    windows.reserve(static_cast<size_t>(spec.n_windows));

    for (int w = 0; w < spec.n_windows; ++w) {
        Eigen::MatrixXd data(n, n_samples);
        const double window_start = w * spec.window_seconds;
        const auto lobe = active_lobe(spec, w);

        // Shared ictal burst for the active lobe: rhythmic sharp transients
        // whose amplitude ramps up across the window.
        Eigen::VectorXd burst = Eigen::VectorXd::Zero(n_samples);
        if (lobe) {
            const int n_spikes =
                static_cast<int>(std::floor(spec.window_seconds * spec.ictal.spike_rate_hz));
            const double sigma = spec.ictal.spike_width_seconds;
            for (int s = 0; s < n_samples; ++s) {
                const double t = s * dt;  // window-local time
                const double ramp = 0.5 + t / spec.window_seconds;
                double v = 0.0;
                for (int k = 0; k < n_spikes; ++k) {
                    const double center = (k + 0.5) / spec.ictal.spike_rate_hz;
                    const double d = (t - center) / sigma;
                    v += std::exp(-0.5 * d * d);
                }
                burst(s) = spec.ictal.spike_amplitude * ramp * v;
            }
        }

        for (int c = 0; c < n; ++c) {
            const int comp = component[static_cast<size_t>(c)];
            const bool in_active_lobe = lobe && montage.channel(c).lobe == *lobe;

            std::mt19937_64 noise_rng(mix(spec.seed, kNoiseStream, static_cast<std::uint64_t>(w),
                                          static_cast<std::uint64_t>(c)));
            std::normal_distribution<double> noise(0.0, 1.0);

            std::mt19937_64 artifact_rng(mix(spec.seed, kArtifactStream,
                                             static_cast<std::uint64_t>(w),
                                             static_cast<std::uint64_t>(c)));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            bool has_artifact = spec.artifact.rate > 0 && unit(artifact_rng) < spec.artifact.rate;
            double art_freq = 0, art_start = 0, art_phase = 0;
            if (has_artifact) {
                art_freq = spec.artifact.freq_min_hz +
                           unit(artifact_rng) * (spec.artifact.freq_max_hz - spec.artifact.freq_min_hz);
                const double latest =
                    std::max(0.0, spec.window_seconds - spec.artifact.duration_seconds);
                art_start = unit(artifact_rng) * latest;
                art_phase = unit(artifact_rng) * two_pi;
            }

            for (int s = 0; s < n_samples; ++s) {
                const double t_local = s * dt;
                const double t_global = window_start + t_local;
                double v = 0.0;
                if (comp >= 0)
                    v += spec.source_amplitude *
                         std::sin(two_pi * comp_freq[static_cast<size_t>(comp)] * t_global +
                                  comp_phase[static_cast<size_t>(comp)]);
                if (in_active_lobe) v += burst(s);
                if (has_artifact && t_local >= art_start &&
                    t_local < art_start + spec.artifact.duration_seconds)
                    v += spec.artifact.amplitude *
                         std::sin(two_pi * art_freq * (t_local - art_start) + art_phase);
                if (spec.noise_std > 0) v += spec.noise_std * noise(noise_rng);
                data(c, s) = v;
            }
        }
        windows.emplace_back(std::move(data), spec.sample_rate, w, montage_ptr);
    }
    return windows;
}

namespace {

Lobe lobe_from_name(const std::string& name) {
    if (name == "Frontal") return Lobe::Frontal;
    if (name == "Temporal") return Lobe::Temporal;
    if (name == "Central") return Lobe::Central;
    if (name == "Parietal") return Lobe::Parietal;
    if (name == "Occipital") return Lobe::Occipital;
    throw std::invalid_argument("unknown lobe name '" + name + "'");
}

}  // namespace

SynthSpec synth_spec_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    SynthSpec spec;
    spec.seed = j.value("seed", spec.seed);
    spec.n_windows = j.value("n_windows", spec.n_windows);
    spec.window_seconds = j.value("window_seconds", spec.window_seconds);
    spec.sample_rate = j.value("sample_rate", spec.sample_rate);
    spec.noise_std = j.value("noise_std", spec.noise_std);
    spec.source_amplitude = j.value("source_amplitude", spec.source_amplitude);
    spec.source_base_freq_hz = j.value("source_base_freq_hz", spec.source_base_freq_hz);
    spec.source_freq_step_hz = j.value("source_freq_step_hz", spec.source_freq_step_hz);
    if (j.contains("planted_edges")) {
        spec.planted_edges.clear();
        for (const auto& e : j.at("planted_edges"))
            spec.planted_edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    if (j.contains("seizure_schedule")) {
        spec.seizure_schedule.clear();
        for (const auto& p : j.at("seizure_schedule")) {
            SeizurePhase phase;
            phase.start_window = p.at("start").get<int>();
            phase.end_window = p.at("end").get<int>();
            for (const auto& l : p.at("lobes")) phase.lobes.push_back(lobe_from_name(l.get<std::string>()));
            spec.seizure_schedule.push_back(std::move(phase));
        }
    }
    if (j.contains("ictal")) {
        const auto& p = j.at("ictal");
        spec.ictal.spike_amplitude = p.value("spike_amplitude", spec.ictal.spike_amplitude);
        spec.ictal.spike_rate_hz = p.value("spike_rate_hz", spec.ictal.spike_rate_hz);
        spec.ictal.spike_width_seconds = p.value("spike_width_seconds", spec.ictal.spike_width_seconds);
    }
    if (j.contains("artifact")) {
        const auto& p = j.at("artifact");
        spec.artifact.rate = p.value("rate", spec.artifact.rate);
        spec.artifact.amplitude = p.value("amplitude", spec.artifact.amplitude);
        spec.artifact.freq_min_hz = p.value("freq_min_hz", spec.artifact.freq_min_hz);
        spec.artifact.freq_max_hz = p.value("freq_max_hz", spec.artifact.freq_max_hz);
        spec.artifact.duration_seconds = p.value("duration_seconds", spec.artifact.duration_seconds);
    }
    return spec;
}

std::string synth_spec_to_json(const SynthSpec& spec) {
    nlohmann::json j;
    j["seed"] = spec.seed;
    j["n_windows"] = spec.n_windows;
    j["window_seconds"] = spec.window_seconds;
    j["sample_rate"] = spec.sample_rate;
    j["noise_std"] = spec.noise_std;
    j["source_amplitude"] = spec.source_amplitude;
    j["source_base_freq_hz"] = spec.source_base_freq_hz;
    j["source_freq_step_hz"] = spec.source_freq_step_hz;
    j["planted_edges"] = nlohmann::json::array();
    for (const auto& [a, b] : spec.planted_edges) j["planted_edges"].push_back({a, b});
    j["seizure_schedule"] = nlohmann::json::array();
    for (const auto& p : spec.seizure_schedule) {
        nlohmann::json phase;
        phase["start"] = p.start_window;
        phase["end"] = p.end_window;
        phase["lobes"] = nlohmann::json::array();
        for (auto l : p.lobes) phase["lobes"].push_back(lobe_name(l));
        j["seizure_schedule"].push_back(phase);
    }
    j["ictal"] = {{"spike_amplitude", spec.ictal.spike_amplitude},
                  {"spike_rate_hz", spec.ictal.spike_rate_hz},
                  {"spike_width_seconds", spec.ictal.spike_width_seconds}};
    j["artifact"] = {{"rate", spec.artifact.rate},
                     {"amplitude", spec.artifact.amplitude},
                     {"freq_min_hz", spec.artifact.freq_min_hz},
                     {"freq_max_hz", spec.artifact.freq_max_hz},
                     {"duration_seconds", spec.artifact.duration_seconds}};
    return j.dump(2);
}

}  // namespace eegraph
