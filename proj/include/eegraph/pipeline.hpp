#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eegraph/judge.hpp"
#include "eegraph/manifest.hpp"
#include "eegraph/metrics.hpp"
#include "eegraph/predictor.hpp"
#include "eegraph/synth.hpp"

namespace eegraph {

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BaselineOptions {
    bool include = true;
    double distance_phi = 0.0;  // <= 0 selects the median electrode distance
    int knn_k = 3;
};

/// Whole-pipeline configuration: one data source (synthetic spec or a
/// recording CSV), Stage-1 settings, threshold, judges and outputs.
struct PipelineConfig {
    std::optional<SynthSpec> synth;
    std::string recording_csv;
    double window_seconds = 4.0;
    double sample_rate = 250.0;

    EncoderConfig encoder;
    TrainHyper train;
    double phi = 0.5;
    std::string graph_source = "transformer";  // transformer|correlation|distance|knn
    BaselineOptions baselines;
    std::vector<JudgeConfig> judges;
    std::string checkpoint_path;  // reused when present, written after training
    int workers = 4;

    static PipelineConfig from_json_text(const std::string& text);
    static PipelineConfig from_file(const std::filesystem::path& path);
    std::string to_json() const;  // canonical form, hashed into manifests

    void apply_seed(std::uint64_t seed);  // --seed: overrides synth + encoder seeds
    void validate() const;
};

/// Per-judge row of the benchmark report; `error` is set (and metrics zeroed)
/// when that judge failed, without affecting other rows.
struct JudgeReportRow {
    std::string id;
    double mean_sparsity = 0.0;
    double mean_jsd = 0.0;
    DetectionScore detection;
    bool has_detection = false;
    long warnings = 0;
    std::string error;
};

struct BenchReport {
    std::vector<JudgeReportRow> rows;
    std::vector<std::string> series_ids;      // order of edge_difference rows
    Eigen::MatrixXd edge_difference_matrix;   // pairwise, [series x series]
};

std::vector<EegWindow> load_windows(const PipelineConfig& config);

/// Builds (or loads) the Stage-1 predictor and returns per-window thresholded
/// graphs for the requested source.
GraphSeries build_graph_series(const PipelineConfig& config, const std::vector<EegWindow>& windows,
                               const std::string& source, RunManifest* manifest = nullptr,
                               const std::filesystem::path& out_dir = {});

// CLI commands. Each writes its artifacts plus manifest.json under out_dir
// and returns the manifest.
RunManifest cmd_synth(const PipelineConfig& config, const std::filesystem::path& out_dir);
RunManifest cmd_features(const PipelineConfig& config, const std::filesystem::path& out_dir);
RunManifest cmd_build_graph(const PipelineConfig& config, const std::string& source,
                            const std::filesystem::path& out_dir);
RunManifest cmd_refine(const PipelineConfig& config, const std::string& judge_id,
                       const std::filesystem::path& out_dir);
RunManifest cmd_bench(const PipelineConfig& config, const std::filesystem::path& out_dir);
RunManifest cmd_metrics(const PipelineConfig& config,
                        const std::vector<std::filesystem::path>& graph_dirs,
                        const std::filesystem::path& out_dir);

/// Loads a graph series from a directory of window_*.json files.
GraphSeries load_graph_series(const std::filesystem::path& dir, const std::string& id);

}  // namespace eegraph
