#include "eegraph/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "eegraph/baselines.hpp"
#include "eegraph/hash.hpp"
#include "eegraph/io.hpp"
#include "eegraph/refine.hpp"

namespace eegraph {

namespace fs = std::filesystem;

namespace {

class StageTimer {
public:
    StageTimer(RunManifest& manifest, std::string stage)
        : manifest_(manifest), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        manifest_.stage_seconds[stage_] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    RunManifest& manifest_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
void parallel_for_index(int n, int workers, Fn&& fn) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            while (!failed.load()) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string window_file_name(int index) { return fmt::format("window_{:05d}.json", index); }

JudgeKind judge_kind_from_name(const std::string& name) {
    if (name == "mock") return JudgeKind::Mock;
    if (name == "remote") return JudgeKind::Remote;
    if (name == "always-yes") return JudgeKind::AlwaysYes;
    if (name == "always-no") return JudgeKind::AlwaysNo;
    throw ConfigError("unknown judge kind '" + name + "'");
}

std::string judge_kind_name(JudgeKind kind) {
    switch (kind) {
        case JudgeKind::Mock: return "mock";
        case JudgeKind::Remote: return "remote";
        case JudgeKind::AlwaysYes: return "always-yes";
        case JudgeKind::AlwaysNo: return "always-no";
    }
    return "mock";
}

std::vector<Lobe> scheduled_lobes_of(const SynthSpec& spec) {
    std::vector<Lobe> lobes;
    for (const auto& phase : spec.seizure_schedule)
        for (const auto lobe : phase.lobes)
            if (std::find(lobes.begin(), lobes.end(), lobe) == lobes.end()) lobes.push_back(lobe);
    return lobes;
}

double resolved_distance_phi(const BaselineOptions& opts, const Montage& montage) {
    if (opts.distance_phi > 0) return opts.distance_phi;
    std::vector<double> d;
    for (int i = 0; i < montage.size(); ++i)
        for (int j = i + 1; j < montage.size(); ++j) d.push_back(montage.distances()(i, j));
    std::nth_element(d.begin(), d.begin() + static_cast<long>(d.size() / 2), d.end());
    return d[d.size() / 2];
}

void write_verdict_log(const fs::path& path, const std::vector<EdgeVerdictRecord>& rows) {
    std::string out = "window,i,j,decision,cache_hit,fail_open,raw\n";
    for (const auto& r : rows) {
        std::string raw = r.raw_response;
        std::string quoted;
        quoted.reserve(raw.size() + 2);
        quoted.push_back('"');
        for (const char ch : raw) {
            if (ch == '"') quoted += "\"\"";
            else if (ch == '\n') quoted += "\\n";
            else quoted.push_back(ch);
        }
        quoted.push_back('"');
        out += fmt::format("{},{},{},{},{},{},{}\n", r.window_index, r.i, r.j,
                           decision_name(r.decision), r.cache_hit ? 1 : 0,
                           r.ambiguous_fail_open ? 1 : 0, quoted);
    }
    write_text_file(path, out);
}

struct RefinedSeries {
    GraphSeries series;
    std::vector<EdgeVerdictRecord> log;
    long warnings = 0;
};

RefinedSeries refine_series(const GraphSeries& initial, const std::vector<EegWindow>& windows,
                            Judge& judge) {
    RefinedSeries out;
    out.series.judge_id = "refined-" + judge.config().resolved_id();
    out.series.graphs.resize(initial.graphs.size());
    for (size_t w = 0; w < windows.size(); ++w) {
        RefineResult result = refine(initial.graphs[w], windows[w], judge);
        out.series.graphs[w] = std::move(result.refined);
        out.warnings += result.warnings;
        out.log.insert(out.log.end(), result.log.begin(), result.log.end());
    }
    return out;
}

void write_series(const fs::path& dir, const GraphSeries& series,
                  const std::vector<std::string>& labels, double phi, RunManifest& manifest,
                  const fs::path& out_dir) {
    for (size_t w = 0; w < series.graphs.size(); ++w) {
        const fs::path file = dir / window_file_name(static_cast<int>(w));
        write_text_file(file, graph_to_json(series.graphs[w], labels, phi) + "\n");
        manifest.add_file(out_dir, file);
    }
}

void ensure_cache_outside(const PipelineConfig& config, const fs::path& out_dir) {
    const fs::path out_abs = fs::weakly_canonical(fs::absolute(out_dir));
    for (const auto& judge : config.judges) {
        if (judge.cache_dir.empty()) continue;
        const fs::path cache_abs = fs::weakly_canonical(fs::absolute(judge.cache_dir));
        auto [end, nothing] =
            std::mismatch(out_abs.begin(), out_abs.end(), cache_abs.begin(), cache_abs.end());
        if (end == out_abs.end())
            throw ConfigError("judge cache_dir '" + judge.cache_dir +
                              "' must not live inside the output directory");
    }
}

}  // namespace

void PipelineConfig::apply_seed(std::uint64_t seed) {
    if (synth) synth->seed = seed;
    encoder.seed = seed * 0x9e3779b97f4a7c15ull + 1;
}

void PipelineConfig::validate() const {
    const bool has_synth = synth.has_value();
    const bool has_csv = !recording_csv.empty();
    if (has_synth == has_csv)
        throw ConfigError("config needs exactly one data source (synth or recording_csv)");
    if (phi < 0 || phi > 1) throw ConfigError("config: phi must lie in [0,1]");
    if (graph_source != "transformer" && graph_source != "correlation" &&
        graph_source != "distance" && graph_source != "knn")
        throw ConfigError("config: unknown graph_source '" + graph_source + "'");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    std::set<std::string> ids;
    for (const auto& judge : judges) {
        judge.validate();
        if (!ids.insert(judge.resolved_id()).second)
            throw ConfigError("config: duplicate judge id '" + judge.resolved_id() + "'");
    }
}

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    PipelineConfig config;
    try {
        if (j.contains("data")) {
            const auto& data = j.at("data");
            if (data.contains("synth")) config.synth = synth_spec_from_json(data.at("synth").dump());
            if (data.contains("recording_csv"))
                config.recording_csv = data.at("recording_csv").get<std::string>();
            config.window_seconds = data.value("window_seconds", config.window_seconds);
            config.sample_rate = data.value("sample_rate", config.sample_rate);
        }
        if (j.contains("encoder")) {
            const auto& e = j.at("encoder");
            config.encoder.patch_len = e.value("patch_len", config.encoder.patch_len);
            config.encoder.d_model = e.value("d_model", config.encoder.d_model);
            config.encoder.n_heads = e.value("n_heads", config.encoder.n_heads);
            config.encoder.n_layers = e.value("n_layers", config.encoder.n_layers);
            config.encoder.feedforward_dim = e.value("feedforward_dim", config.encoder.feedforward_dim);
            config.encoder.seed = e.value("seed", config.encoder.seed);
        }
        if (j.contains("train")) {
            const auto& t = j.at("train");
            config.train.epochs = t.value("epochs", config.train.epochs);
            config.train.batch_size = t.value("batch_size", config.train.batch_size);
            config.train.learning_rate = t.value("learning_rate", config.train.learning_rate);
            config.train.momentum = t.value("momentum", config.train.momentum);
            config.train.head_hidden = t.value("head_hidden", config.train.head_hidden);
            config.train.n_threads = t.value("n_threads", config.train.n_threads);
        }
        config.phi = j.value("phi", config.phi);
        config.graph_source = j.value("graph_source", config.graph_source);
        if (j.contains("baselines")) {
            const auto& b = j.at("baselines");
            config.baselines.include = b.value("include", config.baselines.include);
            config.baselines.distance_phi = b.value("distance_phi", config.baselines.distance_phi);
            config.baselines.knn_k = b.value("knn_k", config.baselines.knn_k);
        }
        if (j.contains("judges")) {
            for (const auto& q : j.at("judges")) {
                JudgeConfig judge;
                judge.kind = judge_kind_from_name(q.value("kind", "mock"));
                judge.id = q.value("id", "");
                judge.endpoint = q.value("endpoint", "");
                judge.model = q.value("model", "");
                judge.api_key = q.value("api_key", "");
                judge.timeout_ms = q.value("timeout_ms", judge.timeout_ms);
                judge.max_retries = q.value("max_retries", judge.max_retries);
                judge.max_parallel = q.value("max_parallel", judge.max_parallel);
                judge.cache_dir = q.value("cache_dir", "");
                judge.rate_limit_per_s = q.value("rate_limit_per_s", judge.rate_limit_per_s);
                if (judge.kind == JudgeKind::Remote) judge = with_env_defaults(judge);
                config.judges.push_back(std::move(judge));
            }
        }
        config.checkpoint_path = j.value("checkpoint_path", "");
        config.workers = j.value("workers", config.workers);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    config.validate();
    return config;
}

PipelineConfig PipelineConfig::from_file(const fs::path& path) {
    try {
        return from_json_text(read_text_file(path));
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const ConfigError*>(&e)) throw;
        throw ConfigError("cannot read config " + path.string() + ": " + e.what());
    }
}

std::string PipelineConfig::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json data;
    if (synth) data["synth"] = nlohmann::json::parse(synth_spec_to_json(*synth));
    if (!recording_csv.empty()) data["recording_csv"] = recording_csv;
    data["window_seconds"] = window_seconds;
    data["sample_rate"] = sample_rate;
    j["data"] = std::move(data);
    j["encoder"] = {{"patch_len", encoder.patch_len},
                    {"d_model", encoder.d_model},
                    {"n_heads", encoder.n_heads},
                    {"n_layers", encoder.n_layers},
                    {"feedforward_dim", encoder.feedforward_dim},
                    {"seed", encoder.seed}};
    j["train"] = {{"epochs", train.epochs},
                  {"batch_size", train.batch_size},
                  {"learning_rate", train.learning_rate},
                  {"momentum", train.momentum},
                  {"head_hidden", train.head_hidden},
                  {"n_threads", train.n_threads}};
    j["phi"] = phi;
    j["graph_source"] = graph_source;
    j["baselines"] = {{"include", baselines.include},
                      {"distance_phi", baselines.distance_phi},
                      {"knn_k", baselines.knn_k}};
    auto judges_json = nlohmann::ordered_json::array();
    for (const auto& judge : judges) {
        nlohmann::ordered_json q;
        q["kind"] = judge_kind_name(judge.kind);
        q["id"] = judge.resolved_id();
        if (!judge.endpoint.empty()) q["endpoint"] = judge.endpoint;
        if (!judge.model.empty()) q["model"] = judge.model;
        q["timeout_ms"] = judge.timeout_ms;
        q["max_retries"] = judge.max_retries;
        q["max_parallel"] = judge.max_parallel;
        if (!judge.cache_dir.empty()) q["cache_dir"] = judge.cache_dir;
        q["rate_limit_per_s"] = judge.rate_limit_per_s;
        judges_json.push_back(std::move(q));
    }
    j["judges"] = std::move(judges_json);
    if (!checkpoint_path.empty()) j["checkpoint_path"] = checkpoint_path;
    j["workers"] = workers;
    return j.dump(2);
}

std::vector<EegWindow> load_windows(const PipelineConfig& config) {
    config.validate();
    if (config.synth) {
        try {
            return generate_synthetic(*config.synth);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    try {
        const Eigen::MatrixXd recording =
            read_recording_csv(config.recording_csv, standard_montage());
        return slice_windows(recording, config.sample_rate, config.window_seconds,
                             standard_montage_ptr());
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
}

namespace {

TrainedPredictor obtain_predictor(const PipelineConfig& config,
                                  const std::vector<EegWindow>& windows, RunManifest* manifest,
                                  const fs::path& out_dir) {
    if (!config.checkpoint_path.empty() && fs::exists(config.checkpoint_path))
        return checkpoint_from_json(read_text_file(config.checkpoint_path));

    std::vector<Eigen::MatrixXd> labels;
    if (config.synth) {
        labels.reserve(windows.size());
        for (const auto& w : windows)
            labels.push_back(truth_adjacency(*config.synth, w.montage(), w.window_index()));
    } else {
        // Correlation-thresholded proxy supervision for external recordings.
        labels.reserve(windows.size());
        for (const auto& w : windows)
            labels.push_back(correlation_graph(w, config.phi).binarized());
    }
    TrainedPredictor model = train_predictor(windows, labels, config.encoder, config.train);

    if (!config.checkpoint_path.empty()) {
        write_text_file(config.checkpoint_path, checkpoint_to_json(model) + "\n");
    } else if (manifest && !out_dir.empty()) {
        const fs::path file = out_dir / "checkpoint.json";
        write_text_file(file, checkpoint_to_json(model) + "\n");
        manifest->add_file(out_dir, file);
    }
    return model;
}

}  // namespace

GraphSeries build_graph_series(const PipelineConfig& config, const std::vector<EegWindow>& windows,
                               const std::string& source, RunManifest* manifest,
                               const fs::path& out_dir) {
    if (windows.empty()) throw DataError("no windows to build graphs from");
    const Montage& montage = windows.front().montage();

    GraphSeries series;
    series.judge_id = source;
    series.graphs.resize(windows.size());

    if (source == "transformer") {
        const TrainedPredictor model = obtain_predictor(config, windows, manifest, out_dir);
        parallel_for_index(static_cast<int>(windows.size()), config.workers, [&](int w) {
            series.graphs[static_cast<size_t>(w)] =
                threshold_edges(predict_prob_graph(windows[static_cast<size_t>(w)], model), config.phi);
        });
    } else if (source == "correlation") {
        parallel_for_index(static_cast<int>(windows.size()), config.workers, [&](int w) {
            series.graphs[static_cast<size_t>(w)] =
                correlation_graph(windows[static_cast<size_t>(w)], config.phi);
        });
    } else if (source == "distance") {
        const Graph g = distance_graph(montage, resolved_distance_phi(config.baselines, montage));
        for (size_t w = 0; w < windows.size(); ++w) {
            series.graphs[w] = g;
            series.graphs[w].window_index = static_cast<int>(w);
        }
    } else if (source == "knn") {
        parallel_for_index(static_cast<int>(windows.size()), config.workers, [&](int w) {
            series.graphs[static_cast<size_t>(w)] =
                knn_graph(windows[static_cast<size_t>(w)], config.baselines.knn_k);
        });
    } else {
        throw ConfigError("unknown graph source '" + source + "'");
    }
    return series;
}

RunManifest cmd_synth(const PipelineConfig& config, const fs::path& out_dir) {
    config.validate();
    if (!config.synth) throw ConfigError("synth command needs a synth data source");
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "synth";
    manifest.config_hash = sha256_hex(config.to_json());

    StageTimer timer(manifest, "synth");
    const auto windows = load_windows(config);
    const Montage& montage = windows.front().montage();
    const auto labels = montage.labels();

    Eigen::MatrixXd recording(montage.size(),
                              static_cast<Eigen::Index>(windows.size()) * windows.front().n_samples());
    for (size_t w = 0; w < windows.size(); ++w)
        recording.middleCols(static_cast<Eigen::Index>(w) * windows[w].n_samples(),
                             windows[w].n_samples()) = windows[w].data();
    const fs::path csv = out_dir / "recording.csv";
    write_recording_csv(csv, recording, labels);
    manifest.add_file(out_dir, csv);

    for (const auto& window : windows) {
        const fs::path file = out_dir / "windows" / window_file_name(window.window_index());
        write_text_file(file, window_to_json(window) + "\n");
        manifest.add_file(out_dir, file);
    }

    Graph planted;
    planted.weights = planted_adjacency(*config.synth, montage);
    const fs::path planted_file = out_dir / "planted_graph.json";
    write_text_file(planted_file, graph_to_json(planted, labels, 0.0) + "\n");
    manifest.add_file(out_dir, planted_file);

    nlohmann::ordered_json truth;
    truth["seizure_labels"] = seizure_labels(*config.synth);
    auto lobes = nlohmann::ordered_json::array();
    for (int w = 0; w < config.synth->n_windows; ++w) {
        const auto lobe = active_lobe(*config.synth, w);
        lobes.push_back(lobe ? nlohmann::ordered_json(lobe_name(*lobe))
                             : nlohmann::ordered_json(nullptr));
    }
    truth["active_lobes"] = std::move(lobes);
    auto scheduled = nlohmann::ordered_json::array();
    for (const auto lobe : scheduled_lobes_of(*config.synth)) scheduled.push_back(lobe_name(lobe));
    truth["scheduled_lobes"] = std::move(scheduled);
    const fs::path truth_file = out_dir / "ground_truth.json";
    write_text_file(truth_file, truth.dump(2) + "\n");
    manifest.add_file(out_dir, truth_file);

    const fs::path spec_file = out_dir / "synth_spec.json";
    write_text_file(spec_file, synth_spec_to_json(*config.synth) + "\n");
    manifest.add_file(out_dir, spec_file);

    manifest.write(out_dir);
    return manifest;
}

RunManifest cmd_features(const PipelineConfig& config, const fs::path& out_dir) {
    config.validate();
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "features";
    manifest.config_hash = sha256_hex(config.to_json());

    StageTimer timer(manifest, "features");
    const auto windows = load_windows(config);
    const fs::path file = out_dir / "features.csv";
    write_features_csv(file, windows);
    manifest.add_file(out_dir, file);
    manifest.write(out_dir);
    return manifest;
}

RunManifest cmd_build_graph(const PipelineConfig& config, const std::string& source,
                            const fs::path& out_dir) {
    config.validate();
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "build-graph";
    manifest.config_hash = sha256_hex(config.to_json());

    StageTimer timer(manifest, "build_graph");
    const auto windows = load_windows(config);
    const auto series = build_graph_series(config, windows, source, &manifest, out_dir);
    write_series(out_dir / "graphs" / source, series, windows.front().montage().labels(),
                 source == "transformer" || source == "correlation" ? config.phi : 0.0, manifest,
                 out_dir);
    manifest.write(out_dir);
    return manifest;
}

RunManifest cmd_refine(const PipelineConfig& config, const std::string& judge_id,
                       const fs::path& out_dir) {
    config.validate();
    ensure_cache_outside(config, out_dir);
    if (config.judges.empty()) throw ConfigError("refine command needs at least one judge");
    const JudgeConfig* selected = nullptr;
    for (const auto& judge : config.judges)
        if (judge_id.empty() || judge.resolved_id() == judge_id) {
            selected = &judge;
            break;
        }
    if (!selected) throw ConfigError("no judge with id '" + judge_id + "' in config");

    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "refine";
    manifest.config_hash = sha256_hex(config.to_json());

    const auto windows = load_windows(config);
    const auto labels = windows.front().montage().labels();

    GraphSeries initial;
    {
        StageTimer timer(manifest, "stage1");
        initial = build_graph_series(config, windows, config.graph_source, &manifest, out_dir);
    }
    write_series(out_dir / "graphs" / "initial", initial, labels, config.phi, manifest, out_dir);

    StageTimer timer(manifest, "refine");
    Judge judge(*selected);
    const RefinedSeries refined = refine_series(initial, windows, judge);
    write_series(out_dir / "graphs" / refined.series.judge_id, refined.series, labels, config.phi,
                 manifest, out_dir);

    const fs::path log_file = out_dir / ("verdicts_" + selected->resolved_id() + ".csv");
    write_verdict_log(log_file, refined.log);
    manifest.add_file(out_dir, log_file);
    if (refined.warnings > 0)
        manifest.warnings.push_back(fmt::format("{} ambiguous verdicts kept fail-open",
                                                refined.warnings));
    manifest.write(out_dir);
    return manifest;
}

RunManifest cmd_bench(const PipelineConfig& config, const fs::path& out_dir) {
    config.validate();
    ensure_cache_outside(config, out_dir);
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "bench";
    manifest.config_hash = sha256_hex(config.to_json());

    const auto windows = load_windows(config);
    const Montage& montage = windows.front().montage();
    const auto labels = montage.labels();

    std::vector<bool> seizures;
    std::vector<Lobe> scheduled;
    if (config.synth) {
        seizures = seizure_labels(*config.synth);
        scheduled = scheduled_lobes_of(*config.synth);
    }
    const bool detect = !seizures.empty() && !scheduled.empty();

    BenchReport report;
    std::vector<GraphSeries> all_series;

    auto add_row = [&](const GraphSeries& series, long warnings, const std::string& error) {
        JudgeReportRow row;
        row.id = series.judge_id;
        row.warnings = warnings;
        row.error = error;
        if (error.empty()) {
            double sum = 0.0;
            for (const auto& g : series.graphs) sum += sparsity(g);
            row.mean_sparsity = sum / static_cast<double>(series.graphs.size());
            row.mean_jsd = mean_series_jsd(series);
            if (detect) {
                row.detection = detection_proxy_score(series, seizures, montage, scheduled);
                row.has_detection = true;
            }
            all_series.push_back(series);
            report.series_ids.push_back(series.judge_id);
        }
        report.rows.push_back(std::move(row));
    };

    GraphSeries initial;
    {
        StageTimer timer(manifest, "stage1");
        initial = build_graph_series(config, windows, config.graph_source, &manifest, out_dir);
        write_series(out_dir / "graphs" / config.graph_source, initial, labels, config.phi,
                     manifest, out_dir);
        add_row(initial, 0, "");
    }

    if (config.baselines.include) {
        StageTimer timer(manifest, "baselines");
        for (const std::string source : {"correlation", "distance", "knn"}) {
            if (source == config.graph_source) continue;
            const auto series = build_graph_series(config, windows, source, &manifest, out_dir);
            write_series(out_dir / "graphs" / source, series, labels,
                         source == "correlation" ? config.phi : 0.0, manifest, out_dir);
            add_row(series, 0, "");
        }
    }

    {
        StageTimer timer(manifest, "refine");
        for (const auto& judge_config : config.judges) {
            try {
                Judge judge(judge_config);
                const RefinedSeries refined = refine_series(initial, windows, judge);
                write_series(out_dir / "graphs" / refined.series.judge_id, refined.series, labels,
                             config.phi, manifest, out_dir);
                const fs::path log_file =
                    out_dir / ("verdicts_" + judge_config.resolved_id() + ".csv");
                write_verdict_log(log_file, refined.log);
                manifest.add_file(out_dir, log_file);
                add_row(refined.series, refined.warnings, "");
                if (refined.warnings > 0)
                    manifest.warnings.push_back(
                        fmt::format("judge {}: {} ambiguous verdicts kept fail-open",
                                    judge_config.resolved_id(), refined.warnings));
            } catch (const std::exception& e) {
                GraphSeries failed;
                failed.judge_id = "refined-" + judge_config.resolved_id();
                add_row(failed, 0, e.what());
                manifest.warnings.push_back(
                    fmt::format("judge {} failed: {}", judge_config.resolved_id(), e.what()));
            }
        }
    }

    StageTimer timer(manifest, "metrics");
    const auto n_series = static_cast<Eigen::Index>(all_series.size());
    report.edge_difference_matrix = Eigen::MatrixXd::Zero(n_series, n_series);
    for (Eigen::Index a = 0; a < n_series; ++a)
        for (Eigen::Index b = a + 1; b < n_series; ++b)
            report.edge_difference_matrix(a, b) = report.edge_difference_matrix(b, a) =
                edge_difference(all_series[static_cast<size_t>(a)], all_series[static_cast<size_t>(b)]);

    const fs::path diff_file = out_dir / "edge_difference.csv";
    write_matrix_csv(diff_file, report.edge_difference_matrix, report.series_ids, report.series_ids);
    manifest.add_file(out_dir, diff_file);

    for (const auto& series : all_series) {
        const fs::path file = out_dir / ("node_importance_" + series.judge_id + ".csv");
        write_matrix_csv(file, node_importance(series), labels);
        manifest.add_file(out_dir, file);
    }

    nlohmann::ordered_json report_json;
    auto rows_json = nlohmann::ordered_json::array();
    std::string report_csv =
        "id,mean_sparsity,mean_jsd,f1,accuracy,recall,precision,warnings,error\n";
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["id"] = row.id;
        r["mean_sparsity"] = row.mean_sparsity;
        r["mean_jsd"] = row.mean_jsd;
        if (row.has_detection)
            r["detection"] = {{"f1", row.detection.f1},
                              {"accuracy", row.detection.accuracy},
                              {"recall", row.detection.recall},
                              {"precision", row.detection.precision},
                              {"threshold", row.detection.threshold}};
        r["warnings"] = row.warnings;
        if (!row.error.empty()) r["error"] = row.error;
        rows_json.push_back(std::move(r));
        report_csv += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{}\n", row.id,
                                  row.mean_sparsity, row.mean_jsd, row.detection.f1,
                                  row.detection.accuracy, row.detection.recall,
                                  row.detection.precision, row.warnings, row.error);
    }
    report_json["rows"] = std::move(rows_json);
    report_json["series_ids"] = report.series_ids;

    const fs::path report_json_file = out_dir / "report.json";
    write_text_file(report_json_file, report_json.dump(2) + "\n");
    manifest.add_file(out_dir, report_json_file);
    const fs::path report_csv_file = out_dir / "report.csv";
    write_text_file(report_csv_file, report_csv);
    manifest.add_file(out_dir, report_csv_file);

    manifest.write(out_dir);
    return manifest;
}

GraphSeries load_graph_series(const fs::path& dir, const std::string& id) {
    GraphSeries series;
    series.judge_id = id;
    std::vector<fs::path> files;
    if (!fs::is_directory(dir)) throw DataError("graph directory not found: " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.starts_with("window_") && name.ends_with(".json")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no window_*.json graphs in " + dir.string());
    for (const auto& file : files) series.graphs.push_back(graph_from_json(read_text_file(file)));
    return series;
}

RunManifest cmd_metrics(const PipelineConfig& config, const std::vector<fs::path>& graph_dirs,
                        const fs::path& out_dir) {
    if (graph_dirs.empty()) throw ConfigError("metrics command needs at least one --graphs dir");
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "metrics";
    manifest.config_hash = sha256_hex(config.to_json());

    StageTimer timer(manifest, "metrics");
    std::vector<GraphSeries> all_series;
    std::vector<std::string> ids;
    for (const auto& dir : graph_dirs) {
        all_series.push_back(load_graph_series(dir, dir.filename().string()));
        ids.push_back(all_series.back().judge_id);
    }

    std::string csv = "id,mean_sparsity,mean_jsd\n";
    for (const auto& series : all_series) {
        double sum = 0.0;
        for (const auto& g : series.graphs) sum += sparsity(g);
        csv += fmt::format("{},{:.6f},{:.6f}\n", series.judge_id,
                           sum / static_cast<double>(series.graphs.size()), mean_series_jsd(series));
    }
    const fs::path metrics_file = out_dir / "metrics.csv";
    write_text_file(metrics_file, csv);
    manifest.add_file(out_dir, metrics_file);

    if (all_series.size() > 1) {
        const auto n = static_cast<Eigen::Index>(all_series.size());
        Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = a + 1; b < n; ++b)
                diff(a, b) = diff(b, a) = edge_difference(all_series[static_cast<size_t>(a)],
                                                          all_series[static_cast<size_t>(b)]);
        const fs::path diff_file = out_dir / "edge_difference.csv";
        write_matrix_csv(diff_file, diff, ids, ids);
        manifest.add_file(out_dir, diff_file);
    }
    manifest.write(out_dir);
    return manifest;
}

}  // namespace eegraph
