#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eegraph/io.hpp"
#include "eegraph/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using eegraph::PipelineConfig;

// Built-in configuration: the seeded synthetic benchmark with a mock judge.
PipelineConfig default_config() {
    PipelineConfig config;
    config.synth = eegraph::default_benchmark_spec();
    eegraph::JudgeConfig mock;
    mock.kind = eegraph::JudgeKind::Mock;
    config.judges.push_back(mock);
    return config;
}

// Applies one "dotted.path=value" override onto the raw config JSON.
void apply_override(nlohmann::json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw eegraph::ConfigError("--set expects dotted.path=value, got '" + assignment + "'");
    std::string pointer = "/" + assignment.substr(0, eq);
    for (auto& ch : pointer)
        if (ch == '.') ch = '/';
    const std::string value = assignment.substr(eq + 1);
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(value);
    } catch (const nlohmann::json::exception&) {
        parsed = value;  // bare strings stay strings
    }
    try {
        j[nlohmann::json::json_pointer(pointer)] = parsed;
    } catch (const nlohmann::json::exception& e) {
        throw eegraph::ConfigError("--set " + assignment + ": " + e.what());
    }
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::int64_t seed = -1;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "pipeline config JSON");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override the configured seed");
    cmd->add_option("--set", args.overrides, "override a config field, dotted.path=value")
        ->take_all();
}

PipelineConfig load(const CommonArgs& args) {
    PipelineConfig config;
    if (args.config_path.empty() && args.overrides.empty()) {
        config = default_config();
    } else {
        nlohmann::json j = args.config_path.empty()
                               ? nlohmann::json::parse(default_config().to_json())
                               : nlohmann::json::parse(eegraph::read_text_file(args.config_path));
        for (const auto& assignment : args.overrides) apply_override(j, assignment);
        config = PipelineConfig::from_json_text(j.dump());
    }
    if (args.seed >= 0) config.apply_seed(static_cast<std::uint64_t>(args.seed));
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EEG connectivity graphs: transformer edge prediction, judge-based edge "
                 "refinement, and a graph benchmark"};
    app.require_subcommand(1);

    CommonArgs synth_args, features_args, build_args, refine_args, bench_args, metrics_args;
    std::string source = "transformer";
    std::string judge_id;
    std::vector<std::string> graph_dirs;

    add_common(app.add_subcommand("synth", "generate the synthetic recording and ground truth"),
               synth_args);
    add_common(app.add_subcommand("features", "export the per-channel statistics CSV"),
               features_args);
    auto* build = app.add_subcommand("build-graph", "build per-window graphs from one source");
    add_common(build, build_args);
    build->add_option("--source", source, "transformer|correlation|distance|knn");
    auto* refine = app.add_subcommand("refine", "refine Stage-1 graphs with one judge");
    add_common(refine, refine_args);
    refine->add_option("--judge", judge_id, "judge id from the config (default: first)");
    add_common(app.add_subcommand("bench", "run the full graph benchmark"), bench_args);
    auto* metrics = app.add_subcommand("metrics", "metrics over existing graph directories");
    add_common(metrics, metrics_args);
    metrics->add_option("--graphs", graph_dirs, "directories of window_*.json graph files")
        ->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("synth"))
            eegraph::cmd_synth(load(synth_args), synth_args.out_dir);
        else if (app.got_subcommand("features"))
            eegraph::cmd_features(load(features_args), features_args.out_dir);
        else if (app.got_subcommand("build-graph"))
            eegraph::cmd_build_graph(load(build_args), source, build_args.out_dir);
        else if (app.got_subcommand("refine"))
            eegraph::cmd_refine(load(refine_args), judge_id, refine_args.out_dir);
        else if (app.got_subcommand("bench"))
            eegraph::cmd_bench(load(bench_args), bench_args.out_dir);
        else if (app.got_subcommand("metrics")) {
            std::vector<fs::path> dirs(graph_dirs.begin(), graph_dirs.end());
            eegraph::cmd_metrics(load(metrics_args), dirs, metrics_args.out_dir);
        }
    } catch (const eegraph::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const eegraph::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const eegraph::JudgeError& e) {
        std::cerr << "judge error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
    return 0;
}
