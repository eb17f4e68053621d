#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eegraph/baselines.hpp"
#include "eegraph/describe.hpp"
#include "eegraph/features.hpp"
#include "eegraph/judge.hpp"
#include "eegraph/metrics.hpp"
#include "eegraph/pipeline.hpp"
#include "eegraph/predictor.hpp"
#include "eegraph/prompt.hpp"
#include "eegraph/refine.hpp"
#include "eegraph/synth.hpp"

namespace py = pybind11;
using namespace eegraph;

namespace {

EegWindow make_window(const Eigen::MatrixXd& data, double sample_rate, int window_index) {
    return EegWindow(data, sample_rate, window_index, standard_montage_ptr());
}

GraphSeries series_from_matrices(const std::vector<Eigen::MatrixXd>& weights,
                                 const std::string& id) {
    GraphSeries s;
    s.judge_id = id;
    for (size_t w = 0; w < weights.size(); ++w) {
        Graph g;
        g.weights = weights[w];
        g.window_index = static_cast<int>(w);
        g.validate();
        s.graphs.push_back(std::move(g));
    }
    return s;
}

JudgeKind kind_from_string(const std::string& kind) {
    if (kind == "mock") return JudgeKind::Mock;
    if (kind == "remote") return JudgeKind::Remote;
    if (kind == "always-yes") return JudgeKind::AlwaysYes;
    if (kind == "always-no") return JudgeKind::AlwaysNo;
    throw std::invalid_argument("unknown judge kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "EEG connectivity graphs: transformer edge prediction, judge-based edge refinement, "
              "and graph benchmark metrics";
    m.attr("__version__") = kToolVersion;

    // Montage
    m.def("standard_montage_labels", []() { return standard_montage().labels(); });
    m.def("standard_montage_distances", []() -> Eigen::MatrixXd {
        return standard_montage().distances();
    });
    m.def("lobe_of", [](const std::string& label) {
        return lobe_name(standard_montage().lobe_of(label));
    });

    // Windows
    py::class_<EegWindow>(m, "EegWindow")
        .def(py::init(&make_window), py::arg("data"), py::arg("sample_rate"),
             py::arg("window_index") = 0,
             "One EEG window over the standard 10-20 montage; rows are channels in montage "
             "label order, values in microvolts.")
        .def_property_readonly("data", [](const EegWindow& w) -> Eigen::MatrixXd { return w.data(); })
        .def_property_readonly("sample_rate", &EegWindow::sample_rate)
        .def_property_readonly("window_index", &EegWindow::window_index)
        .def_property_readonly("n_channels", &EegWindow::n_channels)
        .def_property_readonly("n_samples", &EegWindow::n_samples)
        .def("channel", [](const EegWindow& w, int i) -> Eigen::VectorXd { return w.channel(i); });

    m.def(
        "slice_windows",
        [](const Eigen::MatrixXd& recording, double sample_rate, double window_seconds) {
            return slice_windows(recording, sample_rate, window_seconds, standard_montage_ptr());
        },
        py::arg("recording"), py::arg("sample_rate"), py::arg("window_seconds"));

    // Synthetic data
    m.def("default_benchmark_spec_json", []() { return synth_spec_to_json(default_benchmark_spec()); });
    m.def(
        "generate_synthetic",
        [](const std::string& spec_json) { return generate_synthetic(synth_spec_from_json(spec_json)); },
        py::arg("spec_json"), "Deterministic synthetic EEG from a SynthSpec JSON document.");
    m.def("seizure_labels", [](const std::string& spec_json) {
        return seizure_labels(synth_spec_from_json(spec_json));
    });
    m.def("planted_adjacency", [](const std::string& spec_json) -> Eigen::MatrixXd {
        return planted_adjacency(synth_spec_from_json(spec_json), standard_montage());
    });
    m.def("truth_adjacency", [](const std::string& spec_json, int window_index) -> Eigen::MatrixXd {
        return truth_adjacency(synth_spec_from_json(spec_json), standard_montage(), window_index);
    });

    // Features and descriptions
    py::class_<StatFeatures>(m, "StatFeatures")
        .def_readonly("mean_amplitude", &StatFeatures::mean_amplitude)
        .def_readonly("std", &StatFeatures::std)
        .def_readonly("dominant_frequency", &StatFeatures::dominant_frequency)
        .def_readonly("min", &StatFeatures::min)
        .def_readonly("max", &StatFeatures::max)
        .def_readonly("median", &StatFeatures::median)
        .def_readonly("q25", &StatFeatures::q25)
        .def_readonly("q75", &StatFeatures::q75)
        .def_readonly("skewness", &StatFeatures::skewness)
        .def_readonly("kurtosis", &StatFeatures::kurtosis)
        .def_readonly("energy", &StatFeatures::energy)
        .def_readonly("zero_crossing_rate", &StatFeatures::zero_crossing_rate)
        .def("__repr__", [](const StatFeatures& f) { return render_stat_text(f); });

    m.def("compute_stat_features", &compute_stat_features, py::arg("signal"), py::arg("sample_rate"));
    m.def("render_stat_text", &render_stat_text);

    py::class_<TextualDescription>(m, "TextualDescription")
        .def_readonly("channel_label", &TextualDescription::channel_label)
        .def_readonly("amplitude_phrase", &TextualDescription::amplitude_phrase)
        .def_readonly("waveform_phrase", &TextualDescription::waveform_phrase)
        .def_readonly("trend_phrase", &TextualDescription::trend_phrase)
        .def_readonly("rendered", &TextualDescription::rendered)
        .def_static("from_rendered", &TextualDescription::from_rendered, py::arg("label"),
                    py::arg("text"));
    m.def("describe_channel", &describe_channel, py::arg("window"), py::arg("channel"));

    // Prompts and judges
    py::class_<EdgePrompt>(m, "EdgePrompt")
        .def_readonly("node_i_text", &EdgePrompt::node_i_text)
        .def_readonly("node_j_text", &EdgePrompt::node_j_text)
        .def_readonly("question", &EdgePrompt::question)
        .def_readonly("rendered", &EdgePrompt::rendered);
    m.def("build_prompt", &build_prompt, py::arg("desc_i"), py::arg("stats_i"), py::arg("desc_j"),
          py::arg("stats_j"));
    m.def(
        "edge_prompt",
        [](const EegWindow& w, int i, int j) {
            return build_prompt(describe_channel(w, i),
                                compute_stat_features(w.channel(i), w.sample_rate()),
                                describe_channel(w, j),
                                compute_stat_features(w.channel(j), w.sample_rate()));
        },
        py::arg("window"), py::arg("i"), py::arg("j"),
        "Prompt for the channel pair (i, j) using the deterministic describer.");
    m.def("parse_verdict", [](const std::string& raw) { return decision_name(parse_verdict(raw)); });

    py::class_<Judge>(m, "Judge")
        .def(py::init([](const std::string& kind, const std::string& endpoint,
                         const std::string& model, const std::string& api_key,
                         const std::string& cache_dir, int max_parallel, int max_retries,
                         int timeout_ms, double rate_limit_per_s) {
                 JudgeConfig cfg;
                 cfg.kind = kind_from_string(kind);
                 cfg.endpoint = endpoint;
                 cfg.model = model;
                 cfg.api_key = api_key;
                 cfg.cache_dir = cache_dir;
                 cfg.max_parallel = max_parallel;
                 cfg.max_retries = max_retries;
                 cfg.timeout_ms = timeout_ms;
                 cfg.rate_limit_per_s = rate_limit_per_s;
                 if (cfg.kind == JudgeKind::Remote) cfg = with_env_defaults(cfg);
                 return std::make_unique<Judge>(cfg);
             }),
             py::arg("kind") = "mock", py::arg("endpoint") = "", py::arg("model") = "",
             py::arg("api_key") = "", py::arg("cache_dir") = "", py::arg("max_parallel") = 4,
             py::arg("max_retries") = 2, py::arg("timeout_ms") = 30000,
             py::arg("rate_limit_per_s") = 5.0)
        .def(
            "judge",
            [](Judge& j, const EdgePrompt& prompt) {
                const JudgeVerdict v = j.judge(prompt);
                return py::make_tuple(decision_name(v.decision), v.raw_response, v.cache_hit);
            },
            py::arg("prompt"), "Returns (decision, raw_response, cache_hit).")
        .def_property_readonly("network_calls", &Judge::network_calls);

    m.def(
        "refine",
        [](const Eigen::MatrixXd& initial, const EegWindow& window, Judge& judge) {
            Graph g;
            g.weights = initial;
            g.window_index = window.window_index();
            const RefineResult result = refine(g, window, judge);
            std::vector<py::tuple> log;
            log.reserve(result.log.size());
            for (const auto& r : result.log)
                log.push_back(py::make_tuple(r.i, r.j, decision_name(r.decision), r.raw_response));
            return py::make_tuple(Eigen::MatrixXd(result.refined.weights), result.warnings, log);
        },
        py::arg("initial"), py::arg("window"), py::arg("judge"),
        "Judge every existing edge; returns (refined_weights, warnings, log).");

    // Stage-1 predictor and baselines
    m.def(
        "threshold_edges",
        [](const Eigen::MatrixXd& probs, double phi) -> Eigen::MatrixXd {
            ProbGraph p;
            p.probs = probs;
            return threshold_edges(p, phi).weights;
        },
        py::arg("probs"), py::arg("phi"));
    m.def(
        "correlation_graph",
        [](const EegWindow& w, double phi) -> Eigen::MatrixXd {
            return correlation_graph(w, phi).weights;
        },
        py::arg("window"), py::arg("phi"));
    m.def(
        "distance_graph",
        [](double phi_dist) -> Eigen::MatrixXd {
            return distance_graph(standard_montage(), phi_dist).weights;
        },
        py::arg("phi_dist"));
    m.def(
        "knn_graph",
        [](const EegWindow& w, int k) -> Eigen::MatrixXd { return knn_graph(w, k).weights; },
        py::arg("window"), py::arg("k"));

    py::class_<TrainedPredictor>(m, "Predictor")
        .def_static(
            "train",
            [](const std::vector<EegWindow>& windows, const std::vector<Eigen::MatrixXd>& labels,
               int patch_len, int d_model, int n_heads, int n_layers, int feedforward_dim,
               std::uint64_t seed, int epochs, int batch_size, double learning_rate,
               double momentum, int head_hidden, int n_threads) {
                EncoderConfig cfg{patch_len, d_model, n_heads, n_layers, feedforward_dim, seed};
                TrainHyper hyper{epochs, batch_size, learning_rate, momentum, head_hidden, n_threads};
                return train_predictor(windows, labels, cfg, hyper);
            },
            py::arg("windows"), py::arg("labels"), py::arg("patch_len") = 25,
            py::arg("d_model") = 32, py::arg("n_heads") = 4, py::arg("n_layers") = 1,
            py::arg("feedforward_dim") = 64, py::arg("seed") = 1, py::arg("epochs") = 30,
            py::arg("batch_size") = 8, py::arg("learning_rate") = 1e-2, py::arg("momentum") = 0.9,
            py::arg("head_hidden") = 32, py::arg("n_threads") = 4)
        .def(
            "predict_probs",
            [](const TrainedPredictor& model, const EegWindow& w) -> Eigen::MatrixXd {
                return predict_prob_graph(w, model).probs;
            },
            py::arg("window"))
        .def_property_readonly("loss_curve",
                               [](const TrainedPredictor& m_) { return m_.loss_curve; })
        .def("to_json", &checkpoint_to_json)
        .def_static("from_json", &checkpoint_from_json);

    // Metrics
    m.def("sparsity", [](const Eigen::MatrixXd& weights) {
        Graph g;
        g.weights = weights;
        return sparsity(g);
    });
    m.def("jsd", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        Graph ga, gb;
        ga.weights = a;
        gb.weights = b;
        return jsd(ga, gb);
    });
    m.def("mean_series_jsd", [](const std::vector<Eigen::MatrixXd>& series) {
        return mean_series_jsd(series_from_matrices(series, "series"));
    });
    m.def("edge_difference", [](const std::vector<Eigen::MatrixXd>& a,
                                const std::vector<Eigen::MatrixXd>& b) {
        return edge_difference(series_from_matrices(a, "a"), series_from_matrices(b, "b"));
    });
    m.def("node_importance", [](const std::vector<Eigen::MatrixXd>& series) -> Eigen::MatrixXd {
        return node_importance(series_from_matrices(series, "series"));
    });
    m.def(
        "detection_proxy_score",
        [](const std::vector<Eigen::MatrixXd>& series, const std::vector<bool>& labels,
           const std::vector<std::string>& scheduled_lobes, double train_fraction) {
            std::vector<Lobe> lobes;
            for (const auto& name : scheduled_lobes) {
                if (name == "Frontal") lobes.push_back(Lobe::Frontal);
                else if (name == "Temporal") lobes.push_back(Lobe::Temporal);
                else if (name == "Central") lobes.push_back(Lobe::Central);
                else if (name == "Parietal") lobes.push_back(Lobe::Parietal);
                else if (name == "Occipital") lobes.push_back(Lobe::Occipital);
                else throw std::invalid_argument("unknown lobe '" + name + "'");
            }
            const DetectionScore s = detection_proxy_score(series_from_matrices(series, "series"),
                                                           labels, standard_montage(), lobes,
                                                           train_fraction);
            py::dict out;
            out["f1"] = s.f1;
            out["accuracy"] = s.accuracy;
            out["recall"] = s.recall;
            out["precision"] = s.precision;
            out["threshold"] = s.threshold;
            return out;
        },
        py::arg("series"), py::arg("seizure_labels"), py::arg("scheduled_lobes"),
        py::arg("train_fraction") = 0.7);
    m.def("auc", [](const std::vector<double>& scores, const std::vector<bool>& labels) {
        std::vector<char> l(labels.begin(), labels.end());
        return auc(scores, l);
    });
}
