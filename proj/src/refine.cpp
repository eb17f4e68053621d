#include "eegraph/refine.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "eegraph/describe.hpp"
#include "eegraph/features.hpp"
#include "eegraph/prompt.hpp"

namespace eegraph {

RefineResult refine(const Graph& initial, const EegWindow& window, Judge& judge,
                    const DescriberFn& describer) {
    initial.validate();
    if (initial.size() != window.n_channels())
        throw std::invalid_argument("refine: graph size does not match window channels");

    const int n = initial.size();
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (initial.weights(i, j) > 0.0) edges.emplace_back(i, j);

    RefineResult result;
    result.refined.weights = initial.weights;
    result.refined.window_index = window.window_index();
    if (edges.empty()) return result;

    // Features and descriptions are per channel, shared across edges.
    std::vector<StatFeatures> stats(static_cast<size_t>(n));
    std::vector<TextualDescription> descs(static_cast<size_t>(n));
    std::vector<bool> needed(static_cast<size_t>(n), false);
    for (const auto& [i, j] : edges) needed[static_cast<size_t>(i)] = needed[static_cast<size_t>(j)] = true;
    for (int c = 0; c < n; ++c) {
        if (!needed[static_cast<size_t>(c)]) continue;
        stats[static_cast<size_t>(c)] = compute_stat_features(window.channel(c), window.sample_rate());
        descs[static_cast<size_t>(c)] = describer ? describer(window, c) : describe_channel(window, c);
    }

    result.log.resize(edges.size());
    std::atomic<size_t> next_edge{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string error_message;

    auto worker = [&]() {
        while (!failed.load()) {
            const size_t e = next_edge.fetch_add(1);
            if (e >= edges.size()) return;
            const auto [i, j] = edges[e];
            try {
                const EdgePrompt prompt =
                    build_prompt(descs[static_cast<size_t>(i)], stats[static_cast<size_t>(i)],
                                 descs[static_cast<size_t>(j)], stats[static_cast<size_t>(j)]);
                JudgeVerdict verdict = judge.judge(prompt);
                bool fail_open = false;
                if (verdict.decision == Decision::Ambiguous) {
                    verdict = judge.judge(prompt, /*bypass_cache=*/true);
                    if (verdict.decision == Decision::Ambiguous) fail_open = true;
                }
                auto& row = result.log[e];
                row.window_index = window.window_index();
                row.i = i;
                row.j = j;
                row.raw_response = verdict.raw_response;
                row.cache_hit = verdict.cache_hit;
                row.ambiguous_fail_open = fail_open;
                row.decision = fail_open ? Decision::Keep : verdict.decision;
            } catch (const std::exception& ex) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true))
                    error_message = "refine: judging edge (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") of window " +
                                    std::to_string(window.window_index()) + " failed: " + ex.what();
                return;
            }
        }
    };

    const int n_workers =
        std::max(1, std::min<int>(judge.config().max_parallel, static_cast<int>(edges.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw JudgeError(error_message);

    for (size_t e = 0; e < edges.size(); ++e) {
        const auto& row = result.log[e];
        if (row.decision == Decision::Remove)
            result.refined.weights(row.i, row.j) = result.refined.weights(row.j, row.i) = 0.0;
        if (row.ambiguous_fail_open) ++result.warnings;
    }
    return result;
}

RefineResult refine(const Graph& initial, const EegWindow& window, const JudgeConfig& cfg) {
    Judge judge(cfg);
    return refine(initial, window, judge);
}

}  // namespace eegraph
