#pragma once

#include <functional>
#include <vector>

#include "eegraph/graph.hpp"
#include "eegraph/judge.hpp"
#include "eegraph/window.hpp"

namespace eegraph {

struct EdgeVerdictRecord {
    int window_index = 0;
    int i = 0;
    int j = 0;
    Decision decision = Decision::Keep;  // decision actually applied
    std::string raw_response;
    bool cache_hit = false;
    bool ambiguous_fail_open = false;  // kept after two ambiguous responses
};

struct RefineResult {
    Graph refined;
    std::vector<EdgeVerdictRecord> log;  // one row per initial edge, ordered by (i, j)
    int warnings = 0;                    // ambiguous fail-open count
};

/// Custom channel describer hook (the deterministic template describer is
/// the default; a remote describer can be swapped in behind it).
using DescriberFn = std::function<TextualDescription(const EegWindow&, int)>;

/// Edge refinement over one window: every existing edge is prompted and
/// judged; "yes" keeps the Stage-1 weight, "no" zeroes it, and no edge is
/// ever added. An ambiguous verdict is retried once (bypassing the cache) and
/// then kept with a warning. Judgments run on up to config().max_parallel
/// threads; the result is independent of scheduling order. A judge hard
/// failure aborts with the failing edge identified (completed verdicts stay
/// in the cache).
RefineResult refine(const Graph& initial, const EegWindow& window, Judge& judge,
                    const DescriberFn& describer = {});

/// One-shot form constructing a transient judge from the config.
RefineResult refine(const Graph& initial, const EegWindow& window, const JudgeConfig& cfg);

}  // namespace eegraph
