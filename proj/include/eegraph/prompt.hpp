#pragma once

#include <string>

#include "eegraph/describe.hpp"
#include "eegraph/features.hpp"

namespace eegraph {

/// The question appended to every edge prompt, byte-pinned by a golden test.
extern const char* const kEdgeQuestion;

/// One edge-refinement inquiry: two node blocks and the fixed question,
/// separated by blank lines.
struct EdgePrompt {
    std::string node_i_text;
    std::string node_j_text;
    std::string question;
    std::string rendered;
};

/// "Node $i$: " + description + " " + rendered statistics, same for node j,
/// then the question. Purely deterministic string assembly.
EdgePrompt build_prompt(const TextualDescription& desc_i, const StatFeatures& stats_i,
                        const TextualDescription& desc_j, const StatFeatures& stats_j);

}  // namespace eegraph
