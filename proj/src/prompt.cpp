#include "eegraph/prompt.hpp"

namespace eegraph {

const char* const kEdgeQuestion =
    "Question: Does a meaningful functional connection exist between Node $i$ and Node $j$ "
    "in this EEG segment? Answer yes or no, based on the context above.";

EdgePrompt build_prompt(const TextualDescription& desc_i, const StatFeatures& stats_i,
                        const TextualDescription& desc_j, const StatFeatures& stats_j) {
    EdgePrompt prompt;
    prompt.node_i_text = "Node $i$: " + desc_i.rendered + " " + render_stat_text(stats_i);
    prompt.node_j_text = "Node $j$: " + desc_j.rendered + " " + render_stat_text(stats_j);
    prompt.question = kEdgeQuestion;
    prompt.rendered = prompt.node_i_text + "\n\n" + prompt.node_j_text + "\n\n" + prompt.question;
    return prompt;
}

}  // namespace eegraph
