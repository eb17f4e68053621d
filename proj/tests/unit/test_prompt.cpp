#include <doctest.h>

#include <fstream>

#include "eegraph/prompt.hpp"

using namespace eegraph;

namespace {

std::string read_golden(const std::string& name) {
    std::ifstream in(std::string(EEGRAPH_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

StatFeatures f3_features() {
    StatFeatures f;
    f.mean_amplitude = 12.3;
    f.std = 4.5;
    f.dominant_frequency = 8.5;
    f.min = -6.2;
    f.max = 22.7;
    f.median = 10.1;
    f.q25 = 7.8;
    f.q75 = 14.5;
    f.skewness = 0.32;
    f.kurtosis = 2.1;
    f.energy = 1532.6;
    f.zero_crossing_rate = 42;
    return f;
}

StatFeatures t4_features() {
    StatFeatures f;
    f.mean_amplitude = 18.2;
    f.std = 5.1;
    f.dominant_frequency = 4.2;
    f.min = -3.1;
    f.max = 25.8;
    f.median = 17.4;
    f.q25 = 15.0;
    f.q75 = 20.2;
    f.skewness = -0.15;
    f.kurtosis = 2.7;
    f.energy = 2018.3;
    f.zero_crossing_rate = 33;
    return f;
}

TextualDescription f3_description() {
    TextualDescription d;
    d.channel_label = "F3";
    d.lobe_phrase = "frontal lobe";
    d.amplitude_phrase = "moderate";
    d.waveform_phrase = "intermittent sharp spikes";
    d.trend_phrase = "an increasing trend in amplitude";
    d.rendered =
        "Channel F3, located in the frontal lobe, shows moderate amplitude with intermittent "
        "sharp spikes. The EEG signal exhibits an increasing trend in amplitude over the "
        "observed time window.";
    return d;
}

TextualDescription t4_description() {
    // Free-form text as a remote describer would produce it.
    return TextualDescription::from_rendered(
        "T4",
        "Channel T4, located in the temporal lobe, shows high amplitude with pronounced "
        "rhythmic slowing. The EEG signal displays a stable pattern with occasional bursts "
        "throughout the observed time window.");
}

}  // namespace

TEST_CASE("the F3/T4 prompt reproduces the golden file byte-exactly") {
    const EdgePrompt prompt =
        build_prompt(f3_description(), f3_features(), t4_description(), t4_features());
    CHECK(prompt.rendered == read_golden("prompt_f3_t4.txt"));
}

TEST_CASE("prompt layout: two node blocks, a blank line between, the fixed question") {
    const EdgePrompt prompt =
        build_prompt(f3_description(), f3_features(), t4_description(), t4_features());
    CHECK(prompt.node_i_text.starts_with("Node $i$: Channel F3"));
    CHECK(prompt.node_j_text.starts_with("Node $j$: Channel T4"));
    CHECK(prompt.rendered ==
          prompt.node_i_text + "\n\n" + prompt.node_j_text + "\n\n" + prompt.question);
    CHECK(prompt.rendered.ends_with("based on the context above."));
    CHECK(prompt.question == kEdgeQuestion);
}

TEST_CASE("identical node inputs produce two identical blocks") {
    const EdgePrompt prompt =
        build_prompt(f3_description(), f3_features(), f3_description(), f3_features());
    CHECK(prompt.node_i_text.substr(9) == prompt.node_j_text.substr(9));  // after "Node $x$:"
}
