#include <doctest.h>

#include <random>

#include "eegraph/baselines.hpp"
#include "eegraph/synth.hpp"

using namespace eegraph;

namespace {

SynthSpec tiny_spec() {
    SynthSpec spec;
    spec.seed = 7;
    spec.n_windows = 3;
    spec.window_seconds = 2.0;
    spec.sample_rate = 125.0;
    spec.planted_edges = {{"F3", "F4"}};
    spec.noise_std = 0.0;
    return spec;
}

}  // namespace

TEST_CASE("noise-free planted pair is perfectly correlated") {
    const auto windows = generate_synthetic(tiny_spec());
    const Montage& m = standard_montage();
    const double r = pearson(windows[0].channel(m.index_of("F3")),
                             windows[0].channel(m.index_of("F4")));
    CHECK(r == 1.0);
}

TEST_CASE("same spec and seed give bit-identical output") {
    SynthSpec spec = tiny_spec();
    spec.noise_std = 1.0;
    spec.artifact.rate = 0.2;
    spec.seizure_schedule = {{1, 3, {Lobe::Frontal}}};
    const auto a = generate_synthetic(spec);
    const auto b = generate_synthetic(spec);
    REQUIRE(a.size() == b.size());
    for (size_t w = 0; w < a.size(); ++w) CHECK(a[w].data() == b[w].data());

    SynthSpec other = spec;
    other.seed = spec.seed + 1;
    const auto c = generate_synthetic(other);
    CHECK(a[0].data() != c[0].data());
}

TEST_CASE("noisy planted pair stays strongly correlated, unplanted pairs do not") {
    SynthSpec spec = tiny_spec();
    spec.noise_std = 1.0;
    spec.source_amplitude = 10.0;
    // expected |r| ~ (A^2/2) / (A^2/2 + noise^2) = 50/51, far above the bound
    const auto windows = generate_synthetic(spec);
    const Montage& m = standard_montage();
    for (const auto& w : windows) {
        CHECK(pearson(w.channel(m.index_of("F3")), w.channel(m.index_of("F4"))) > 0.9);
        const double r_unplanted = pearson(w.channel(m.index_of("O1")), w.channel(m.index_of("O2")));
        CHECK(r_unplanted > -0.3);
        CHECK(r_unplanted < 0.3);
    }
}

TEST_CASE("planted-correlation property holds for random noise-free specs") {
    std::mt19937_64 rng(99);
    const auto labels = standard_montage().labels();
    for (int trial = 0; trial < 10; ++trial) {
        SynthSpec spec;
        spec.seed = rng();
        spec.n_windows = 2;
        spec.window_seconds = 1.0;
        spec.sample_rate = 100.0;
        spec.noise_std = 0.0;
        // a few random edges, possibly sharing channels
        std::uniform_int_distribution<int> pick(0, static_cast<int>(labels.size()) - 1);
        for (int e = 0; e < 4; ++e) {
            const int a = pick(rng);
            int b = pick(rng);
            while (b == a) b = pick(rng);
            spec.planted_edges.emplace_back(labels[static_cast<size_t>(a)],
                                            labels[static_cast<size_t>(b)]);
        }
        const auto windows = generate_synthetic(spec);
        const Montage& m = standard_montage();
        for (const auto& w : windows) {
            for (const auto& [la, lb] : spec.planted_edges) {
                const double r = pearson(w.channel(m.index_of(la)), w.channel(m.index_of(lb)));
                CHECK(std::abs(r) == 1.0);
            }
        }
    }
}

TEST_CASE("seizure schedule assigns lobes by consecutive segments") {
    SynthSpec spec = tiny_spec();
    spec.n_windows = 10;
    spec.seizure_schedule = {{2, 8, {Lobe::Frontal, Lobe::Temporal}}};
    CHECK_FALSE(active_lobe(spec, 1).has_value());
    CHECK(active_lobe(spec, 2) == Lobe::Frontal);
    CHECK(active_lobe(spec, 4) == Lobe::Frontal);
    CHECK(active_lobe(spec, 5) == Lobe::Temporal);
    CHECK(active_lobe(spec, 7) == Lobe::Temporal);
    CHECK_FALSE(active_lobe(spec, 8).has_value());

    const auto labels = seizure_labels(spec);
    CHECK(labels[1] == false);
    CHECK(labels[2] == true);
    CHECK(labels[7] == true);
    CHECK(labels[8] == false);
}

TEST_CASE("active-lobe channels carry the shared burst") {
    SynthSpec spec = tiny_spec();
    spec.n_windows = 2;
    spec.noise_std = 0.5;
    spec.seizure_schedule = {{1, 2, {Lobe::Temporal}}};
    const auto windows = generate_synthetic(spec);
    const Montage& m = standard_montage();
    const int t3 = m.index_of("T3");
    const int t4 = m.index_of("T4");
    // quiet window: T3 is pure noise; seizure window: burst dominates
    const double quiet_peak = windows[0].channel(t3).cwiseAbs().maxCoeff();
    const double ictal_peak = windows[1].channel(t3).cwiseAbs().maxCoeff();
    CHECK(ictal_peak > 10.0 * quiet_peak);
    // the burst is shared, so the unplanted temporal pair becomes correlated
    CHECK(std::abs(pearson(windows[1].channel(t3), windows[1].channel(t4))) > 0.8);
    CHECK(truth_adjacency(spec, m, 1)(t3, t4) == 1.0);
    CHECK(truth_adjacency(spec, m, 0)(t3, t4) == 0.0);
}

TEST_CASE("invalid specs are rejected with a description") {
    const Montage& m = standard_montage();
    SynthSpec spec = tiny_spec();
    spec.seizure_schedule = {{2, 9, {Lobe::Frontal}}};  // out of bounds for 3 windows
    CHECK_THROWS_AS(validate_spec(spec, m), std::invalid_argument);

    spec = tiny_spec();
    spec.seizure_schedule = {{0, 2, {}}};
    CHECK_THROWS_AS(validate_spec(spec, m), std::invalid_argument);

    spec = tiny_spec();
    spec.n_windows = 4;
    spec.seizure_schedule = {{0, 2, {Lobe::Frontal}}, {1, 3, {Lobe::Temporal}}};
    CHECK_THROWS_AS(validate_spec(spec, m), std::invalid_argument);

    spec = tiny_spec();
    spec.planted_edges = {{"F3", "F3"}};
    CHECK_THROWS_AS(validate_spec(spec, m), std::invalid_argument);

    spec = tiny_spec();
    spec.planted_edges = {{"F3", "ZZ"}};
    CHECK_THROWS(validate_spec(spec, m));
}

TEST_CASE("spec JSON round trip") {
    SynthSpec spec = default_benchmark_spec();
    const SynthSpec back = synth_spec_from_json(synth_spec_to_json(spec));
    CHECK(back.seed == spec.seed);
    CHECK(back.n_windows == spec.n_windows);
    CHECK(back.planted_edges == spec.planted_edges);
    REQUIRE(back.seizure_schedule.size() == spec.seizure_schedule.size());
    CHECK(back.seizure_schedule[0].lobes == spec.seizure_schedule[0].lobes);
    CHECK(back.artifact.rate == spec.artifact.rate);
    // round trip is stable byte-wise
    CHECK(synth_spec_to_json(back) == synth_spec_to_json(spec));
}
