#include <doctest.h>

#include <fstream>
#include <random>

#include "eegraph/features.hpp"
#include "oracles.hpp"

using namespace eegraph;

namespace {

std::string read_golden(const std::string& name) {
    std::ifstream in(std::string(EEGRAPH_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

bool close(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("constant zero signal degenerates to all-zero features") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(256);
    const StatFeatures f = compute_stat_features(zero, 250.0);
    CHECK(f.mean_amplitude == 0.0);
    CHECK(f.std == 0.0);
    CHECK(f.min == 0.0);
    CHECK(f.max == 0.0);
    CHECK(f.median == 0.0);
    CHECK(f.q25 == 0.0);
    CHECK(f.q75 == 0.0);
    CHECK(f.skewness == 0.0);
    CHECK(f.kurtosis == 0.0);
    CHECK(f.energy == 0.0);
    CHECK(f.zero_crossing_rate == 0);
    CHECK(f.dominant_frequency == 0.0);
}

TEST_CASE("alternating signal hits the Nyquist bin") {
    Eigen::VectorXd x(4);
    x << 1, -1, 1, -1;
    const StatFeatures f = compute_stat_features(x, 4.0);
    CHECK(f.mean_amplitude == 0.0);
    CHECK(f.std == 1.0);
    CHECK(f.energy == 4.0);
    CHECK(f.zero_crossing_rate == 3);
    CHECK(f.dominant_frequency == 2.0);
}

TEST_CASE("zero samples inherit the previous sign") {
    Eigen::VectorXd x(6);
    x << 1, 0, -1, 0, 0, 2;  // crossings: 1->-1 and -1->2
    CHECK(compute_stat_features(x, 10.0).zero_crossing_rate == 2);

    Eigen::VectorXd leading(4);
    leading << 0, 0, 1, -1;  // leading zeros carry no sign
    CHECK(compute_stat_features(leading, 10.0).zero_crossing_rate == 1);
}

TEST_CASE("all fields match the brute-force oracle on 100 seeded signals") {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_int_distribution<int> length(16, 400);
    std::uniform_real_distribution<double> scale(0.1, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = length(rng);
        const double amp = scale(rng);
        std::vector<double> x(static_cast<size_t>(n));
        for (auto& v : x) v = amp * noise(rng);

        const double fs = 100.0 + 100.0 * (trial % 3);
        const StatFeatures got =
            compute_stat_features(Eigen::Map<const Eigen::VectorXd>(x.data(), n), fs);
        const StatFeatures want = oracles::stat_features(x, fs);

        CHECK(close(got.mean_amplitude, want.mean_amplitude));
        CHECK(close(got.std, want.std));
        CHECK(close(got.dominant_frequency, want.dominant_frequency));
        CHECK(close(got.min, want.min));
        CHECK(close(got.max, want.max));
        CHECK(close(got.median, want.median));
        CHECK(close(got.q25, want.q25));
        CHECK(close(got.q75, want.q75));
        CHECK(close(got.skewness, want.skewness));
        CHECK(close(got.kurtosis, want.kurtosis));
        CHECK(close(got.energy, want.energy));
        CHECK(got.zero_crossing_rate == want.zero_crossing_rate);
    }
}

TEST_CASE("scale equivariance") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::VectorXd x(200);
    for (int i = 0; i < x.size(); ++i) x(i) = noise(rng) + 0.3;
    const double c = 3.5;
    const StatFeatures base = compute_stat_features(x, 100.0);
    const StatFeatures scaled = compute_stat_features(c * x, 100.0);
    CHECK(scaled.mean_amplitude == doctest::Approx(c * base.mean_amplitude).epsilon(1e-12));
    CHECK(scaled.std == doctest::Approx(c * base.std).epsilon(1e-12));
    CHECK(scaled.energy == doctest::Approx(c * c * base.energy).epsilon(1e-12));
    CHECK(scaled.skewness == doctest::Approx(base.skewness).epsilon(1e-9));
    CHECK(scaled.kurtosis == doctest::Approx(base.kurtosis).epsilon(1e-9));
    CHECK(scaled.zero_crossing_rate == base.zero_crossing_rate);
    CHECK(scaled.dominant_frequency == base.dominant_frequency);
}

TEST_CASE("order statistics are ordered") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::VectorXd x(37);
        for (int i = 0; i < x.size(); ++i) x(i) = u(rng);
        const StatFeatures f = compute_stat_features(x, 50.0);
        CHECK(f.min <= f.q25);
        CHECK(f.q25 <= f.median);
        CHECK(f.median <= f.q75);
        CHECK(f.q75 <= f.max);
    }
}

TEST_CASE("bad inputs are rejected") {
    CHECK_THROWS(compute_stat_features(Eigen::VectorXd::Zero(1), 10.0));
    Eigen::VectorXd bad(4);
    bad << 1, 2, std::numeric_limits<double>::infinity(), 3;
    CHECK_THROWS(compute_stat_features(bad, 10.0));
}

TEST_CASE("stat line renders the golden F3 values byte-exactly") {
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
    CHECK(render_stat_text(f) == read_golden("stat_line_f3.txt"));
}

TEST_CASE("all-zero features render zeros") {
    const std::string text = render_stat_text(StatFeatures{});
    CHECK(text.starts_with("Mean amplitude: 0.0 µV, Std: 0.0 µV,"));
    CHECK(text.ends_with("Zero-crossing rate: 0."));
    // tiny negatives never render as -0.0
    StatFeatures f;
    f.mean_amplitude = -0.01;
    CHECK(render_stat_text(f).starts_with("Mean amplitude: 0.0 µV"));
}

TEST_CASE("parse(render(f)) equals the rounded features") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int trial = 0; trial < 50; ++trial) {
        StatFeatures f;
        f.mean_amplitude = u(rng);
        f.std = std::abs(u(rng));
        f.dominant_frequency = std::abs(u(rng));
        f.min = u(rng);
        f.max = u(rng);
        f.median = u(rng);
        f.q25 = u(rng);
        f.q75 = u(rng);
        f.skewness = u(rng) / 50;
        f.kurtosis = std::abs(u(rng)) / 10;
        f.energy = std::abs(u(rng)) * 100;
        f.zero_crossing_rate = static_cast<int>(std::abs(u(rng)));

        const StatFeatures parsed = parse_stat_text(render_stat_text(f));
        const StatFeatures rounded = rounded_for_text(f);
        CHECK(parsed.mean_amplitude == rounded.mean_amplitude);
        CHECK(parsed.std == rounded.std);
        CHECK(parsed.dominant_frequency == rounded.dominant_frequency);
        CHECK(parsed.min == rounded.min);
        CHECK(parsed.max == rounded.max);
        CHECK(parsed.median == rounded.median);
        CHECK(parsed.q25 == rounded.q25);
        CHECK(parsed.q75 == rounded.q75);
        CHECK(parsed.skewness == rounded.skewness);
        CHECK(parsed.kurtosis == rounded.kurtosis);
        CHECK(parsed.energy == rounded.energy);
        CHECK(parsed.zero_crossing_rate == rounded.zero_crossing_rate);
    }
}

TEST_CASE("parse rejects junk") {
    CHECK_THROWS(parse_stat_text("not a stat line"));
}
