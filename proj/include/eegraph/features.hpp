#pragma once

#include <Eigen/Core>
#include <string>

namespace eegraph {

/// The 12 per-channel window statistics, in the order they are rendered.
struct StatFeatures {
    double mean_amplitude = 0;    // µV
    double std = 0;               // µV, population
    double dominant_frequency = 0;  // Hz, max-power non-DC bin (0 for silent signals)
    double min = 0;               // µV
    double max = 0;               // µV
    double median = 0;            // µV
    double q25 = 0;               // µV
    double q75 = 0;               // µV
    double skewness = 0;          // m3 / std^3, 0 when std == 0
    double kurtosis = 0;          // m4 / std^4, 0 when std == 0
    double energy = 0;            // µV^2, sum of squares
    int zero_crossing_rate = 0;   // strict sign changes; zeros inherit the previous sign
};

/// Computes all 12 statistics over one window of one channel.
/// Quantiles use linear interpolation between order statistics; the dominant
/// frequency is the max-power non-DC DFT bin with ties broken toward the
/// lower frequency. Throws on signals shorter than 2 samples or non-finite
/// input.
StatFeatures compute_stat_features(const Eigen::VectorXd& signal, double sample_rate);

/// Renders the fixed one-line summary, e.g.
/// "Mean amplitude: 12.3 µV, Std: 4.5 µV, ..., Zero-crossing rate: 42."
/// µV/Hz fields and energy carry one decimal, skewness two, kurtosis one.
std::string render_stat_text(const StatFeatures& f);

/// Inverse of render_stat_text for round-trip checks and log scraping.
/// Throws std::invalid_argument when the line does not match the template.
StatFeatures parse_stat_text(const std::string& text);

/// The features with every field rounded to its rendered precision
/// (parse_stat_text(render_stat_text(f)) == rounded_for_text(f)).
StatFeatures rounded_for_text(const StatFeatures& f);

}  // namespace eegraph
