#include "eegraph/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

namespace eegraph {

namespace {

// Type-7 quantile: linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
    const auto n = sorted.size();
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<size_t>(std::floor(pos));
    const auto hi = static_cast<size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    double r = std::round(v * scale) / scale;
    if (r == 0.0) r = 0.0;  // normalize -0.0
    return r;
}

}  // namespace

StatFeatures compute_stat_features(const Eigen::VectorXd& signal, double sample_rate) {
    const auto n = signal.size();
    if (n < 2) throw std::invalid_argument("feature extraction needs at least 2 samples");
    if (!signal.allFinite()) throw std::invalid_argument("feature extraction: non-finite input");
    if (sample_rate <= 0) throw std::invalid_argument("feature extraction: sample rate must be positive");

    StatFeatures f;
    f.mean_amplitude = signal.mean();

    const Eigen::ArrayXd centered = signal.array() - f.mean_amplitude;
    const double m2 = centered.square().mean();
    f.std = std::sqrt(m2);
    if (f.std > 0) {
        f.skewness = centered.cube().mean() / (f.std * f.std * f.std);
        f.kurtosis = centered.pow(4).mean() / (m2 * m2);
    }

    f.min = signal.minCoeff();
    f.max = signal.maxCoeff();
    f.energy = signal.squaredNorm();

    std::vector<double> sorted(signal.data(), signal.data() + n);
    std::sort(sorted.begin(), sorted.end());
    f.q25 = quantile(sorted, 0.25);
    f.median = quantile(sorted, 0.50);
    f.q75 = quantile(sorted, 0.75);

    int crossings = 0;
    int prev_sign = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        int s = signal(i) > 0 ? 1 : (signal(i) < 0 ? -1 : 0);
        if (s == 0) s = prev_sign;  // a zero sample inherits the previous sign
        if (prev_sign != 0 && s != prev_sign) ++crossings;
        prev_sign = s;
    }
    f.zero_crossing_rate = crossings;

    Eigen::FFT<double> fft;
    std::vector<double> in(signal.data(), signal.data() + n);
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, in);
    const auto n_bins = static_cast<size_t>(n) / 2;  // non-DC bins 1..floor(n/2)
    double best_power = 0.0;
    size_t best_bin = 0;
    for (size_t k = 1; k <= n_bins; ++k) {
        const double power = std::norm(spectrum[k]);
        if (power > best_power) {  // strict: ties keep the lower frequency
            best_power = power;
            best_bin = k;
        }
    }
    f.dominant_frequency =
        best_bin == 0 ? 0.0 : static_cast<double>(best_bin) * sample_rate / static_cast<double>(n);
    return f;
}

std::string render_stat_text(const StatFeatures& f) {
    const StatFeatures r = rounded_for_text(f);
    return fmt::format(
        "Mean amplitude: {:.1f} µV, Std: {:.1f} µV, Dominant frequency: {:.1f} Hz, "
        "Min: {:.1f} µV, Max: {:.1f} µV, Median: {:.1f} µV, Q25: {:.1f} µV, Q75: {:.1f} µV, "
        "Skewness: {:.2f}, Kurtosis: {:.1f}, Energy: {:.1f}, Zero-crossing rate: {}.",
        r.mean_amplitude, r.std, r.dominant_frequency, r.min, r.max, r.median, r.q25, r.q75,
        r.skewness, r.kurtosis, r.energy, r.zero_crossing_rate);
}

StatFeatures rounded_for_text(const StatFeatures& f) {
    StatFeatures r = f;
    r.mean_amplitude = round_to(f.mean_amplitude, 1);
    r.std = round_to(f.std, 1);
    r.dominant_frequency = round_to(f.dominant_frequency, 1);
    r.min = round_to(f.min, 1);
    r.max = round_to(f.max, 1);
    r.median = round_to(f.median, 1);
    r.q25 = round_to(f.q25, 1);
    r.q75 = round_to(f.q75, 1);
    r.skewness = round_to(f.skewness, 2);
    r.kurtosis = round_to(f.kurtosis, 1);
    r.energy = round_to(f.energy, 1);
    return r;
}

namespace {

double take_number(const std::string& text, size_t& pos, const std::string& label) {
    const auto at = text.find(label, pos);
    if (at == std::string::npos)
        throw std::invalid_argument("stat line missing field '" + label + "'");
    size_t start = at + label.size();
    size_t end = start;
    while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) ||
                                 text[end] == '-' || text[end] == '+' || text[end] == '.'))
        ++end;
    if (end == start) throw std::invalid_argument("stat line has no number after '" + label + "'");
    pos = end;
    return std::stod(text.substr(start, end - start));
}

}  // namespace

StatFeatures parse_stat_text(const std::string& text) {
    StatFeatures f;
    size_t pos = 0;
    f.mean_amplitude = take_number(text, pos, "Mean amplitude: ");
    f.std = take_number(text, pos, "Std: ");
    f.dominant_frequency = take_number(text, pos, "Dominant frequency: ");
    f.min = take_number(text, pos, "Min: ");
    f.max = take_number(text, pos, "Max: ");
    f.median = take_number(text, pos, "Median: ");
    f.q25 = take_number(text, pos, "Q25: ");
    f.q75 = take_number(text, pos, "Q75: ");
    f.skewness = take_number(text, pos, "Skewness: ");
    f.kurtosis = take_number(text, pos, "Kurtosis: ");
    f.energy = take_number(text, pos, "Energy: ");
    f.zero_crossing_rate = static_cast<int>(take_number(text, pos, "Zero-crossing rate: "));
    return f;
}

}  // namespace eegraph
