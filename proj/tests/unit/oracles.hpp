// Brute-force reference implementations used only by tests. Everything here
// is written with explicit loops, independent of the library code paths it
// checks.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "eegraph/features.hpp"

namespace oracles {

inline double mean(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double quantile_type7(std::vector<double> x, double q) {
    std::sort(x.begin(), x.end());
    const double pos = q * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<size_t>(std::floor(pos));
    const auto hi = static_cast<size_t>(std::ceil(pos));
    return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

inline eegraph::StatFeatures stat_features(const std::vector<double>& x, double sample_rate) {
    const auto n = x.size();
    eegraph::StatFeatures f;
    f.mean_amplitude = mean(x);

    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - f.mean_amplitude;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    f.std = std::sqrt(m2);
    if (f.std > 0) {
        f.skewness = m3 / (f.std * f.std * f.std);
        f.kurtosis = m4 / (m2 * m2);
    }

    f.min = *std::min_element(x.begin(), x.end());
    f.max = *std::max_element(x.begin(), x.end());
    f.q25 = quantile_type7(x, 0.25);
    f.median = quantile_type7(x, 0.50);
    f.q75 = quantile_type7(x, 0.75);

    f.energy = 0;
    for (double v : x) f.energy += v * v;

    int crossings = 0;
    int prev = 0;
    for (double v : x) {
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) s = prev;
        if (prev != 0 && s != prev) ++crossings;
        prev = s;
    }
    f.zero_crossing_rate = crossings;

    // Full O(n^2) DFT; max-power non-DC bin, ties toward the lower bin.
    double best_power = 0;
    size_t best_bin = 0;
    for (size_t k = 1; k <= n / 2; ++k) {
        std::complex<double> acc(0, 0);
        for (size_t s = 0; s < n; ++s) {
            const double angle = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(s) /
                                 static_cast<double>(n);
            acc += x[s] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        const double power = std::norm(acc);
        if (power > best_power) {
            best_power = power;
            best_bin = k;
        }
    }
    f.dominant_frequency =
        best_bin == 0 ? 0.0
                      : static_cast<double>(best_bin) * sample_rate / static_cast<double>(n);
    return f;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean(x), my = mean(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0;
    return sxy / std::sqrt(sxx * syy);
}

inline std::vector<double> to_vec(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

}  // namespace oracles
