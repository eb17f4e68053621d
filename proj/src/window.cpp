#include "eegraph/window.hpp"

#include <cmath>
#include <stdexcept>

namespace eegraph {

EegWindow::EegWindow(Eigen::MatrixXd data, double sample_rate, int window_index,
                     std::shared_ptr<const Montage> montage)
    : data_(std::move(data)),
      sample_rate_(sample_rate),
      window_index_(window_index),
      montage_(std::move(montage)) {
    if (!montage_) throw std::invalid_argument("window needs a montage");
    if (data_.rows() != montage_->size())
        throw std::invalid_argument("window has " + std::to_string(data_.rows()) +
                                    " channels, montage has " + std::to_string(montage_->size()));
    if (data_.cols() < 2) throw std::invalid_argument("window needs at least 2 samples");
    if (sample_rate_ <= 0) throw std::invalid_argument("sample rate must be positive");
    if (!data_.allFinite()) throw std::invalid_argument("window contains non-finite samples");
}

Eigen::VectorXd EegWindow::channel(int i) const {
    if (i < 0 || i >= n_channels()) throw std::out_of_range("channel index out of range");
    return data_.row(i);
}

std::shared_ptr<const Montage> standard_montage_ptr() {
    static const auto ptr = std::shared_ptr<const Montage>(&standard_montage(), [](const Montage*) {});
    return ptr;
}

std::vector<EegWindow> slice_windows(const Eigen::MatrixXd& recording, double sample_rate,
                                     double window_seconds,
                                     std::shared_ptr<const Montage> montage) {
    if (!montage) throw std::invalid_argument("slice_windows needs a montage");
    if (sample_rate <= 0 || window_seconds <= 0)
        throw std::invalid_argument("sample rate and window length must be positive");
    const auto samples_per_window =
        static_cast<Eigen::Index>(std::llround(window_seconds * sample_rate));
    if (samples_per_window < 2) throw std::invalid_argument("window shorter than 2 samples");
    if (recording.cols() < samples_per_window)
        throw std::invalid_argument("recording shorter than one window (" +
                                    std::to_string(recording.cols()) + " < " +
                                    std::to_string(samples_per_window) + " samples)");

    const Eigen::Index n_windows = recording.cols() / samples_per_window;
    std::vector<EegWindow> windows;
    windows.reserve(static_cast<size_t>(n_windows));
    for (Eigen::Index w = 0; w < n_windows; ++w) {
        windows.emplace_back(recording.middleCols(w * samples_per_window, samples_per_window),
                             sample_rate, static_cast<int>(w), montage);
    }
    return windows;
}

}  // namespace eegraph
