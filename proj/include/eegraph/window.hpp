#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "eegraph/montage.hpp"

namespace eegraph {

/// One time window of multichannel EEG, rows = channels, columns = samples,
/// amplitudes in microvolts. Immutable after construction.
class EegWindow {
public:
    EegWindow(Eigen::MatrixXd data, double sample_rate, int window_index,
              std::shared_ptr<const Montage> montage);

    const Eigen::MatrixXd& data() const { return data_; }
    double sample_rate() const { return sample_rate_; }
    int window_index() const { return window_index_; }
    const Montage& montage() const { return *montage_; }
    std::shared_ptr<const Montage> montage_ptr() const { return montage_; }

    int n_channels() const { return static_cast<int>(data_.rows()); }
    int n_samples() const { return static_cast<int>(data_.cols()); }

    /// Row view of one channel; throws std::out_of_range on a bad index.
    Eigen::VectorXd channel(int i) const;

private:
    Eigen::MatrixXd data_;
    double sample_rate_;
    int window_index_;
    std::shared_ptr<const Montage> montage_;
};

/// Shared handle to the canonical montage, for building windows against it.
std::shared_ptr<const Montage> standard_montage_ptr();

/// Cuts a recording (rows = channels) into consecutive non-overlapping
/// windows; a trailing partial window is dropped. Throws if the recording is
/// shorter than one window.
std::vector<EegWindow> slice_windows(const Eigen::MatrixXd& recording, double sample_rate,
                                     double window_seconds,
                                     std::shared_ptr<const Montage> montage);

}  // namespace eegraph
