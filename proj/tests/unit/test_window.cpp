#include <doctest.h>

#include "eegraph/window.hpp"

using namespace eegraph;

namespace {

Eigen::MatrixXd recording_of(int samples) {
    Eigen::MatrixXd m(standard_montage().size(), samples);
    for (int c = 0; c < m.rows(); ++c)
        for (int s = 0; s < samples; ++s) m(c, s) = c + 0.001 * s;
    return m;
}

}  // namespace

TEST_CASE("slice_windows cuts non-overlapping full windows") {
    // 10 s at 250 Hz with 4 s windows -> 2 windows of 1000 samples
    auto windows = slice_windows(recording_of(2500), 250.0, 4.0, standard_montage_ptr());
    CHECK(windows.size() == 2);
    CHECK(windows[0].n_samples() == 1000);
    CHECK(windows[1].window_index() == 1);
    // the second window starts where the first ended
    CHECK(windows[1].data()(0, 0) == doctest::Approx(0.001 * 1000));
}

TEST_CASE("slice_windows keeps an exactly-full recording as one window") {
    auto windows = slice_windows(recording_of(1000), 250.0, 4.0, standard_montage_ptr());
    CHECK(windows.size() == 1);
}

TEST_CASE("slice_windows drops the trailing partial window") {
    // 7.9 s at 200 Hz with 2 s windows: 1580 samples / 400 -> 3 windows, 380 dropped
    auto windows = slice_windows(recording_of(1580), 200.0, 2.0, standard_montage_ptr());
    CHECK(windows.size() == 3);
    CHECK(windows[2].n_samples() == 400);
}

TEST_CASE("slice_windows rejects too-short recordings") {
    CHECK_THROWS(slice_windows(recording_of(999), 250.0, 4.0, standard_montage_ptr()));
}

TEST_CASE("windows validate their shape") {
    CHECK_THROWS(EegWindow(Eigen::MatrixXd::Zero(5, 100), 250.0, 0, standard_montage_ptr()));
    CHECK_THROWS(EegWindow(Eigen::MatrixXd::Zero(19, 1), 250.0, 0, standard_montage_ptr()));
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(19, 10);
    bad(3, 4) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(EegWindow(bad, 250.0, 0, standard_montage_ptr()));
    const EegWindow w(Eigen::MatrixXd::Zero(19, 10), 250.0, 0, standard_montage_ptr());
    CHECK_THROWS_AS(w.channel(19), std::out_of_range);
}
