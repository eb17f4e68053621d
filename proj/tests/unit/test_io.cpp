#include <doctest.h>

#include <filesystem>
#include <random>

#include "eegraph/hash.hpp"
#include "eegraph/io.hpp"
#include "eegraph/manifest.hpp"

using namespace eegraph;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("eegraph_io_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("sha256 matches a known vector") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("recording CSV round trip restores the samples") {
    TempDir tmp;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 10.0);
    Eigen::MatrixXd recording(19, 40);
    for (int c = 0; c < 19; ++c)
        for (int s = 0; s < 40; ++s) recording(c, s) = noise(rng);

    const auto path = tmp.path / "rec.csv";
    write_recording_csv(path, recording, standard_montage().labels());
    const Eigen::MatrixXd back = read_recording_csv(path, standard_montage());
    CHECK(back.rows() == 19);
    CHECK(back.cols() == 40);
    CHECK((back - recording).cwiseAbs().maxCoeff() < 1e-6);  // %.6f formatting
}

TEST_CASE("recording CSV reorders shuffled header columns to montage order") {
    TempDir tmp;
    const auto path = tmp.path / "rec.csv";
    // two known channels swapped in the header
    auto labels = standard_montage().labels();
    std::swap(labels[0], labels[5]);
    Eigen::MatrixXd recording = Eigen::MatrixXd::Zero(19, 3);
    recording(0, 0) = 42.0;  // written under labels[0], which is the montage's channel 5
    write_recording_csv(path, recording, labels);
    const Eigen::MatrixXd back = read_recording_csv(path, standard_montage());
    CHECK(back(5, 0) == doctest::Approx(42.0));
    CHECK(back(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("recording CSV rejects unknown labels") {
    TempDir tmp;
    const auto path = tmp.path / "rec.csv";
    auto labels = standard_montage().labels();
    labels[3] = "bogus";
    write_recording_csv(path, Eigen::MatrixXd::Zero(19, 3), labels);
    CHECK_THROWS(read_recording_csv(path, standard_montage()));
}

TEST_CASE("window JSON round trip") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> noise(0.0, 5.0);
    Eigen::MatrixXd data(19, 25);
    for (int c = 0; c < 19; ++c)
        for (int s = 0; s < 25; ++s) data(c, s) = noise(rng);
    const EegWindow window(data, 250.0, 3, standard_montage_ptr());
    const EegWindow back = window_from_json(window_to_json(window), standard_montage_ptr());
    CHECK(back.sample_rate() == 250.0);
    CHECK(back.window_index() == 3);
    CHECK(back.data() == window.data());  // doubles survive JSON round trip exactly
}

TEST_CASE("features CSV has one row per window and channel") {
    TempDir tmp;
    Eigen::MatrixXd data = Eigen::MatrixXd::Random(19, 50);
    std::vector<EegWindow> windows;
    windows.emplace_back(data, 100.0, 0, standard_montage_ptr());
    windows.emplace_back(data * 2.0, 100.0, 1, standard_montage_ptr());
    const auto path = tmp.path / "features.csv";
    write_features_csv(path, windows);
    const std::string text = read_text_file(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 19);
    CHECK(text.starts_with("window,channel,mean_amplitude,std,dominant_frequency,min,max,median,"
                           "q25,q75,skewness,kurtosis,energy,zero_crossing_rate\n"));
    CHECK(text.find(",Fp1,") != std::string::npos);
}

TEST_CASE("manifest records hashes and flags outside files") {
    TempDir tmp;
    write_text_file(tmp.path / "a.txt", "hello");
    RunManifest manifest;
    manifest.tool_version = "test";
    manifest.add_file(tmp.path, tmp.path / "a.txt");
    CHECK(manifest.files.at("a.txt") == sha256_hex("hello"));
    CHECK_THROWS(manifest.add_file(tmp.path, fs::temp_directory_path() / "elsewhere.txt"));

    manifest.write(tmp.path);
    const RunManifest back = RunManifest::from_json(read_text_file(tmp.path / "manifest.json"));
    CHECK(back.same_outputs(manifest));
    RunManifest other = back;
    other.files["a.txt"] = sha256_hex("tampered");
    CHECK_FALSE(other.same_outputs(manifest));
}
