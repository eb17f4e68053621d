#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eegraph/features.hpp"
#include "eegraph/window.hpp"

namespace eegraph {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Recording CSV: header = channel labels, one row per sample, one column per
/// channel. Reading reorders columns to montage order and requires the header
/// to be exactly the montage's label set.
void write_recording_csv(const std::filesystem::path& path, const Eigen::MatrixXd& recording,
                         const std::vector<std::string>& labels);
Eigen::MatrixXd read_recording_csv(const std::filesystem::path& path, const Montage& montage);

/// Window JSON: {"sample_rate": .., "window_index": .., "labels": [..],
/// "data": [[channel samples] per channel]}.
std::string window_to_json(const EegWindow& window);
EegWindow window_from_json(const std::string& json_text,
                           std::shared_ptr<const Montage> montage);

/// Feature CSV: one row per (window, channel), the 12 statistics in render
/// order.
void write_features_csv(const std::filesystem::path& path, const std::vector<EegWindow>& windows);

/// Matrix CSV with a label header row (and row labels when provided).
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& col_labels,
                      const std::vector<std::string>& row_labels = {});

}  // namespace eegraph
