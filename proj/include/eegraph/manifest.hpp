#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace eegraph {

/// Inventory of one command run: every emitted file with its content hash,
/// plus the config hash, tool version, stage timings and warnings. Two runs
/// are reproductions of each other iff config_hash and files agree (timings
/// are informational).
struct RunManifest {
    std::string tool_version;
    std::string command;
    std::string config_hash;
    std::map<std::string, std::string> files;  // out-dir-relative path -> sha256
    std::map<std::string, double> stage_seconds;
    std::vector<std::string> warnings;

    /// Hashes and records a file that must live under out_dir.
    void add_file(const std::filesystem::path& out_dir, const std::filesystem::path& file);

    std::string to_json() const;
    static RunManifest from_json(const std::string& json_text);

    /// Writes manifest.json into out_dir (the manifest never lists itself).
    void write(const std::filesystem::path& out_dir) const;

    bool same_outputs(const RunManifest& other) const {
        return config_hash == other.config_hash && files == other.files;
    }
};

}  // namespace eegraph
