#include "eegraph/manifest.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "eegraph/hash.hpp"
#include "eegraph/io.hpp"

namespace eegraph {

namespace fs = std::filesystem;

void RunManifest::add_file(const fs::path& out_dir, const fs::path& file) {
    const fs::path rel = fs::relative(file, out_dir);
    if (rel.empty() || rel.string().starts_with(".."))
        throw std::invalid_argument("manifest: file " + file.string() + " is outside " +
                                    out_dir.string());
    files[rel.generic_string()] = sha256_file(file);
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["files"] = files;
    j["stage_seconds"] = stage_seconds;
    j["warnings"] = warnings;
    return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    RunManifest m;
    m.tool_version = j.value("tool_version", "");
    m.command = j.value("command", "");
    m.config_hash = j.value("config_hash", "");
    if (j.contains("files")) m.files = j.at("files").get<std::map<std::string, std::string>>();
    if (j.contains("stage_seconds"))
        m.stage_seconds = j.at("stage_seconds").get<std::map<std::string, double>>();
    if (j.contains("warnings")) m.warnings = j.at("warnings").get<std::vector<std::string>>();
    return m;
}

void RunManifest::write(const fs::path& out_dir) const {
    write_text_file(out_dir / "manifest.json", to_json() + "\n");
}

}  // namespace eegraph
