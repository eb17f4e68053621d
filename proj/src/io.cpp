#include "eegraph/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace eegraph {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

void write_recording_csv(const fs::path& path, const Eigen::MatrixXd& recording,
                         const std::vector<std::string>& labels) {
    if (recording.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::invalid_argument("recording CSV: label count does not match channel count");
    std::string out;
    for (size_t c = 0; c < labels.size(); ++c) {
        if (c) out += ',';
        out += labels[c];
    }
    out += '\n';
    for (Eigen::Index s = 0; s < recording.cols(); ++s) {
        for (Eigen::Index c = 0; c < recording.rows(); ++c) {
            if (c) out += ',';
            out += fmt::format("{:.6f}", recording(c, s));
        }
        out += '\n';
    }
    write_text_file(path, out);
}

Eigen::MatrixXd read_recording_csv(const fs::path& path, const Montage& montage) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("recording CSV is empty: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv_line(line);
    if (static_cast<int>(header.size()) != montage.size())
        throw std::runtime_error(fmt::format("recording CSV has {} channels, montage has {}",
                                             header.size(), montage.size()));
    std::vector<int> column_to_channel(header.size());
    for (size_t c = 0; c < header.size(); ++c)
        column_to_channel[c] = montage.index_of(header[c]);  // throws on unknown label

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("recording CSV row has wrong field count");
        std::vector<double> row(fields.size());
        for (size_t c = 0; c < fields.size(); ++c) row[c] = std::stod(fields[c]);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("recording CSV has no samples: " + path.string());

    Eigen::MatrixXd recording(montage.size(), static_cast<Eigen::Index>(rows.size()));
    for (size_t s = 0; s < rows.size(); ++s)
        for (size_t c = 0; c < rows[s].size(); ++c)
            recording(column_to_channel[c], static_cast<Eigen::Index>(s)) = rows[s][c];
    return recording;
}

std::string window_to_json(const EegWindow& window) {
    nlohmann::ordered_json j;
    j["sample_rate"] = window.sample_rate();
    j["window_index"] = window.window_index();
    j["labels"] = window.montage().labels();
    auto data = nlohmann::ordered_json::array();
    for (int c = 0; c < window.n_channels(); ++c) {
        const Eigen::VectorXd row = window.channel(c);
        data.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    j["data"] = std::move(data);
    return j.dump();
}

EegWindow window_from_json(const std::string& json_text,
                           std::shared_ptr<const Montage> montage) {
    if (!montage) montage = standard_montage_ptr();
    const auto j = nlohmann::json::parse(json_text);
    const auto labels = j.at("labels").get<std::vector<std::string>>();
    if (static_cast<int>(labels.size()) != montage->size())
        throw std::runtime_error("window JSON channel count does not match montage");
    const auto& data = j.at("data");
    if (data.size() != labels.size()) throw std::runtime_error("window JSON: labels/data mismatch");

    Eigen::Index n_samples = -1;
    Eigen::MatrixXd m(montage->size(), 0);
    for (size_t c = 0; c < labels.size(); ++c) {
        const auto samples = data[c].get<std::vector<double>>();
        if (n_samples < 0) {
            n_samples = static_cast<Eigen::Index>(samples.size());
            m.resize(montage->size(), n_samples);
        }
        if (static_cast<Eigen::Index>(samples.size()) != n_samples)
            throw std::runtime_error("window JSON: ragged channel data");
        const int channel = montage->index_of(labels[c]);
        m.row(channel) =
            Eigen::Map<const Eigen::VectorXd>(samples.data(), n_samples).transpose();
    }
    return EegWindow(std::move(m), j.at("sample_rate").get<double>(),
                     j.value("window_index", 0), montage);
}

void write_features_csv(const fs::path& path, const std::vector<EegWindow>& windows) {
    std::string out =
        "window,channel,mean_amplitude,std,dominant_frequency,min,max,median,q25,q75,"
        "skewness,kurtosis,energy,zero_crossing_rate\n";
    for (const auto& window : windows) {
        for (int c = 0; c < window.n_channels(); ++c) {
            const StatFeatures f = compute_stat_features(window.channel(c), window.sample_rate());
            out += fmt::format(
                "{},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},"
                "{:.9g},{}\n",
                window.window_index(), window.montage().channel(c).label, f.mean_amplitude, f.std,
                f.dominant_frequency, f.min, f.max, f.median, f.q25, f.q75, f.skewness, f.kurtosis,
                f.energy, f.zero_crossing_rate);
        }
    }
    write_text_file(path, out);
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& col_labels,
                      const std::vector<std::string>& row_labels) {
    if (static_cast<Eigen::Index>(col_labels.size()) != m.cols())
        throw std::invalid_argument("matrix CSV: column label count mismatch");
    if (!row_labels.empty() && static_cast<Eigen::Index>(row_labels.size()) != m.rows())
        throw std::invalid_argument("matrix CSV: row label count mismatch");

    std::string out;
    if (!row_labels.empty()) out += "id";
    for (size_t c = 0; c < col_labels.size(); ++c) {
        if (c || !row_labels.empty()) out += ',';
        out += col_labels[c];
    }
    out += '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (!row_labels.empty()) out += row_labels[static_cast<size_t>(r)];
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c || !row_labels.empty()) out += ',';
            out += fmt::format("{:.6f}", m(r, c));
        }
        out += '\n';
    }
    write_text_file(path, out);
}

}  // namespace eegraph
