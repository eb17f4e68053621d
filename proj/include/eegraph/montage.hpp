#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

namespace eegraph {

enum class Lobe { Frontal, Temporal, Central, Parietal, Occipital };

std::string lobe_name(Lobe lobe);          // "Frontal"
std::string lobe_phrase(Lobe lobe);        // "frontal lobe"
Lobe lobe_from_label(const std::string& label);

/// True when the two lobes are the same or anatomically adjacent
/// (Frontal-Central, Frontal-Temporal, Central-Parietal, Central-Temporal,
/// Temporal-Parietal, Parietal-Occipital).
bool lobes_adjacent_or_equal(Lobe a, Lobe b);

struct ChannelInfo {
    std::string label;
    Lobe lobe;
    Eigen::Vector3d position;  // unit-sphere head coordinates, x=right y=anterior z=up
};

/// Electrode set with pairwise Euclidean distances in normalized head space.
class Montage {
public:
    explicit Montage(std::vector<ChannelInfo> channels);

    int size() const { return static_cast<int>(channels_.size()); }
    const std::vector<ChannelInfo>& channels() const { return channels_; }
    const ChannelInfo& channel(int i) const { return channels_.at(static_cast<size_t>(i)); }
    const Eigen::MatrixXd& distances() const { return distances_; }

    /// Index of a channel label; throws std::out_of_range if unknown.
    int index_of(const std::string& label) const;
    Lobe lobe_of(const std::string& label) const { return channel(index_of(label)).lobe; }

    std::vector<std::string> labels() const;
    std::vector<int> channels_in_lobe(Lobe lobe) const;

private:
    std::vector<ChannelInfo> channels_;
    Eigen::MatrixXd distances_;
};

/// Canonical 19-channel 10-20 montage, fixed label order.
const Montage& standard_montage();

}  // namespace eegraph
