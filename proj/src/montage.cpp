#include "eegraph/montage.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace eegraph {

std::string lobe_name(Lobe lobe) {
    switch (lobe) {
        case Lobe::Frontal: return "Frontal";
        case Lobe::Temporal: return "Temporal";
        case Lobe::Central: return "Central";
        case Lobe::Parietal: return "Parietal";
        case Lobe::Occipital: return "Occipital";
    }
    throw std::logic_error("unknown lobe");
}

std::string lobe_phrase(Lobe lobe) {
    switch (lobe) {
        case Lobe::Frontal: return "frontal lobe";
        case Lobe::Temporal: return "temporal lobe";
        case Lobe::Central: return "central region";
        case Lobe::Parietal: return "parietal lobe";
        case Lobe::Occipital: return "occipital lobe";
    }
    throw std::logic_error("unknown lobe");
}

Lobe lobe_from_label(const std::string& label) {
    if (label.empty()) throw std::invalid_argument("empty channel label");
    // Fp and F are both frontal; the first letter decides the rest.
    switch (label[0]) {
        case 'F': return Lobe::Frontal;
        case 'T': return Lobe::Temporal;
        case 'C': return Lobe::Central;
        case 'P': return Lobe::Parietal;
        case 'O': return Lobe::Occipital;
        default: throw std::invalid_argument("channel label '" + label + "' has no 10-20 lobe prefix");
    }
}

bool lobes_adjacent_or_equal(Lobe a, Lobe b) {
    if (a == b) return true;
    auto pair_is = [&](Lobe x, Lobe y) { return (a == x && b == y) || (a == y && b == x); };
    return pair_is(Lobe::Frontal, Lobe::Central) || pair_is(Lobe::Frontal, Lobe::Temporal) ||
           pair_is(Lobe::Central, Lobe::Parietal) || pair_is(Lobe::Central, Lobe::Temporal) ||
           pair_is(Lobe::Temporal, Lobe::Parietal) || pair_is(Lobe::Parietal, Lobe::Occipital);
}

Montage::Montage(std::vector<ChannelInfo> channels) : channels_(std::move(channels)) {
    if (channels_.empty()) throw std::invalid_argument("montage needs at least one channel");
    std::set<std::string> seen;
    for (const auto& ch : channels_) {
        if (!seen.insert(ch.label).second)
            throw std::invalid_argument("duplicate channel label '" + ch.label + "'");
    }
    const int n = size();
    distances_.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            distances_(i, j) = (channels_[static_cast<size_t>(i)].position -
                                channels_[static_cast<size_t>(j)].position)
                                   .norm();
        }
    }
}

int Montage::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (channels_[static_cast<size_t>(i)].label == label) return i;
    throw std::out_of_range("no channel '" + label + "' in montage");
}

std::vector<std::string> Montage::labels() const {
    std::vector<std::string> out;
    out.reserve(channels_.size());
    for (const auto& ch : channels_) out.push_back(ch.label);
    return out;
}

std::vector<int> Montage::channels_in_lobe(Lobe lobe) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (channels_[static_cast<size_t>(i)].lobe == lobe) out.push_back(i);
    return out;
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Unit-sphere position from inclination (degrees from vertex) and azimuth
// (degrees from +y/anterior, positive toward +x/right).
Eigen::Vector3d sphere(double incl_deg, double azim_deg) {
    const double incl = incl_deg * kDeg;
    const double azim = azim_deg * kDeg;
    return {std::sin(incl) * std::sin(azim), std::sin(incl) * std::cos(azim), std::cos(incl)};
}

// Great-circle midpoint of two unit vectors.
Eigen::Vector3d arc_midpoint(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return (a + b).normalized();
}

std::vector<ChannelInfo> standard_channels() {
    // 10-20 placement: the outer ring sits 72 deg from the vertex with
    // electrodes every 36 deg of azimuth; Fz/Cz/Pz/C3/C4 lie 36 deg from the
    // vertex on the midline and central coronal arcs; F3/F4/P3/P4 are arc
    // midpoints between the midline and the ring.
    const Eigen::Vector3d fz = sphere(36, 0), cz = sphere(0, 0), pz = sphere(36, 180);
    const Eigen::Vector3d c3 = sphere(36, -90), c4 = sphere(36, 90);
    const Eigen::Vector3d f7 = sphere(72, -54), f8 = sphere(72, 54);
    const Eigen::Vector3d t5 = sphere(72, -126), t6 = sphere(72, 126);

    std::vector<std::pair<std::string, Eigen::Vector3d>> defs = {
        {"Fp1", sphere(72, -18)}, {"Fp2", sphere(72, 18)},
        {"F7", f7},               {"F3", arc_midpoint(fz, f7)},
        {"Fz", fz},               {"F4", arc_midpoint(fz, f8)},
        {"F8", f8},
        {"T3", sphere(72, -90)},  {"C3", c3},
        {"Cz", cz},               {"C4", c4},
        {"T4", sphere(72, 90)},
        {"T5", t5},               {"P3", arc_midpoint(pz, t5)},
        {"Pz", pz},               {"P4", arc_midpoint(pz, t6)},
        {"T6", t6},
        {"O1", sphere(72, -162)}, {"O2", sphere(72, 162)},
    };

    std::vector<ChannelInfo> channels;
    channels.reserve(defs.size());
    for (auto& [label, pos] : defs)
        channels.push_back({label, lobe_from_label(label), pos});
    return channels;
}

}  // namespace

const Montage& standard_montage() {
    static const Montage montage(standard_channels());
    return montage;
}

}  // namespace eegraph
