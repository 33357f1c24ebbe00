#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "physio/error.hpp"

namespace physio {

// ---------------------------------------------------------------------------
// Channels and labels
// ---------------------------------------------------------------------------

// Channel order is fixed (ECG < EDA < PPG < RESP) and used everywhere a
// recording, epoch, or feature vector is laid out, so concatenation order is
// deterministic.
enum class ChannelKind : int { Ecg = 0, Eda = 1, Ppg = 2, Resp = 3 };

inline constexpr int kNumChannels = 4;
inline constexpr std::array<ChannelKind, kNumChannels> kAllChannels = {
    ChannelKind::Ecg, ChannelKind::Eda, ChannelKind::Ppg, ChannelKind::Resp};

const char* channel_name(ChannelKind kind);           // "ecg", "eda", ...
ChannelKind channel_from_name(const std::string& s);  // throws UnknownLabel

// Startle < Surprise < Baseline; this total order breaks every tie in the
// library (argmax, votes, pairwise schemes).
enum class ClassLabel : int { Startle = 0, Surprise = 1, Baseline = 2 };

inline constexpr std::array<ClassLabel, 3> kAllLabels = {
    ClassLabel::Startle, ClassLabel::Surprise, ClassLabel::Baseline};

const char* label_name(ClassLabel label);                          // "startle", ...
ClassLabel label_from_name(const std::string& s, std::size_t line = 0);  // case-insensitive

// ---------------------------------------------------------------------------
// Recordings
// ---------------------------------------------------------------------------

struct EventAnnotation {
    double onset_s = 0.0;
    ClassLabel label = ClassLabel::Startle;  // Startle or Surprise only; Baseline is derived

    bool operator==(const EventAnnotation&) const = default;
};

// A synchronized multi-channel recording. Samples are stored per channel in
// the fixed channel order; all channels have the same length.
struct RawRecording {
    double sample_rate_hz = 0.0;
    std::array<std::vector<double>, kNumChannels> channels;
    std::vector<EventAnnotation> annotations;
    std::string participant_id;

    std::size_t n_samples() const { return channels[0].size(); }
    double duration_s() const { return static_cast<double>(n_samples()) / sample_rate_hz; }

    const std::vector<double>& channel(ChannelKind kind) const {
        return channels[static_cast<int>(kind)];
    }
    std::vector<double>& channel(ChannelKind kind) {
        return channels[static_cast<int>(kind)];
    }

    // Enforces the type invariants (n >= 2, fs > 0, equal lengths, all finite).
    void validate() const;

    bool operator==(const RawRecording&) const = default;
};

// ---------------------------------------------------------------------------
// Epochs
// ---------------------------------------------------------------------------

// Window length in samples: round-half-up of window_s * fs, so the count is
// independent of how the window was cut.
inline std::size_t window_sample_count(double window_s, double fs_hz) {
    return static_cast<std::size_t>(std::floor(window_s * fs_hz + 0.5));
}

// One labeled window of all four pre-processed channels.
struct Epoch {
    ClassLabel label = ClassLabel::Baseline;
    double window_s = 0.0;  // one of {3, 5, 7, 10}
    double sample_rate_hz = 0.0;
    std::array<std::vector<double>, kNumChannels> channels;

    const std::vector<double>& channel(ChannelKind kind) const {
        return channels[static_cast<int>(kind)];
    }

    void validate() const;

    bool operator==(const Epoch&) const = default;
};

// ---------------------------------------------------------------------------
// Feature vectors
// ---------------------------------------------------------------------------

// Per-channel feature order is fixed: mean, std, min, max, peak_count.
enum class FeatureId : int { Mean = 0, Std = 1, Min = 2, Max = 3, PeakCount = 4 };

inline constexpr int kFeaturesPerChannel = 5;

const char* feature_name(FeatureId id);  // "mean", "std", "min", "max", "peak_count"

struct FeatureDesc {
    ChannelKind channel;
    FeatureId feature;

    bool operator==(const FeatureDesc&) const = default;
};

// Name used for the feature-table column, e.g. "eda_peak_count".
std::string feature_column_name(const FeatureDesc& desc);
FeatureDesc feature_desc_from_column(const std::string& column, std::size_t line = 0);

struct FeatureVector {
    std::vector<double> values;
    std::vector<FeatureDesc> layout;  // layout.size() == values.size()

    void validate() const;  // sizes match, no NaN

    bool operator==(const FeatureVector&) const = default;
};

}  // namespace physio
