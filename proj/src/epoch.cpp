#include "physio/epoch.hpp"

#include <algorithm>
#include <cmath>

namespace physio {

namespace {

bool valid_window(double w) {
    return w == 3.0 || w == 5.0 || w == 7.0 || w == 10.0;
}

Epoch cut(const RawRecording& rec, double start_s, double window_s, ClassLabel label,
          ErrorCode overflow_code) {
    const double fs = rec.sample_rate_hz;
    const std::size_t count = window_sample_count(window_s, fs);
    const auto start = static_cast<std::ptrdiff_t>(std::floor(start_s * fs + 0.5));
    if (start < 0 || static_cast<std::size_t>(start) + count > rec.n_samples()) {
        throw Error(overflow_code,
                    "window [" + std::to_string(start_s) + ", " +
                        std::to_string(start_s + window_s) + ") s outside recording '" +
                        rec.participant_id + "'");
    }
    Epoch epoch;
    epoch.label = label;
    epoch.window_s = window_s;
    epoch.sample_rate_hz = fs;
    for (int c = 0; c < kNumChannels; ++c) {
        const auto begin = rec.channels[c].begin() + start;
        epoch.channels[c].assign(begin, begin + static_cast<std::ptrdiff_t>(count));
    }
    return epoch;
}

}  // namespace

void EpochingConfig::validate() const {
    if (!valid_window(window_s)) {
        throw Error(ErrorCode::InvalidDuration, "window must be one of {3, 5, 7, 10} s");
    }
    if (baseline_guard_s < 0.0) {
        throw Error(ErrorCode::InvalidDuration, "baseline guard must be >= 0");
    }
}

Epoch extract_event_epoch(const RawRecording& rec, const EventAnnotation& ann,
                          const EpochingConfig& cfg) {
    cfg.validate();
    if (ann.onset_s + cfg.window_s > rec.duration_s()) {
        throw Error(ErrorCode::WindowExceedsRecording,
                    "event window ends after recording '" + rec.participant_id + "'");
    }
    return cut(rec, ann.onset_s, cfg.window_s, ann.label, ErrorCode::WindowExceedsRecording);
}

Epoch extract_baseline_epoch(const RawRecording& rec, const EventAnnotation& ann,
                             const EpochingConfig& cfg) {
    cfg.validate();
    const double start = ann.onset_s - cfg.baseline_guard_s - cfg.window_s;
    if (start < 0.0) {
        throw Error(ErrorCode::InsufficientPreOnsetData,
                    "not enough signal before onset in '" + rec.participant_id + "'");
    }
    return cut(rec, start, cfg.window_s, ClassLabel::Baseline,
               ErrorCode::InsufficientPreOnsetData);
}

std::vector<LabeledEpoch> build_dataset(const std::vector<RawRecording>& recordings,
                                        const EpochingConfig& cfg) {
    cfg.validate();
    std::vector<const RawRecording*> ordered;
    ordered.reserve(recordings.size());
    for (const auto& rec : recordings) ordered.push_back(&rec);
    std::sort(ordered.begin(), ordered.end(), [](const RawRecording* a, const RawRecording* b) {
        return a->participant_id < b->participant_id;
    });

    std::vector<LabeledEpoch> dataset;
    for (const RawRecording* rec : ordered) {
        if (rec->annotations.size() != 1) {
            throw Error(ErrorCode::PipelineError,
                        "recording '" + rec->participant_id + "' must carry exactly one event, has " +
                            std::to_string(rec->annotations.size()));
        }
        const EventAnnotation& ann = rec->annotations.front();
        try {
            dataset.push_back({extract_event_epoch(*rec, ann, cfg), ann.label,
                               rec->participant_id});
            dataset.push_back({extract_baseline_epoch(*rec, ann, cfg), ClassLabel::Baseline,
                               rec->participant_id});
        } catch (const Error& e) {
            throw Error(e.code(),
                        std::string(e.what()) + " [participant " + rec->participant_id + "]");
        }
    }
    return dataset;
}

}  // namespace physio
