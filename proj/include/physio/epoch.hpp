#pragma once

#include <string>
#include <vector>

#include "physio/core.hpp"

namespace physio {

struct EpochingConfig {
    double window_s = 10.0;          // one of {3, 5, 7, 10}
    double baseline_guard_s = 60.0;  // gap between baseline end and event onset

    void validate() const;
};

// Event window [onset, onset + window) on all four channels, labeled by the
// annotation. The recording is expected to be pre-processed already.
Epoch extract_event_epoch(const RawRecording& rec, const EventAnnotation& ann,
                          const EpochingConfig& cfg);

// Baseline window [onset - guard - window, onset - guard), labeled Baseline.
Epoch extract_baseline_epoch(const RawRecording& rec, const EventAnnotation& ann,
                             const EpochingConfig& cfg);

struct LabeledEpoch {
    Epoch epoch;
    ClassLabel label;
    std::string participant_id;
};

// One event epoch plus one baseline epoch per recording (each recording must
// carry exactly one annotation), ordered by participant id. Baseline epochs
// outnumber event classes 1:1 per recording; balancing happens downstream.
std::vector<LabeledEpoch> build_dataset(const std::vector<RawRecording>& recordings,
                                        const EpochingConfig& cfg);

}  // namespace physio
