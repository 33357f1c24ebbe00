#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "physio/core.hpp"

namespace physio {

// Event effect magnitudes. Directions are fixed: a startle raises heart rate,
// skin conductance, and breathing rate; a surprise raises skin conductance
// (less strongly) and *lowers* heart rate. All deltas scale with
// `separability`, so 0 makes the two events indistinguishable by construction.
struct EffectParams {
    struct Startle {
        double eda_scr_amplitude = 1.45;
        double hr_delta_bpm = 19.0;
        double resp_rate_delta_hz = 0.17;
    } startle;
    struct Surprise {
        double eda_scr_amplitude = 0.6;
        double hr_delta_bpm = -16.0;
        double resp_rate_delta_hz = 0.0;
    } surprise;
    // Per-channel additive Gaussian noise, channel order ECG, EDA, PPG, RESP.
    // The rate channels stay nearly clean: the peak counter thresholds at the
    // window mean, so noise above the inter-beat sag would swamp beat counts.
    // Class overlap comes from the between-subject trait spread instead.
    std::array<double, kNumChannels> noise_std = {0.002, 0.05, 0.01, 0.015};
    double separability = 1.0;

    void validate() const;
};

struct SynthConfig {
    double duration_s = 420.0;  // 7-minute scenario
    double onset_s = 300.0;     // event at 5:00
    double fs_hz = 1000.0;
    // between-subject resting heart rate distribution
    double hr_mean_bpm = 70.0;
    double hr_std_bpm = 2.5;
    EffectParams params;
};

// One labeled recording: spike-train ECG, tonic EDA with a bi-exponential
// post-onset conductance response, a smoothed pulse wave locked to the ECG
// beat times, and a sinusoidal respiration channel. Fully determined by seed.
std::pair<RawRecording, EventAnnotation> synth_recording(ClassLabel label,
                                                         std::uint64_t seed,
                                                         const SynthConfig& config = {});

// n startle + n surprise recordings with distinct derived seeds, annotations
// attached, ready for epoching. Participant ids are "s####".
std::vector<RawRecording> synth_benchmark(std::size_t n_per_class, std::uint64_t seed,
                                          const SynthConfig& config = {});

}  // namespace physio
