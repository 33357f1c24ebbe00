#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "physio/core.hpp"

namespace physio {

enum class FilterKind { Lowpass, Highpass, Bandpass, Notch };

const char* filter_kind_name(FilterKind kind);

// One second-order section with a0 normalized to 1:
//   y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct BiquadSection {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;

    bool is_stable() const;  // both poles strictly inside the unit circle

    bool operator==(const BiquadSection&) const = default;
};

struct FilterDesign {
    FilterKind kind = FilterKind::Lowpass;
    int order = 0;  // prototype order; a bandpass of order n has 2n poles
    std::vector<double> cutoffs_hz;
    double fs_hz = 0.0;
    std::optional<double> q;  // notch only

    bool operator==(const FilterDesign&) const = default;
};

// A designed IIR filter as cascaded second-order sections.
struct BiquadCascade {
    std::vector<BiquadSection> sections;
    FilterDesign design_meta;

    std::size_t order() const { return 2 * sections.size(); }
};

// Butterworth design via bilinear transform with frequency pre-warping.
// `order` is the analog prototype order and must be in {2, 4, 6, 8}; the
// cascade is normalized to unity gain at the passband reference (DC for
// lowpass, Nyquist for highpass, the pre-warped geometric band center for
// bandpass). Bandpass takes cutoffs {low, high}.
BiquadCascade design_butterworth(int order, FilterKind kind,
                                 const std::vector<double>& cutoffs_hz, double fs_hz);

// Single-biquad notch with zeros exactly on the unit circle at +-center_hz.
BiquadCascade design_notch(double center_hz, double q, double fs_hz);

// Cascade response evaluated on the unit circle at each frequency.
std::vector<std::complex<double>> frequency_response(const BiquadCascade& f,
                                                     const std::vector<double>& freqs_hz);

// Forward-backward (zero net phase) filtering with reflective edge padding of
// 3 * (2 * #sections) samples on each side. Requires
// signal.size() > 3 * filter order.
std::vector<double> apply_zero_phase(const BiquadCascade& f, const std::vector<double>& signal);

struct PreprocessOptions {
    double notch_q = 30.0;
    // The PPG band-pass low edge already rolls off 0.5 Hz; this re-enables the
    // literal extra 0.5 Hz high-pass on top of it.
    bool ppg_extra_hp = false;
};

// Per-modality cleaning cascade, each stage applied zero-phase:
//   ECG  = HP(0.6) -> LP(100) -> notch(50, Q)
//   PPG  = BP(0.5-5)           [optional extra HP(0.5)]
//   EDA  = LP(5)
//   RESP = LP(5)
// All Butterworth of prototype order 4. ECG requires fs > 200 Hz.
std::vector<double> preprocess_channel(ChannelKind kind, const std::vector<double>& signal,
                                       double fs_hz, const PreprocessOptions& opts = {});

// Applies preprocess_channel to every channel of a recording.
RawRecording preprocess_recording(const RawRecording& rec, const PreprocessOptions& opts = {});

}  // namespace physio
