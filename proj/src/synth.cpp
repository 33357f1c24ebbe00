#include "physio/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "physio/rng.hpp"

namespace physio {

namespace {

constexpr double kTwoPi = 2.0 * 3.141592653589793238462643383279502884;

// Per-recording physiology drawn once per subject; class separation has to
// beat this between-subject spread, which is what keeps the benchmark
// learnable but not trivial.
struct SubjectTraits {
    double hr_bpm;        // resting heart rate
    double tonic_eda;     // baseline conductance level
    double drift_phase;   // slow tonic drift phase
    double resp_rate_hz;  // resting breathing rate
    double scr_gain;      // lognormal subject gain on the conductance response
};

SubjectTraits draw_subject(Rng& rng, double hr_mean_bpm, double hr_std_bpm) {
    SubjectTraits t;
    t.hr_bpm = std::clamp(hr_mean_bpm + hr_std_bpm * rng.gauss(), 30.0, 180.0);
    t.tonic_eda = 2.0 + 0.3 * rng.gauss();
    t.drift_phase = rng.uniform(0.0, kTwoPi);
    t.resp_rate_hz = std::clamp(0.3 + 0.012 * rng.gauss(), 0.12, 0.6);
    t.scr_gain = std::exp(0.25 * rng.gauss());
    return t;
}

// Beat times from integrating the instantaneous rate; the rate steps by
// hr_delta at onset. Small multiplicative jitter per interval.
std::vector<double> beat_times(double duration_s, double onset_s, double hr_bpm,
                               double hr_delta_bpm, Rng& rng) {
    std::vector<double> beats;
    double t = 0.2 + 0.6 * rng.uniform();
    while (t < duration_s) {
        beats.push_back(t);
        const double bpm = hr_bpm + (t >= onset_s ? hr_delta_bpm : 0.0);
        const double ibi = 60.0 / std::max(bpm, 20.0);
        t += ibi * (1.0 + 0.01 * rng.gauss());
    }
    return beats;
}

// Adds a Gaussian bump at each center; amplitudes are per center.
void add_bumps(std::vector<double>& x, double fs, const std::vector<double>& centers,
               const std::vector<double>& amplitudes, double sigma_s) {
    const double half_support = 4.0 * sigma_s;
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    for (std::size_t k = 0; k < centers.size(); ++k) {
        const double c = centers[k];
        const auto lo = std::max<std::ptrdiff_t>(
            0, static_cast<std::ptrdiff_t>(std::ceil((c - half_support) * fs)));
        const auto hi = std::min<std::ptrdiff_t>(
            n - 1, static_cast<std::ptrdiff_t>(std::floor((c + half_support) * fs)));
        for (std::ptrdiff_t i = lo; i <= hi; ++i) {
            const double dt = static_cast<double>(i) / fs - c;
            x[static_cast<std::size_t>(i)] +=
                amplitudes[k] * std::exp(-dt * dt / (2.0 * sigma_s * sigma_s));
        }
    }
}

// Bi-exponential conductance response normalized to peak 1.
double scr_shape(double t_since_onset, double tau_rise, double tau_decay, double norm) {
    if (t_since_onset < 0.0) return 0.0;
    return (std::exp(-t_since_onset / tau_decay) - std::exp(-t_since_onset / tau_rise)) / norm;
}

}  // namespace

void EffectParams::validate() const {
    if (separability < 0.0) {
        throw Error(ErrorCode::ConfigError, "separability must be >= 0");
    }
    for (double ns : noise_std) {
        if (ns < 0.0) {
            throw Error(ErrorCode::ConfigError, "noise_std must be >= 0");
        }
    }
}

std::pair<RawRecording, EventAnnotation> synth_recording(ClassLabel label, std::uint64_t seed,
                                                         const SynthConfig& config) {
    if (label == ClassLabel::Baseline) {
        throw Error(ErrorCode::UnknownLabel, "baseline is derived, not generated");
    }
    if (!(config.duration_s > config.onset_s + 15.0)) {
        throw Error(ErrorCode::InvalidDuration,
                    "duration must exceed onset + 15 s (duration " +
                        std::to_string(config.duration_s) + ", onset " +
                        std::to_string(config.onset_s) + ")");
    }
    if (config.fs_hz < 250.0) {
        throw Error(ErrorCode::RateTooLow, "generator needs fs >= 250 Hz");
    }
    config.params.validate();

    const EffectParams& p = config.params;
    const double sep = p.separability;
    const bool is_startle = label == ClassLabel::Startle;
    // The label enters only through these three magnitudes, so at
    // separability 0 both labels generate bit-identical recordings.
    const double hr_delta =
        sep * (is_startle ? p.startle.hr_delta_bpm : p.surprise.hr_delta_bpm);
    const double scr_amp =
        sep * (is_startle ? p.startle.eda_scr_amplitude : p.surprise.eda_scr_amplitude);
    const double resp_delta =
        sep * (is_startle ? p.startle.resp_rate_delta_hz : p.surprise.resp_rate_delta_hz);

    const double fs = config.fs_hz;
    const double onset = config.onset_s;
    const auto n = static_cast<std::size_t>(std::floor(config.duration_s * fs + 0.5));

    Rng subject_rng(mix_seed(seed, 1));
    Rng beat_rng(mix_seed(seed, 2));
    Rng noise_rng(mix_seed(seed, 3));
    Rng eda_rng(mix_seed(seed, 4));
    Rng ppg_rng(mix_seed(seed, 5));
    const SubjectTraits traits =
        draw_subject(subject_rng, config.hr_mean_bpm, config.hr_std_bpm);

    RawRecording rec;
    rec.sample_rate_hz = fs;
    for (auto& ch : rec.channels) ch.assign(n, 0.0);

    // ECG: narrow spike train; PPG: the same beats smoothed, delayed, with
    // per-beat amplitude variability (vasomotion) plus a post-onset amplitude
    // dip from peripheral vasoconstriction, deeper for a startle. The dip is
    // the PPG channel's own class cue, independent of the shared beat rate.
    const double vaso_tau_rise = 0.5, vaso_tau_decay = 8.0;
    const double vaso_t_peak = std::log(vaso_tau_decay / vaso_tau_rise) * vaso_tau_rise *
                               vaso_tau_decay / (vaso_tau_decay - vaso_tau_rise);
    const double vaso_norm = std::exp(-vaso_t_peak / vaso_tau_decay) -
                             std::exp(-vaso_t_peak / vaso_tau_rise);
    const double vaso_depth =
        sep * (is_startle ? 0.35 : 0.22) * std::exp(0.2 * subject_rng.gauss());

    const auto beats = beat_times(config.duration_s, onset, traits.hr_bpm, hr_delta, beat_rng);
    add_bumps(rec.channel(ChannelKind::Ecg), fs, beats,
              std::vector<double>(beats.size(), 1.0), 0.006);
    std::vector<double> ppg_beats = beats;
    std::vector<double> ppg_amps(beats.size());
    for (double& b : ppg_beats) b += 0.25;  // peripheral pulse delay
    for (std::size_t k = 0; k < beats.size(); ++k) {
        const double constriction =
            vaso_depth * scr_shape(beats[k] - onset, vaso_tau_rise, vaso_tau_decay, vaso_norm);
        ppg_amps[k] = std::max(0.2, 1.0 - constriction) * std::exp(0.08 * ppg_rng.gauss());
    }
    add_bumps(rec.channel(ChannelKind::Ppg), fs, ppg_beats, ppg_amps, 0.08);

    // EDA: tonic level + slow drift + spontaneous non-specific conductance
    // responses throughout + the event-locked response after onset.
    const double tau_rise = 0.75, tau_decay = 4.0;
    const double t_peak = std::log(tau_decay / tau_rise) * tau_rise * tau_decay /
                          (tau_decay - tau_rise);
    const double scr_norm =
        std::exp(-t_peak / tau_decay) - std::exp(-t_peak / tau_rise);
    const double subject_scr = scr_amp * traits.scr_gain;
    auto& eda = rec.channel(ChannelKind::Eda);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        eda[i] = traits.tonic_eda + 0.1 * std::sin(kTwoPi * 0.01 * t + traits.drift_phase) +
                 subject_scr * scr_shape(t - onset, tau_rise, tau_decay, scr_norm);
    }
    // spontaneous responses arrive with exponential gaps, mean 25 s
    for (double t_spont = 2.0 - 15.0 * std::log(1.0 - eda_rng.uniform());;) {
        const double amp = 0.22 * std::exp(0.5 * eda_rng.gauss()) * traits.scr_gain;
        if (t_spont >= config.duration_s) break;
        const auto lo = static_cast<std::size_t>(t_spont * fs);
        const auto hi = std::min(n, lo + static_cast<std::size_t>(25.0 * fs));
        for (std::size_t i = lo; i < hi; ++i) {
            const double t = static_cast<double>(i) / fs;
            eda[i] += amp * scr_shape(t - t_spont, tau_rise, tau_decay, scr_norm);
        }
        t_spont += -15.0 * std::log(1.0 - eda_rng.uniform());
    }

    // RESP: sinusoid with a continuous-phase rate step at onset.
    auto& resp = rec.channel(ChannelKind::Resp);
    const double phase_at_onset = kTwoPi * traits.resp_rate_hz * onset;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double phase = t < onset
                                 ? kTwoPi * traits.resp_rate_hz * t
                                 : phase_at_onset + kTwoPi * (traits.resp_rate_hz + resp_delta) *
                                                        (t - onset);
        resp[i] = std::sin(phase);
    }

    for (ChannelKind kind : kAllChannels) {
        const double ns = p.noise_std[static_cast<int>(kind)];
        if (ns <= 0.0) continue;
        for (double& v : rec.channel(kind)) v += ns * noise_rng.gauss();
    }

    EventAnnotation ann{onset, label};
    rec.annotations = {ann};
    rec.validate();
    return {rec, ann};
}

std::vector<RawRecording> synth_benchmark(std::size_t n_per_class, std::uint64_t seed,
                                          const SynthConfig& config) {
    if (n_per_class < 5) {
        throw Error(ErrorCode::ConfigError, "benchmark needs n >= 5 per class");
    }
    std::vector<RawRecording> recordings;
    recordings.reserve(2 * n_per_class);
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
        const ClassLabel label = i % 2 == 0 ? ClassLabel::Startle : ClassLabel::Surprise;
        auto [rec, ann] = synth_recording(label, mix_seed(seed, 0xda7aULL, i + 1), config);
        char id[24];
        std::snprintf(id, sizeof(id), "s%04u", static_cast<unsigned>(i + 1));
        rec.participant_id = id;
        recordings.push_back(std::move(rec));
    }
    return recordings;
}

}  // namespace physio
