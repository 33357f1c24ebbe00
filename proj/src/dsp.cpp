#include "physio/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace physio {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

using cplx = std::complex<double>;

// Pre-warped analog frequency (rad/s) for the bilinear transform.
double prewarp(double f_hz, double fs_hz) {
    return 2.0 * fs_hz * std::tan(kPi * f_hz / fs_hz);
}

cplx bilinear(cplx s, double fs_hz) {
    const double k = 2.0 * fs_hz;
    return (k + s) / (k - s);
}

void check_cutoff(double f_hz, double fs_hz) {
    if (!(f_hz > 0.0) || !(f_hz < fs_hz / 2.0)) {
        throw Error(ErrorCode::CutoffAboveNyquist,
                    "cutoff " + std::to_string(f_hz) + " Hz outside (0, fs/2) for fs = " +
                        std::to_string(fs_hz) + " Hz");
    }
}

// Normalized Butterworth prototype poles (cutoff 1 rad/s, left half-plane).
// Even order only, so poles come in strict conjugate pairs.
std::vector<cplx> butterworth_prototype(int order) {
    std::vector<cplx> poles;
    poles.reserve(order);
    for (int k = 1; k <= order; ++k) {
        const double theta = kPi * (2.0 * k - 1.0) / (2.0 * order);
        poles.emplace_back(-std::sin(theta), std::cos(theta));
    }
    return poles;
}

struct PoleZeroGain {
    std::vector<cplx> poles;  // digital
    std::vector<cplx> zeros;  // digital
};

cplx response_at(const BiquadCascade& f, double freq_hz, double fs_hz) {
    const double w = 2.0 * kPi * freq_hz / fs_hz;
    const cplx z_inv = std::exp(cplx(0.0, -w));
    cplx h(1.0, 0.0);
    for (const auto& s : f.sections) {
        h *= (s.b0 + s.b1 * z_inv + s.b2 * z_inv * z_inv) /
             (1.0 + s.a1 * z_inv + s.a2 * z_inv * z_inv);
    }
    return h;
}

// Builds sections from digital conjugate pole pairs: one pair per biquad, the
// numerator taken from the paired zeros. Pairs are ordered by pole modulus so
// the highest-Q pair (closest to the unit circle) runs last.
BiquadCascade assemble_sections(const PoleZeroGain& pz, const FilterDesign& meta,
                                double ref_freq_hz) {
    // Pair each pole with its conjugate partner.
    std::vector<std::pair<cplx, cplx>> pole_pairs;
    std::vector<bool> used(pz.poles.size(), false);
    for (std::size_t i = 0; i < pz.poles.size(); ++i) {
        if (used[i]) continue;
        std::size_t partner = i;
        double best = 1e300;
        for (std::size_t j = i + 1; j < pz.poles.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(pz.poles[j] - std::conj(pz.poles[i]));
            if (d < best) {
                best = d;
                partner = j;
            }
        }
        used[i] = used[partner] = true;
        pole_pairs.emplace_back(pz.poles[i], pz.poles[partner]);
    }
    std::sort(pole_pairs.begin(), pole_pairs.end(), [](const auto& a, const auto& b) {
        return std::abs(a.first) < std::abs(b.first);
    });

    // Zeros for Butterworth designs are all at z = +1 and/or z = -1; count them.
    std::size_t zeros_at_plus1 = 0, zeros_at_minus1 = 0;
    for (const cplx& z : pz.zeros) {
        if (std::abs(z - cplx(1.0, 0.0)) < 1e-9) {
            ++zeros_at_plus1;
        } else {
            ++zeros_at_minus1;
        }
    }

    BiquadCascade cascade;
    cascade.design_meta = meta;
    for (const auto& [p, q] : pole_pairs) {
        BiquadSection s;
        s.a1 = -(p + q).real();
        s.a2 = (p * q).real();
        if (zeros_at_plus1 >= 1 && zeros_at_minus1 >= 1) {
            // bandpass section: zero at +1 and at -1 -> b = [1, 0, -1]
            s.b0 = 1.0;
            s.b1 = 0.0;
            s.b2 = -1.0;
            --zeros_at_plus1;
            --zeros_at_minus1;
        } else if (zeros_at_minus1 >= 2) {
            s.b0 = 1.0;
            s.b1 = 2.0;
            s.b2 = 1.0;  // (1 + z^-1)^2, lowpass
            zeros_at_minus1 -= 2;
        } else if (zeros_at_plus1 >= 2) {
            s.b0 = 1.0;
            s.b1 = -2.0;
            s.b2 = 1.0;  // (1 - z^-1)^2, highpass
            zeros_at_plus1 -= 2;
        }
        if (!s.is_stable()) {
            throw Error(ErrorCode::InvalidBand, "designed section is unstable");
        }
        cascade.sections.push_back(s);
    }

    // Normalize overall gain to 1 at the reference frequency, distributed
    // evenly across sections. The reference may sit exactly at Nyquist, so the
    // unchecked evaluator is used here.
    const double mag = std::abs(response_at(cascade, ref_freq_hz, meta.fs_hz));
    if (!(mag > 0.0) || !std::isfinite(mag)) {
        throw Error(ErrorCode::InvalidBand, "degenerate response at reference frequency");
    }
    const double per_section = std::pow(1.0 / mag, 1.0 / cascade.sections.size());
    for (auto& s : cascade.sections) {
        s.b0 *= per_section;
        s.b1 *= per_section;
        s.b2 *= per_section;
    }
    return cascade;
}

// Steady-state second-order section state for a unit step input, transposed
// direct form II. Scaled by the first sample so the forward pass starts
// transient-free on constant extensions.
void step_initial_state(const BiquadSection& s, double x0, double& z1, double& z2) {
    const double h1 = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    z2 = (s.b2 - s.a2 * h1) * x0;
    z1 = (s.b1 + s.b2 - (s.a1 + s.a2) * h1) * x0;
}

void filter_in_place(const BiquadCascade& f, std::vector<double>& x) {
    for (const auto& s : f.sections) {
        double z1, z2;
        step_initial_state(s, x.empty() ? 0.0 : x.front(), z1, z2);
        for (double& v : x) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
}

}  // namespace

const char* filter_kind_name(FilterKind kind) {
    switch (kind) {
        case FilterKind::Lowpass: return "lowpass";
        case FilterKind::Highpass: return "highpass";
        case FilterKind::Bandpass: return "bandpass";
        case FilterKind::Notch: return "notch";
    }
    return "?";
}

bool BiquadSection::is_stable() const {
    // |a2| < 1 and |a1| < 1 + a2 is the exact stability triangle.
    return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2;
}

BiquadCascade design_butterworth(int order, FilterKind kind,
                                 const std::vector<double>& cutoffs_hz, double fs_hz) {
    if (order != 2 && order != 4 && order != 6 && order != 8) {
        throw Error(ErrorCode::OddOrder,
                    "order must be one of {2, 4, 6, 8}, got " + std::to_string(order));
    }
    if (kind == FilterKind::Bandpass) {
        if (cutoffs_hz.size() != 2) {
            throw Error(ErrorCode::InvalidBand, "bandpass needs {low, high} cutoffs");
        }
        if (!(cutoffs_hz[0] < cutoffs_hz[1])) {
            throw Error(ErrorCode::InvalidBand, "bandpass requires low < high");
        }
    } else if (kind == FilterKind::Lowpass || kind == FilterKind::Highpass) {
        if (cutoffs_hz.size() != 1) {
            throw Error(ErrorCode::InvalidBand, "lowpass/highpass take exactly one cutoff");
        }
    } else {
        throw Error(ErrorCode::InvalidBand, "use design_notch for notch filters");
    }
    for (double f : cutoffs_hz) check_cutoff(f, fs_hz);

    const auto proto = butterworth_prototype(order);
    PoleZeroGain pz;
    FilterDesign meta{kind, order, cutoffs_hz, fs_hz, std::nullopt};
    double ref_hz = 0.0;

    if (kind == FilterKind::Lowpass) {
        const double wc = prewarp(cutoffs_hz[0], fs_hz);
        for (const cplx& p : proto) pz.poles.push_back(bilinear(wc * p, fs_hz));
        pz.zeros.assign(order, cplx(-1.0, 0.0));  // analog zeros at infinity
        ref_hz = 0.0;
    } else if (kind == FilterKind::Highpass) {
        const double wc = prewarp(cutoffs_hz[0], fs_hz);
        for (const cplx& p : proto) pz.poles.push_back(bilinear(wc / p, fs_hz));
        pz.zeros.assign(order, cplx(1.0, 0.0));  // analog zeros at s = 0
        ref_hz = fs_hz / 2.0;
    } else {
        const double w1 = prewarp(cutoffs_hz[0], fs_hz);
        const double w2 = prewarp(cutoffs_hz[1], fs_hz);
        const double w0 = std::sqrt(w1 * w2);
        const double bw = w2 - w1;
        for (const cplx& p : proto) {
            // s^2 - bw*p*s + w0^2 = 0
            const cplx half = bw * p / 2.0;
            const cplx root = std::sqrt(half * half - w0 * w0);
            pz.poles.push_back(bilinear(half + root, fs_hz));
            pz.poles.push_back(bilinear(half - root, fs_hz));
        }
        for (int i = 0; i < order; ++i) {
            pz.zeros.emplace_back(1.0, 0.0);   // n analog zeros at s = 0
            pz.zeros.emplace_back(-1.0, 0.0);  // n at infinity
        }
        // digital frequency that maps onto the analog geometric center
        ref_hz = fs_hz / kPi * std::atan(w0 / (2.0 * fs_hz));
    }

    return assemble_sections(pz, meta, ref_hz);
}

BiquadCascade design_notch(double center_hz, double q, double fs_hz) {
    check_cutoff(center_hz, fs_hz);
    if (!(q > 0.0)) {
        throw Error(ErrorCode::InvalidBand, "notch Q must be positive");
    }
    const double w0 = 2.0 * kPi * center_hz / fs_hz;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;

    BiquadSection s;
    s.b0 = 1.0 / a0;
    s.b1 = -2.0 * std::cos(w0) / a0;
    s.b2 = 1.0 / a0;
    s.a1 = -2.0 * std::cos(w0) / a0;
    s.a2 = (1.0 - alpha) / a0;

    BiquadCascade cascade;
    cascade.sections.push_back(s);
    cascade.design_meta = FilterDesign{FilterKind::Notch, 2, {center_hz}, fs_hz, q};
    return cascade;
}

std::vector<std::complex<double>> frequency_response(const BiquadCascade& f,
                                                     const std::vector<double>& freqs_hz) {
    const double fs = f.design_meta.fs_hz > 0 ? f.design_meta.fs_hz : 1.0;
    std::vector<cplx> out;
    out.reserve(freqs_hz.size());
    for (double freq : freqs_hz) {
        if (freq < 0.0 || freq >= fs / 2.0) {
            throw Error(ErrorCode::CutoffAboveNyquist,
                        "response frequency " + std::to_string(freq) + " Hz outside [0, fs/2)");
        }
        out.push_back(response_at(f, freq, fs));
    }
    return out;
}

std::vector<double> apply_zero_phase(const BiquadCascade& f, const std::vector<double>& signal) {
    const std::size_t order = f.order();
    const std::size_t pad = 3 * order;
    if (signal.size() <= 3 * order) {
        throw Error(ErrorCode::SignalTooShort,
                    "signal length " + std::to_string(signal.size()) +
                        " must exceed 3x filter order (" + std::to_string(3 * order) + ")");
    }
    const std::size_t n = signal.size();

    // Odd reflection about the end points keeps level continuity at the seams.
    std::vector<double> buf;
    buf.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) buf.push_back(2.0 * signal.front() - signal[i]);
    buf.insert(buf.end(), signal.begin(), signal.end());
    for (std::size_t i = 1; i <= pad; ++i) buf.push_back(2.0 * signal.back() - signal[n - 1 - i]);

    filter_in_place(f, buf);
    std::reverse(buf.begin(), buf.end());
    filter_in_place(f, buf);
    std::reverse(buf.begin(), buf.end());

    return std::vector<double>(buf.begin() + pad, buf.begin() + pad + n);
}

std::vector<double> preprocess_channel(ChannelKind kind, const std::vector<double>& signal,
                                       double fs_hz, const PreprocessOptions& opts) {
    std::vector<BiquadCascade> stages;
    switch (kind) {
        case ChannelKind::Ecg:
            if (fs_hz <= 200.0) {
                throw Error(ErrorCode::UnsupportedRate,
                            "ECG cleaning needs fs > 200 Hz, got " + std::to_string(fs_hz));
            }
            stages.push_back(design_butterworth(4, FilterKind::Highpass, {0.6}, fs_hz));
            stages.push_back(design_butterworth(4, FilterKind::Lowpass, {100.0}, fs_hz));
            stages.push_back(design_notch(50.0, opts.notch_q, fs_hz));
            break;
        case ChannelKind::Ppg:
            stages.push_back(design_butterworth(4, FilterKind::Bandpass, {0.5, 5.0}, fs_hz));
            if (opts.ppg_extra_hp) {
                stages.push_back(design_butterworth(4, FilterKind::Highpass, {0.5}, fs_hz));
            }
            break;
        case ChannelKind::Eda:
        case ChannelKind::Resp:
            stages.push_back(design_butterworth(4, FilterKind::Lowpass, {5.0}, fs_hz));
            break;
    }
    std::vector<double> out = signal;
    for (const auto& stage : stages) out = apply_zero_phase(stage, out);
    return out;
}

RawRecording preprocess_recording(const RawRecording& rec, const PreprocessOptions& opts) {
    RawRecording out = rec;
    for (ChannelKind kind : kAllChannels) {
        out.channel(kind) = preprocess_channel(kind, rec.channel(kind), rec.sample_rate_hz, opts);
    }
    return out;
}

}  // namespace physio
