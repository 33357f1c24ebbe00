#include "physio/core.hpp"

#include <algorithm>
#include <cctype>

namespace physio {

namespace {

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
        case ErrorCode::NonUniformSampling: return "NonUniformSampling";
        case ErrorCode::NonFiniteSample: return "NonFiniteSample";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::OnsetOutOfRange: return "OnsetOutOfRange";
        case ErrorCode::MixedLayout: return "MixedLayout";
        case ErrorCode::CutoffAboveNyquist: return "CutoffAboveNyquist";
        case ErrorCode::OddOrder: return "OddOrder";
        case ErrorCode::InvalidBand: return "InvalidBand";
        case ErrorCode::SignalTooShort: return "SignalTooShort";
        case ErrorCode::UnsupportedRate: return "UnsupportedRate";
        case ErrorCode::WindowExceedsRecording: return "WindowExceedsRecording";
        case ErrorCode::InsufficientPreOnsetData: return "InsufficientPreOnsetData";
        case ErrorCode::MissingModality: return "MissingModality";
        case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::ClassAbsent: return "ClassAbsent";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::NonPositiveC: return "NonPositiveC";
        case ErrorCode::DegenerateLabels: return "DegenerateLabels";
        case ErrorCode::BadModelFile: return "BadModelFile";
        case ErrorCode::ClassTooSmall: return "ClassTooSmall";
        case ErrorCode::ClassSmallerThanK: return "ClassSmallerThanK";
        case ErrorCode::EmptyGrid: return "EmptyGrid";
        case ErrorCode::EmptyVector: return "EmptyVector";
        case ErrorCode::InvalidDuration: return "InvalidDuration";
        case ErrorCode::RateTooLow: return "RateTooLow";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::PipelineError: return "PipelineError";
    }
    return "UnknownError";
}

const char* channel_name(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::Ecg: return "ecg";
        case ChannelKind::Eda: return "eda";
        case ChannelKind::Ppg: return "ppg";
        case ChannelKind::Resp: return "resp";
    }
    return "?";
}

ChannelKind channel_from_name(const std::string& s) {
    const std::string lower = to_lower(s);
    for (ChannelKind kind : kAllChannels) {
        if (lower == channel_name(kind)) return kind;
    }
    throw Error(ErrorCode::UnknownLabel, "unknown channel '" + s + "'");
}

const char* label_name(ClassLabel label) {
    switch (label) {
        case ClassLabel::Startle: return "startle";
        case ClassLabel::Surprise: return "surprise";
        case ClassLabel::Baseline: return "baseline";
    }
    return "?";
}

ClassLabel label_from_name(const std::string& s, std::size_t line) {
    const std::string lower = to_lower(s);
    for (ClassLabel label : kAllLabels) {
        if (lower == label_name(label)) return label;
    }
    throw Error(ErrorCode::UnknownLabel, "unknown label '" + s + "'", line);
}

void RawRecording::validate() const {
    if (sample_rate_hz <= 0.0 || !std::isfinite(sample_rate_hz)) {
        throw Error(ErrorCode::NonFiniteSample, "sample rate must be positive and finite");
    }
    const std::size_t n = channels[0].size();
    if (n < 2) {
        throw Error(ErrorCode::MalformedRow, "recording needs at least 2 samples");
    }
    for (ChannelKind kind : kAllChannels) {
        const auto& ch = channel(kind);
        if (ch.size() != n) {
            throw Error(ErrorCode::MalformedRow,
                        std::string("channel ") + channel_name(kind) + " length mismatch");
        }
        for (double v : ch) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteSample,
                            std::string("non-finite sample in channel ") + channel_name(kind));
            }
        }
    }
    const double duration = duration_s();
    for (const auto& ann : annotations) {
        if (ann.label == ClassLabel::Baseline) {
            throw Error(ErrorCode::UnknownLabel, "baseline is derived, never annotated");
        }
        if (ann.onset_s < 0.0 || ann.onset_s >= duration) {
            throw Error(ErrorCode::OnsetOutOfRange,
                        "onset " + std::to_string(ann.onset_s) + " s outside recording");
        }
    }
}

void Epoch::validate() const {
    if (sample_rate_hz <= 0.0) {
        throw Error(ErrorCode::NonFiniteSample, "epoch sample rate must be positive");
    }
    const std::size_t expected = window_sample_count(window_s, sample_rate_hz);
    for (ChannelKind kind : kAllChannels) {
        if (channel(kind).size() != expected) {
            throw Error(ErrorCode::MalformedRow,
                        std::string("epoch channel ") + channel_name(kind) +
                            " has wrong sample count");
        }
    }
}

const char* feature_name(FeatureId id) {
    switch (id) {
        case FeatureId::Mean: return "mean";
        case FeatureId::Std: return "std";
        case FeatureId::Min: return "min";
        case FeatureId::Max: return "max";
        case FeatureId::PeakCount: return "peak_count";
    }
    return "?";
}

std::string feature_column_name(const FeatureDesc& desc) {
    return std::string(channel_name(desc.channel)) + "_" + feature_name(desc.feature);
}

FeatureDesc feature_desc_from_column(const std::string& column, std::size_t line) {
    const auto sep = column.find('_');
    if (sep != std::string::npos) {
        const std::string chan = column.substr(0, sep);
        const std::string feat = column.substr(sep + 1);
        for (ChannelKind kind : kAllChannels) {
            if (chan != channel_name(kind)) continue;
            for (int f = 0; f < kFeaturesPerChannel; ++f) {
                const auto id = static_cast<FeatureId>(f);
                if (feat == feature_name(id)) return FeatureDesc{kind, id};
            }
        }
    }
    throw Error(ErrorCode::MissingColumn, "unrecognized feature column '" + column + "'", line);
}

void FeatureVector::validate() const {
    if (values.size() != layout.size()) {
        throw Error(ErrorCode::MixedLayout, "feature values/layout size mismatch");
    }
    for (double v : values) {
        if (std::isnan(v)) {
            throw Error(ErrorCode::NonFiniteSample, "NaN feature value");
        }
    }
}

}  // namespace physio
