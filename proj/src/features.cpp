#include "physio/features.hpp"

#include <algorithm>
#include <cmath>

namespace physio {

std::size_t peak_count(std::span<const double> signal) {
    const std::size_t n = signal.size();
    if (n < 3) {
        throw Error(ErrorCode::SignalTooShort, "peak_count needs at least 3 samples");
    }
    double mean = 0.0;
    for (double v : signal) mean += v;
    mean /= static_cast<double>(n);

    std::size_t count = 0;
    std::size_t i = 1;
    while (i + 1 <= n - 1) {
        if (signal[i] > signal[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && signal[j + 1] == signal[i]) ++j;  // flat top
            if (j + 1 < n && signal[j + 1] < signal[i]) {
                if (signal[i] > mean) ++count;
                i = j + 1;
                continue;
            }
            if (j + 1 >= n) break;  // plateau runs into the end; not a peak
            i = j + 1;
            continue;
        }
        ++i;
    }
    return count;
}

std::array<double, kFeaturesPerChannel> channel_features(std::span<const double> signal) {
    const auto n = static_cast<double>(signal.size());
    double mean = 0.0, mn = signal[0], mx = signal[0];
    for (double v : signal) {
        mean += v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    mean /= n;
    double var = 0.0;
    for (double v : signal) var += (v - mean) * (v - mean);
    var /= n;  // population variance: the moment of the window itself
    return {mean, std::sqrt(var), mn, mx, static_cast<double>(peak_count(signal))};
}

FeatureVector extract_features(const Epoch& epoch, const std::vector<ChannelKind>& modalities) {
    FeatureVector out;
    // fixed channel order regardless of the request order
    for (ChannelKind kind : kAllChannels) {
        if (std::find(modalities.begin(), modalities.end(), kind) == modalities.end()) continue;
        const auto& signal = epoch.channel(kind);
        if (signal.empty()) {
            throw Error(ErrorCode::MissingModality,
                        std::string("epoch has no ") + channel_name(kind) + " samples");
        }
        const auto feats = channel_features(signal);
        for (int f = 0; f < kFeaturesPerChannel; ++f) {
            out.values.push_back(feats[f]);
            out.layout.push_back({kind, static_cast<FeatureId>(f)});
        }
    }
    if (out.values.empty()) {
        throw Error(ErrorCode::MissingModality, "no modalities requested");
    }
    out.validate();
    return out;
}

FeatureVector extract_features(const Epoch& epoch) {
    return extract_features(
        epoch, {ChannelKind::Ecg, ChannelKind::Eda, ChannelKind::Ppg, ChannelKind::Resp});
}

}  // namespace physio
