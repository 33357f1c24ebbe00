#pragma once

#include <span>
#include <vector>

#include "physio/core.hpp"

namespace physio {

// Local maxima above the signal mean. Strict rises and falls; a flat run
// x[i-1] < x[i] = ... = x[j] > x[j+1] counts as one peak. Needs length >= 3.
std::size_t peak_count(std::span<const double> signal);

// Per requested modality, in fixed channel order, the 5-tuple
// [mean, population std, min, max, peak_count].
FeatureVector extract_features(const Epoch& epoch, const std::vector<ChannelKind>& modalities);

// Convenience: all four modalities.
FeatureVector extract_features(const Epoch& epoch);

// The five descriptors for one channel vector, in feature order.
std::array<double, kFeaturesPerChannel> channel_features(std::span<const double> signal);

}  // namespace physio
