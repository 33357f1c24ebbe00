#pragma once

#include <vector>

#include "physio/core.hpp"
#include "physio/models.hpp"

namespace physio {

// Concatenates per-modality feature vectors into one, in fixed channel order.
// All four modalities must be present exactly once.
FeatureVector early_fuse(const std::vector<FeatureVector>& per_modality);

// Majority vote over per-modality predictions. Ties go to the highest summed
// normalized score across the tied labels, then to the lowest ClassLabel.
// Every prediction must carry scores over the same class set.
ClassLabel late_fuse(const std::vector<Prediction>& votes,
                     const std::vector<ClassLabel>& classes);

// Slices the entries of one channel back out of a fused vector.
FeatureVector slice_modality(const FeatureVector& fused, ChannelKind kind);

}  // namespace physio
