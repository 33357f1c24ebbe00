#include "physio/fusion.hpp"

#include <algorithm>

namespace physio {

FeatureVector early_fuse(const std::vector<FeatureVector>& per_modality) {
    FeatureVector fused;
    for (ChannelKind kind : kAllChannels) {
        const FeatureVector* found = nullptr;
        for (const auto& vec : per_modality) {
            if (!vec.layout.empty() && vec.layout.front().channel == kind) {
                if (found) {
                    throw Error(ErrorCode::MissingModality,
                                std::string("duplicate modality ") + channel_name(kind));
                }
                found = &vec;
            }
        }
        if (!found) {
            throw Error(ErrorCode::MissingModality,
                        std::string("missing modality ") + channel_name(kind));
        }
        for (const auto& desc : found->layout) {
            if (desc.channel != kind) {
                throw Error(ErrorCode::MixedLayout, "input vector spans several modalities");
            }
        }
        fused.values.insert(fused.values.end(), found->values.begin(), found->values.end());
        fused.layout.insert(fused.layout.end(), found->layout.begin(), found->layout.end());
    }
    fused.validate();
    return fused;
}

FeatureVector slice_modality(const FeatureVector& fused, ChannelKind kind) {
    FeatureVector out;
    for (std::size_t i = 0; i < fused.layout.size(); ++i) {
        if (fused.layout[i].channel == kind) {
            out.values.push_back(fused.values[i]);
            out.layout.push_back(fused.layout[i]);
        }
    }
    if (out.values.empty()) {
        throw Error(ErrorCode::MissingModality,
                    std::string("fused vector has no ") + channel_name(kind) + " entries");
    }
    return out;
}

ClassLabel late_fuse(const std::vector<Prediction>& votes,
                     const std::vector<ClassLabel>& classes) {
    if (votes.empty()) {
        throw Error(ErrorCode::EmptyEnsemble, "late fusion needs at least one prediction");
    }
    std::vector<int> counts(classes.size(), 0);
    std::vector<double> score_sum(classes.size(), 0.0);
    for (const auto& vote : votes) {
        const auto it = std::find(classes.begin(), classes.end(), vote.label);
        if (it == classes.end() || vote.scores.size() != classes.size()) {
            throw Error(ErrorCode::EmptyEnsemble, "prediction over inconsistent class set");
        }
        ++counts[static_cast<std::size_t>(it - classes.begin())];
        // normalize defensively; model scores already sum to 1
        double z = 0.0;
        for (double s : vote.scores) z += s;
        if (z <= 0.0) z = 1.0;
        for (std::size_t k = 0; k < classes.size(); ++k) score_sum[k] += vote.scores[k] / z;
    }

    const int top = *std::max_element(counts.begin(), counts.end());
    std::size_t best = classes.size();
    for (std::size_t k = 0; k < classes.size(); ++k) {
        if (counts[k] != top) continue;
        if (best == classes.size() || score_sum[k] > score_sum[best]) best = k;
        // equal summed scores keep the earlier (lower) ClassLabel
    }
    return classes[best];
}

}  // namespace physio
