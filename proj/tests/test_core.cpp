#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "physio/core.hpp"
#include "physio/features.hpp"
#include "physio/ingest.hpp"
#include "physio/rng.hpp"
#include "physio/synth.hpp"

using namespace physio;

TEST_CASE("channel order is fixed ECG < EDA < PPG < RESP") {
    CHECK(static_cast<int>(ChannelKind::Ecg) < static_cast<int>(ChannelKind::Eda));
    CHECK(static_cast<int>(ChannelKind::Eda) < static_cast<int>(ChannelKind::Ppg));
    CHECK(static_cast<int>(ChannelKind::Ppg) < static_cast<int>(ChannelKind::Resp));
    CHECK(kAllChannels.size() == 4);
    CHECK(std::string(channel_name(ChannelKind::Ecg)) == "ecg");
    CHECK(channel_from_name("RESP") == ChannelKind::Resp);
    CHECK_THROWS_AS(channel_from_name("emg"), Error);
}

TEST_CASE("label order is Startle < Surprise < Baseline") {
    CHECK(static_cast<int>(ClassLabel::Startle) < static_cast<int>(ClassLabel::Surprise));
    CHECK(static_cast<int>(ClassLabel::Surprise) < static_cast<int>(ClassLabel::Baseline));
    CHECK(label_from_name("Startle") == ClassLabel::Startle);
    CHECK(label_from_name("SURPRISE") == ClassLabel::Surprise);
    CHECK_THROWS_AS(label_from_name("calm"), Error);
}

TEST_CASE("recording invariants are enforced") {
    RawRecording rec;
    rec.sample_rate_hz = 100.0;
    for (auto& ch : rec.channels) ch = {0.0, 1.0, 2.0};
    CHECK_NOTHROW(rec.validate());

    SUBCASE("channel length mismatch") {
        rec.channel(ChannelKind::Resp).push_back(3.0);
        CHECK_THROWS_AS(rec.validate(), Error);
    }
    SUBCASE("non-finite sample") {
        rec.channel(ChannelKind::Eda)[1] = std::nan("");
        CHECK_THROWS_WITH_AS(rec.validate(), doctest::Contains("NonFiniteSample"), Error);
    }
    SUBCASE("too short") {
        for (auto& ch : rec.channels) ch = {0.0};
        CHECK_THROWS_AS(rec.validate(), Error);
    }
    SUBCASE("baseline annotation rejected") {
        rec.annotations.push_back({0.01, ClassLabel::Baseline});
        CHECK_THROWS_AS(rec.validate(), Error);
    }
    SUBCASE("onset outside recording") {
        rec.annotations.push_back({5.0, ClassLabel::Startle});
        CHECK_THROWS_AS(rec.validate(), Error);
    }
}

TEST_CASE("window sample counts round half up") {
    CHECK(window_sample_count(3.0, 1000.0) == 3000);
    CHECK(window_sample_count(10.0, 1000.0) == 10000);
    CHECK(window_sample_count(3.0, 256.5) == 770);  // 769.5 rounds up
}

TEST_CASE("feature vector validation") {
    FeatureVector vec;
    vec.values = {1.0, 2.0};
    vec.layout = {{ChannelKind::Ecg, FeatureId::Mean}};
    CHECK_THROWS_AS(vec.validate(), Error);
    vec.layout.push_back({ChannelKind::Ecg, FeatureId::Std});
    CHECK_NOTHROW(vec.validate());
    vec.values[0] = std::nan("");
    CHECK_THROWS_AS(vec.validate(), Error);
}

TEST_CASE("feature column names round-trip") {
    for (ChannelKind kind : kAllChannels) {
        for (int f = 0; f < kFeaturesPerChannel; ++f) {
            const FeatureDesc desc{kind, static_cast<FeatureId>(f)};
            CHECK(feature_desc_from_column(feature_column_name(desc)) == desc);
        }
    }
    CHECK_THROWS_AS(feature_desc_from_column("ecg_energy"), Error);
}

// Serialization round-trip: recordings written to the disk format and parsed
// back are bit-identical in every field.
TEST_CASE("recording serialization round-trip is bit-identical") {
    Rng rng(123);
    for (double fs : {1000.0, 250.0, 256.5}) {
        RawRecording rec;
        rec.sample_rate_hz = fs;
        rec.participant_id = "p1";
        for (auto& ch : rec.channels) {
            ch.resize(200);
            for (double& v : ch) v = rng.gauss() * 1e3;
        }
        rec.annotations = {{0.05, ClassLabel::Surprise}};
        rec.validate();

        const std::string text = write_recording(rec);
        RawRecording back = parse_recording(text, std::nullopt, "p1");
        back.annotations = parse_annotations(write_annotations(rec.annotations), back);

        CHECK(back.sample_rate_hz == rec.sample_rate_hz);  // exact, not approximate
        for (ChannelKind kind : kAllChannels) {
            const auto& a = rec.channel(kind);
            const auto& b = back.channel(kind);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(std::memcmp(&a[i], &b[i], sizeof(double)) == 0);
            }
        }
        CHECK(back.annotations == rec.annotations);
        CHECK(back.participant_id == rec.participant_id);
    }
}

TEST_CASE("feature extraction is layout-stable") {
    auto [rec, ann] = synth_recording(ClassLabel::Startle, 9,
                                      SynthConfig{120.0, 90.0, 250.0, {}});
    Epoch epoch;
    epoch.label = ClassLabel::Startle;
    epoch.window_s = 3.0;
    epoch.sample_rate_hz = 250.0;
    for (int c = 0; c < kNumChannels; ++c) {
        epoch.channels[c].assign(rec.channels[c].begin(), rec.channels[c].begin() + 750);
    }
    const FeatureVector a = extract_features(epoch);
    const FeatureVector b = extract_features(epoch);
    CHECK(a == b);
    REQUIRE(a.layout.size() == 20);
    CHECK(a.layout.front().channel == ChannelKind::Ecg);
    CHECK(a.layout.back().channel == ChannelKind::Resp);
}
